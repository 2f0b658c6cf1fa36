"""Closed-form curvature apparatus for canal hypersurfaces in E^4.

All entries follow the closed forms verbatim; the redundant factorizations
(determinant of g, the two shape-operator routes) are cross-asserted at every
evaluation so a transcription slip cannot pass silently.  Conventions:
m = 1 - rho'^2, w = sqrt(m), P = k1*w*cos(v2)*cos(v3) + rho'',
Q = rho*P - m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .curve import FrenetData
from .errors import (CoordinateSingularityError, InconsistencyError,
                     RegularityError)

Q_TOL = 1e-10
POLE_TOL = 1e-6
DETG_XCHECK_TOL = 1e-9
SHAPE_XCHECK_TOL = 1e-8


@dataclass
class FormsBundle:
    g: np.ndarray
    det_g: float
    h: np.ndarray
    det_h: float
    normal: np.ndarray
    shape: np.ndarray
    Q: float


@dataclass
class CurvatureReport:
    K: float
    H: float
    principal: tuple
    identity_residual: float
    location: tuple


def _scalars(fren: FrenetData, profile_at, v2, v3):
    k1, k2, k3 = (float(k) for k in fren.curvatures[:3])
    rho, d1, d2 = float(profile_at[0]), float(profile_at[1]), float(profile_at[2])
    m = 1.0 - d1 * d1
    if m < 1e-12 or rho <= 0.0:
        raise RegularityError(f"invalid profile state rho={rho}, rho'={d1}")
    w = math.sqrt(m)
    c2, s2 = math.cos(v2), math.sin(v2)
    c3, s3 = math.cos(v3), math.sin(v3)
    p = k1 * w * c2 * c3 + d2
    q = rho * p - m
    return k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q


def helper_q(fren, profile_at, v2, v3):
    """Q = rho (k1 sqrt(1-rho'^2) cos v2 cos v3 + rho'') - 1 + rho'^2."""
    return _scalars(fren, profile_at, v2, v3)[-1]


def unit_normal(fren, profile_at, v2, v3) -> np.ndarray:
    """Unit normal -rho' F1 + w (cos v2 cos v3 F2 + sin v2 cos v3 F3 + sin v3 F4)."""
    _, _, _, _, d1, _, _, w, c2, s2, c3, s3, _, _ = _scalars(fren, profile_at, v2, v3)
    coeff = np.array([-d1, w * c2 * c3, w * s2 * c3, w * s3])
    return coeff @ fren.frame


def first_form(fren, profile_at, v2, v3):
    """First fundamental form, its determinant (factorized form) and Q.

    The determinant is computed both by 3x3 cofactor expansion and by the
    factorization rho^4 m Q^2 cos^2 v3; the factorized value is returned
    after asserting agreement.
    """
    k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q = _scalars(
        fren, profile_at, v2, v3)
    t = d1 * (d1 * d1 + rho * d2 - 1.0)
    a = k2 * rho * m * s2 * c3 + k1 * rho * d1 * w + t * c2 * c3
    b = -k2 * rho * m * c2 * c3 + k3 * rho * m * s3 + t * s2 * c3
    cterm = t * s3 - k3 * rho * m * s2 * c3
    g11 = (m * q * q + a * a + b * b + cterm * cterm) / m
    g12 = rho * rho * (k1 * d1 * w * s2 + k2 * m * c3 - k3 * m * c2 * s3) * c3
    g13 = rho * rho * (k1 * d1 * w * c2 * s3 + k3 * m * s2)
    g22 = rho * rho * m * c3 * c3
    g33 = rho * rho * m
    g = np.array([[g11, g12, g13], [g12, g22, 0.0], [g13, 0.0, g33]])
    det_fact = rho ** 4 * m * q * q * c3 * c3
    det_direct = linalg.det(g)
    scale = max(abs(det_fact), abs(det_direct), 1e-30)
    if abs(det_fact - det_direct) > max(DETG_XCHECK_TOL * scale, 1e-14):
        raise InconsistencyError(
            f"det g factorization mismatch: {det_fact} vs {det_direct}")
    return g, det_fact, q


def second_form(fren, profile_at, v2, v3):
    """Second fundamental form and its determinant (factorized, cross-checked)."""
    k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q = _scalars(
        fren, profile_at, v2, v3)
    big = ((k2 * k2 * c3 * c3 - k2 * k3 * c2 * math.sin(2.0 * v3)
            + k3 * k3 * (c3 * c3 * s2 * s2 + s3 * s3)) * m * m
           + k1 * k1 * m * (m * c2 * c2 * c3 * c3 + d1 * d1)
           + d2 * d2
           + 2.0 * k1 * w * (k2 * d1 * m * s2 + d2 * c2) * c3)
    h11 = rho * big / (d1 * d1 - 1.0) + k1 * w * c2 * c3 + d2
    h12 = rho * (-k1 * d1 * w * s2 + m * (k3 * c2 * s3 - k2 * c3)) * c3
    h13 = rho * (-k1 * d1 * w * c2 * s3 - k3 * m * s2)
    h22 = -rho * m * c3 * c3
    h33 = -rho * m
    h = np.array([[h11, h12, h13], [h12, h22, 0.0], [h13, 0.0, h33]])
    det_fact = rho * rho * m * (m * p - rho * p * p) * c3 * c3
    det_direct = linalg.det(h)
    scale = max(abs(det_fact), abs(det_direct), 1e-30)
    if abs(det_fact - det_direct) > max(DETG_XCHECK_TOL * scale, 1e-12):
        raise InconsistencyError(
            f"det h factorization mismatch: {det_fact} vs {det_direct}")
    return h, det_fact


def shape_operator(fren, profile_at, v2, v3) -> np.ndarray:
    """Shape operator, from the closed entries, cross-checked against g^-1 h."""
    k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q = _scalars(
        fren, profile_at, v2, v3)
    if abs(q) <= Q_TOL:
        raise CoordinateSingularityError(f"focal locus: Q = {q}")
    if abs(c3) <= POLE_TOL:
        raise CoordinateSingularityError(f"coordinate pole: cos v3 = {c3}")
    s11 = (m * p - rho * p * p) / (q * q)
    s21 = (k1 * d1 * w * s2 / c3 + k2 * m - k3 * m * c2 * (s3 / c3)) / (rho * q)
    s31 = (q * k3 * m * s2
           + k1 * d1 * c2 * s3 * (-m * w + rho * (k1 * m * c2 * c3 + w * d2))
           ) / (rho * q * q)
    s = np.array([[s11, 0.0, 0.0],
                  [s21, -1.0 / rho, 0.0],
                  [s31, 0.0, -1.0 / rho]])
    g, _, _ = first_form(fren, profile_at, v2, v3)
    h, _ = second_form(fren, profile_at, v2, v3)
    s_num = linalg.inv3(g) @ h
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s_num)) > SHAPE_XCHECK_TOL * scale:
        raise InconsistencyError("closed-form shape operator disagrees with g^-1 h")
    return s


def gaussian_curvature(fren, profile_at, v2, v3) -> float:
    k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q = _scalars(
        fren, profile_at, v2, v3)
    if abs(q) <= Q_TOL:
        raise CoordinateSingularityError(f"focal locus: Q = {q}")
    u = c2 * c3
    num = (m * (k1 * w * u + d2)
           - rho * (k1 * k1 * m * u * u + d2 * d2 + 2.0 * k1 * d2 * w * u))
    return num / (rho * rho * q * q)


def mean_curvature(fren, profile_at, v2, v3) -> float:
    k1, k2, k3, rho, d1, d2, m, w, c2, s2, c3, s3, p, q = _scalars(
        fren, profile_at, v2, v3)
    if abs(q) <= Q_TOL:
        raise CoordinateSingularityError(f"focal locus: Q = {q}")
    u = c2 * c3
    num = (-3.0 * rho * rho * (k1 * k1 * m * u * u + 2.0 * k1 * d2 * w * u + d2 * d2)
           - 2.0 * m * m
           + 5.0 * rho * m * (k1 * w * u + d2))
    return num / (3.0 * rho * q * q)


def principal_curvatures(fren, profile_at, v2, v3):
    """(-1/rho, -1/rho, K rho^2), asserted against eig_shape3 of the closed S."""
    rho = float(profile_at[0])
    big_k = gaussian_curvature(fren, profile_at, v2, v3)
    kappa = (-1.0 / rho, -1.0 / rho, big_k * rho * rho)
    s = shape_operator(fren, profile_at, v2, v3)
    eigs = linalg.eig_shape3(s)
    scale = max(1.0, max(abs(x) for x in kappa))
    if max(abs(a - b) for a, b in zip(sorted(kappa), eigs)) > 1e-8 * scale:
        raise InconsistencyError(
            f"principal curvatures {kappa} disagree with eig_shape3 {eigs}")
    return kappa


def tubular_curvatures(k1, lam, v2, v3):
    """Closed K and H of a tubular (constant-radius) hypersurface."""
    u = math.cos(v2) * math.cos(v3)
    denom = 1.0 - k1 * lam * u
    if abs(denom) <= Q_TOL:
        raise CoordinateSingularityError(
            f"focal condition k1*lambda*cos v2*cos v3 = 1 at ({v2}, {v3})")
    big_k = k1 * u / (lam * lam * denom)
    big_h = (2.0 - 3.0 * k1 * lam * u) / (3.0 * lam * (-denom))
    return big_k, big_h


def identity_residual(big_k, big_h, rho) -> float:
    """|3 H rho - K rho^3 + 2|, zero for the closed forms."""
    return abs(3.0 * big_h * rho - big_k * rho ** 3 + 2.0)


def forms_bundle(fren, profile_at, v2, v3) -> FormsBundle:
    g, det_g, q = first_form(fren, profile_at, v2, v3)
    h, det_h = second_form(fren, profile_at, v2, v3)
    normal = unit_normal(fren, profile_at, v2, v3)
    shape = shape_operator(fren, profile_at, v2, v3)
    return FormsBundle(g=g, det_g=det_g, h=h, det_h=det_h, normal=normal,
                       shape=shape, Q=q)


def curvature_report(fren, profile_at, v2, v3, location=None) -> CurvatureReport:
    big_k = gaussian_curvature(fren, profile_at, v2, v3)
    big_h = mean_curvature(fren, profile_at, v2, v3)
    kappa = principal_curvatures(fren, profile_at, v2, v3)
    res = identity_residual(big_k, big_h, float(profile_at[0]))
    return CurvatureReport(K=big_k, H=big_h, principal=kappa,
                           identity_residual=res,
                           location=location or (fren.s, v2, v3))
