"""Center curves, arc-length reparametrization and the Frenet apparatus.

A :class:`CenterCurve` is an immutable bundle of a derivative evaluator, a
parameter domain and optional frame metadata.  Built-in curves (line, circle,
constant-curvature 4D curve, polynomial/trigonometric tables) supply exact
derivatives of any order; user curves come in as coefficient tables only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import linalg
from .errors import (ContractError, DegeneracyError, FrenetDegeneracyError,
                     NumericDomainError)

PIVOT_TOL = 1e-10          # Gram-Schmidt / curvature degeneracy threshold
_FD_BASE_STEP = 1e-5       # frame-derivative step: max(1e-5, 1e-5*|s|)


@dataclass(frozen=True)
class CenterCurve:
    """A curve t -> E^n with derivatives up to any requested order.

    ``evaluator(t, order)`` returns an array of shape (order+1, dim) holding
    the position and the first ``order`` derivatives.
    """
    evaluator: Callable[[float, int], np.ndarray]
    domain: tuple
    dim: int
    declared_unit_speed: bool = False
    frame_override: Optional[np.ndarray] = None
    kind: str = "custom"
    analytic_order: int = 10 ** 9   # highest exactly-available derivative order

    def __post_init__(self):
        if self.frame_override is not None:
            fo = np.asarray(self.frame_override, dtype=float)
            if fo.shape != (self.dim, self.dim):
                raise ContractError("frame_override must be n x n")
            if np.max(np.abs(fo @ fo.T - np.eye(self.dim))) > 1e-12:
                raise ContractError("frame_override is not orthonormal")
            object.__setattr__(self, "frame_override", fo)

    def eval(self, t, order=0):
        out = np.asarray(self.evaluator(float(t), int(order)), dtype=float)
        if out.shape != (order + 1, self.dim):
            raise ContractError(
                f"evaluator returned shape {out.shape}, expected {(order + 1, self.dim)}")
        return out


@dataclass
class FrenetData:
    """Frame F_1..F_n and curvatures k_1..k_{n-1} at one parameter value."""
    s: float
    frame: np.ndarray                 # rows F_1..F_n
    curvatures: np.ndarray            # k_1..k_{n-1}
    curvature_derivs: Optional[np.ndarray] = None


# ---------------------------------------------------------------------------
# built-in curves

def _complete_basis(first):
    """Orthonormal basis whose first row is ``first`` (unit)."""
    n = len(first)
    rows = [np.asarray(first, dtype=float)]
    for e in np.eye(n):
        v = e.copy()
        for r in rows:
            v -= np.dot(v, r) * r
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            rows.append(v / nv)
        if len(rows) == n:
            break
    return np.array(rows)


def line(point, direction, domain=(0.0, 1.0), dim=None):
    point = np.asarray(point, dtype=float)
    direction = np.asarray(direction, dtype=float)
    dim = dim or len(point)
    nd = np.linalg.norm(direction)
    if nd < 1e-12:
        raise ContractError("line: zero direction")
    d = direction / nd

    def ev(t, order):
        out = np.zeros((order + 1, dim))
        out[0] = point + t * d
        if order >= 1:
            out[1] = d
        return out

    return CenterCurve(ev, tuple(domain), dim, declared_unit_speed=True,
                       frame_override=_complete_basis(d), kind="line")


def circle(radius, dim=4, center=None, domain=None):
    """Unit-speed circle of the given radius in the x1x2-plane."""
    if radius <= 0:
        raise ContractError("circle: radius must be positive")
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    domain = domain or (0.0, 2.0 * math.pi * radius)
    r = float(radius)

    def ev(t, order):
        out = np.zeros((order + 1, dim))
        for j in range(order + 1):
            # d^j/ds^j of (r cos(s/r), r sin(s/r)): magnitude r^(1-j), phase j*pi/2
            ph = t / r + j * math.pi / 2.0
            amp = r ** (1 - j)
            out[j, 0] = amp * math.cos(ph)
            out[j, 1] = amp * math.sin(ph)
        out[0] += center
        return out

    return CenterCurve(ev, tuple(domain), dim, declared_unit_speed=True,
                       frame_override=np.eye(dim), kind="circle")


def quad_helix(a, b, c, domain=(0.0, 2.0 * math.pi)):
    """Unit-speed version of (a cos t, a sin t, b cos ct, b sin ct) in E^4."""
    if a <= 0 or b <= 0:
        raise ContractError("quad_helix: a, b must be positive")
    v = math.sqrt(a * a + b * b * c * c)

    def ev(s, order):
        t = s / v
        out = np.zeros((order + 1, 4))
        for j in range(order + 1):
            ph1 = t + j * math.pi / 2.0
            ph2 = c * t + j * math.pi / 2.0
            out[j, 0] = a * math.cos(ph1) / v ** j
            out[j, 1] = a * math.sin(ph1) / v ** j
            out[j, 2] = b * (c ** j) * math.cos(ph2) / v ** j
            out[j, 3] = b * (c ** j) * math.sin(ph2) / v ** j
        return out

    return CenterCurve(ev, tuple(domain), 4, declared_unit_speed=True,
                       kind="quad_helix")


def poly_trig(coords, domain, dim=None, frame_override=None):
    """Curve from per-coordinate polynomial + trigonometric coefficient tables.

    ``coords`` is a list (one entry per coordinate) of dicts
    ``{"poly": [c0, c1, ...], "trig": [{"cos": A, "sin": B, "omega": w}, ...]}``.
    """
    dim = dim or len(coords)
    if len(coords) != dim:
        raise ContractError("poly_trig: one coefficient table per coordinate")
    tables = []
    for spec in coords:
        poly = [float(x) for x in spec.get("poly", [])]
        trig = [(float(tm.get("cos", 0.0)), float(tm.get("sin", 0.0)),
                 float(tm["omega"])) for tm in spec.get("trig", [])]
        tables.append((poly, trig))

    def ev(t, order):
        out = np.zeros((order + 1, dim))
        for i, (poly, trig) in enumerate(tables):
            for j in range(order + 1):
                val = 0.0
                for p, cp in enumerate(poly):
                    if p >= j:
                        val += cp * math.perm(p, j) * t ** (p - j)
                for acos, asin, w in trig:
                    ph = w * t + j * math.pi / 2.0
                    val += (w ** j) * (acos * math.cos(ph) + asin * math.sin(ph))
                out[j, i] = val
        return out

    return CenterCurve(ev, tuple(domain), dim, declared_unit_speed=False,
                       frame_override=frame_override, kind="poly_trig")


def transform_curve(c: CenterCurve, rotation=None, translation=None) -> CenterCurve:
    """Image of a curve under the rigid motion x -> R x + b."""
    n = c.dim
    r = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    b = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
    if r.shape != (n, n) or np.max(np.abs(r @ r.T - np.eye(n))) > 1e-12:
        raise ContractError("rotation must be an n x n orthogonal matrix")
    if abs(np.linalg.det(r) - 1.0) > 1e-10:
        raise ContractError("rotation must be orientation-preserving")

    def ev(t, order):
        d = c.eval(t, order) @ r.T
        d[0] += b
        return d

    fo = None if c.frame_override is None else c.frame_override @ r.T
    return CenterCurve(ev, c.domain, n, declared_unit_speed=c.declared_unit_speed,
                       frame_override=fo, kind=c.kind,
                       analytic_order=c.analytic_order)


# ---------------------------------------------------------------------------
# arc-length reparametrization

def _adaptive_simpson(f, a, b, tol):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return rec(a, b, fa, fm, fb, whole, tol, 40)


def reparametrize_arclength(c: CenterCurve, samples: int = 200) -> CenterCurve:
    """Unit-speed reparametrization of a regular curve.

    Arc length by adaptive Simpson quadrature, inverted by monotone cubic
    (PCHIP) interpolation over ``samples`` knots.  The composed evaluator uses
    the chain rule up to order 4 and central differences beyond (O(h^2)).
    """
    if samples < 4:
        raise ContractError("reparametrize_arclength: need samples >= 4")
    a, b = c.domain

    def speed(t):
        v = float(np.linalg.norm(c.eval(t, 1)[1]))
        if v <= 1e-8:
            raise DegeneracyError(f"curve is not regular at t = {t}")
        return v

    knots = np.linspace(a, b, samples)
    svals = np.zeros(samples)
    for i in range(1, samples):
        svals[i] = svals[i - 1] + _adaptive_simpson(
            speed, knots[i - 1], knots[i], 1e-12)
    t_of_s = PchipInterpolator(svals, knots, extrapolate=True)
    length = float(svals[-1])

    def composed(s, order):
        t = float(t_of_s(s))
        k = min(order, 4)
        need = max(k, 1)
        d = c.eval(t, need)
        out = np.zeros((order + 1, c.dim))
        out[0] = d[0]
        v = np.linalg.norm(d[1])
        t1 = 1.0 / v
        if order >= 1:
            out[1] = d[1] * t1
        if k >= 2:
            vd = np.dot(d[1], d[2]) / v
            t2 = -vd / v ** 3
            out[2] = d[2] * t1 ** 2 + d[1] * t2
        if k >= 3:
            vdd = (np.dot(d[2], d[2]) + np.dot(d[1], d[3]) - vd * vd) / v
            t3 = (3.0 * vd * vd - v * vdd) / v ** 5
            out[3] = d[3] * t1 ** 3 + 3.0 * d[2] * t1 * t2 + d[1] * t3
        if k >= 4:
            vddd = (3.0 * np.dot(d[2], d[3]) + np.dot(d[1], d[4])
                    - 3.0 * vd * vdd) / v
            t4 = ((5.0 * vd * vdd - v * vddd) / v ** 6
                  - 5.0 * (3.0 * vd * vd - v * vdd) * vd / v ** 7)
            out[4] = (d[4] * t1 ** 4 + 6.0 * d[3] * t1 ** 2 * t2
                      + d[2] * (3.0 * t2 ** 2 + 4.0 * t1 * t3) + d[1] * t4)
        if order > 4:
            h = 1e-4
            for j in range(5, order + 1):
                lo = composed(s - h, j - 1)[j - 1]
                hi = composed(s + h, j - 1)[j - 1]
                out[j] = (hi - lo) / (2.0 * h)
        return out

    return CenterCurve(composed, (0.0, length), c.dim,
                       declared_unit_speed=True,
                       frame_override=c.frame_override,
                       kind=c.kind, analytic_order=4)


# ---------------------------------------------------------------------------
# Frenet apparatus

def _gs_frame(derivs, n, override, pivot_tol=PIVOT_TOL):
    """Gram-Schmidt frame from curve derivatives, generic over scalar type.

    ``derivs`` are alpha', alpha'', ... as lists of scalars (floats or jets).
    On a Gram-Schmidt breakdown past the first vector, the frame is completed
    from the constant ``override`` vectors; the last vector always comes from
    the generalized cross product to fix orientation.
    """
    from .jets import jsqrt, value

    frame = []
    deg_at = None
    for j in range(n - 1):
        v = list(derivs[j])
        for f in frame:
            coef = linalg.dot_generic(v, f)
            v = [vi - coef * fi for vi, fi in zip(v, f)]
        nrm2 = linalg.dot_generic(v, v)
        scale = max(1.0, abs(value(linalg.dot_generic(derivs[j], derivs[j]))))
        if value(nrm2) <= (pivot_tol ** 2) * scale:
            deg_at = j
            break
        nrm = jsqrt(nrm2)
        frame.append([vi / nrm for vi in v])
    if deg_at is not None:
        if override is None:
            raise FrenetDegeneracyError(
                f"curvature k_{deg_at} vanishes and no frame_override is given")
        for e in override:
            if len(frame) == n - 1:
                break
            v = [float(x) + 0.0 * derivs[0][0] for x in e]  # lift to scalar type
            for f in frame:
                coef = linalg.dot_generic(v, f)
                v = [vi - coef * fi for vi, fi in zip(v, f)]
            nrm2 = linalg.dot_generic(v, v)
            if value(nrm2) <= 1e-12:
                continue
            nrm = jsqrt(nrm2)
            frame.append([vi / nrm for vi in v])
        if len(frame) < n - 1:
            raise FrenetDegeneracyError("frame_override failed to complete the frame")
    frame.append(linalg.cross_generic(frame))
    return frame


def _frame_at(c: CenterCurve, s: float) -> np.ndarray:
    n = c.dim
    d = c.eval(s, n)
    if np.linalg.norm(d[2]) <= PIVOT_TOL:
        # straight-line case: constant override frame, all curvatures zero
        if c.frame_override is None:
            raise FrenetDegeneracyError(
                "curvature k_1 vanishes and no frame_override is given")
        tangent = d[1] / np.linalg.norm(d[1])
        if abs(np.dot(c.frame_override[0], tangent) - 1.0) > 1e-8:
            raise FrenetDegeneracyError(
                "frame_override's first vector does not match the unit tangent")
        return c.frame_override.copy()
    rows = _gs_frame([d[j].tolist() for j in range(1, n + 1)], n,
                     None if c.frame_override is None else c.frame_override.tolist())
    return np.array(rows, dtype=float)


def frenet_apparatus(c: CenterCurve, s: float,
                     with_curvature_derivs: bool = False) -> FrenetData:
    """Frame and curvatures of a unit-speed curve at arc length ``s``.

    The frame is built by Gram-Schmidt on the derivatives, with the last
    vector completed by the generalized cross product; curvatures come from
    k_i = <F_i'(s), F_{i+1}(s)> with F_i' by central differences of the frame.
    """
    if not c.declared_unit_speed:
        raise ContractError("frenet_apparatus requires a unit-speed curve")
    n = c.dim
    d = c.eval(s, 2)
    if np.linalg.norm(d[2]) <= PIVOT_TOL:
        frame = _frame_at(c, s)   # override path, validates tangent
        ks = np.zeros(n - 1)
        kd = np.zeros(n - 1) if with_curvature_derivs else None
        return FrenetData(s, frame, ks, kd)
    frame = _frame_at(c, s)
    h = max(_FD_BASE_STEP, _FD_BASE_STEP * abs(s))
    fp = _frame_at(c, s + h)
    fm = _frame_at(c, s - h)
    dframe = (fp - fm) / (2.0 * h)
    ks = np.array([np.dot(dframe[i], frame[i + 1]) for i in range(n - 1)])
    kd = None
    if with_curvature_derivs:
        def k_at(sv):
            fr = _frame_at(c, sv)
            hp = max(_FD_BASE_STEP, _FD_BASE_STEP * abs(sv))
            dfr = (_frame_at(c, sv + hp) - _frame_at(c, sv - hp)) / (2.0 * hp)
            return np.array([np.dot(dfr[i], fr[i + 1]) for i in range(n - 1)])
        hk = 10.0 * h
        kd = (k_at(s + hk) - k_at(s - hk)) / (2.0 * hk)
    if not np.all(np.isfinite(frame)) or not np.all(np.isfinite(ks)):
        raise NumericDomainError(f"non-finite Frenet data at s = {s}")
    return FrenetData(s, frame, ks, kd)
