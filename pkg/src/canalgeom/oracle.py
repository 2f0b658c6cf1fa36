"""Independent numeric differential-geometry oracle.

Given nothing but a point evaluator (v_1, ..., v_{n-1}) -> E^n, computes the
unit normal, fundamental forms, shape operator and the Gaussian/mean
curvatures from first principles.  Deliberately shares no code with the
Frenet or closed-form modules; only `linalg` primitives are reused.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import linalg
from .errors import ContractError, NumericDomainError, RankError


@dataclass(frozen=True)
class ImmersionProbe:
    """Black-box immersion with per-axis finite-difference steps.

    ``jet_fn`` (mode "taylor") returns exact first partials (list of k
    vectors) and second partials (dict {(i, j): vector, i <= j}).
    """
    eval: Callable
    n: int
    fd_step: tuple
    mode: str = "fd"
    jet_fn: Optional[Callable] = None
    domain: Optional[tuple] = None   # ((lo, hi), ...) per parameter axis


@dataclass
class OracleForms:
    g: np.ndarray
    det_g: float
    h: np.ndarray
    det_h: float
    normal: np.ndarray
    shape: np.ndarray
    K: float
    H: float


def _check_boundary(probe, at):
    if probe.domain is None:
        return
    for x, (lo, hi), h in zip(at, probe.domain, probe.fd_step):
        if x - lo < 2.0 * h or hi - x < 2.0 * h:
            raise NumericDomainError(
                f"point {tuple(at)} is closer than 2*fd_step to the domain boundary")


def fd_jet(probe: ImmersionProbe, at):
    """First and second partials by central differences.

    First partials via (f(+h) - f(-h)) / 2h, pure second partials via the
    3-point stencil, mixed ones via the 4-point stencil; mixed partials are
    symmetrized by construction (one estimate per unordered pair).
    """
    at = np.asarray(at, dtype=float)
    k = probe.n - 1
    if at.shape != (k,):
        raise ContractError(f"expected {k} parameters, got {at.shape}")
    _check_boundary(probe, at)
    if probe.mode == "taylor":
        if probe.jet_fn is None:
            raise ContractError("taylor mode requires a jet_fn")
        first, sec = probe.jet_fn(at)
        first = [np.asarray(v, dtype=float) for v in first]
        second = {}
        for i in range(k):
            for j in range(i, k):
                second[(i, j)] = np.asarray(sec[(i, j)], dtype=float)
                second[(j, i)] = second[(i, j)]
        return first, second

    h = probe.fd_step
    f0 = np.asarray(probe.eval(at), dtype=float)

    def ev(offsets):
        p = at.copy()
        for axis, mult in offsets:
            p[axis] += mult * h[axis]
        return np.asarray(probe.eval(p), dtype=float)

    first, second = [], {}
    plus, minus = {}, {}
    for i in range(k):
        plus[i] = ev([(i, +1)])
        minus[i] = ev([(i, -1)])
        first.append((plus[i] - minus[i]) / (2.0 * h[i]))
    for i in range(k):
        second[(i, i)] = (plus[i] - 2.0 * f0 + minus[i]) / (h[i] * h[i])
        for j in range(i + 1, k):
            pp = ev([(i, +1), (j, +1)])
            pm = ev([(i, +1), (j, -1)])
            mp = ev([(i, -1), (j, +1)])
            mm = ev([(i, -1), (j, -1)])
            est1 = (pp - pm - mp + mm) / (4.0 * h[i] * h[j])
            # mixed partials commute; the 4-point stencil is already symmetric
            # in (i, j), so the average of both orders equals est1
            second[(i, j)] = est1
            second[(j, i)] = est1
    return first, second


def oracle_forms(probe: ImmersionProbe, at, reference_normal=None) -> OracleForms:
    """Fundamental forms and curvatures from the probe alone.

    N is the normalized generalized cross product of the first partials (sign
    flipped to match ``reference_normal`` when given), g_ij = <X_i, X_j>,
    h_ij = <X_ij, N>, S = g^-1 h, K = det h / det g, H = tr(S) / (n-1).
    """
    k = probe.n - 1
    first, second = fd_jet(probe, at)
    g = np.array([[linalg.dot(first[i], first[j]) for j in range(k)]
                  for i in range(k)])
    det_g = linalg.det(g)
    gram_scale = max(1.0, float(np.prod([np.dot(v, v) for v in first])))
    if det_g <= 1e-12 * gram_scale:
        raise RankError(
            f"tangent vectors nearly dependent: Gram determinant {det_g:.3e}")
    nvec = linalg.cross_n(first)
    nn = np.linalg.norm(nvec)
    if nn == 0.0:
        raise RankError("zero normal: degenerate tangent plane")
    normal = nvec / nn
    if reference_normal is not None and np.dot(normal, reference_normal) < 0.0:
        normal = -normal
    h = np.array([[linalg.dot(second[(i, j)], normal) for j in range(k)]
                  for i in range(k)])
    h = 0.5 * (h + h.T)
    det_h = linalg.det(h)
    if k == 3:
        shape = linalg.inv3(g) @ h
    else:
        shape = np.linalg.solve(g, h)
    big_k = det_h / det_g
    big_h = float(np.trace(shape)) / k
    return OracleForms(g=g, det_g=det_g, h=h, det_h=det_h, normal=normal,
                       shape=shape, K=big_k, H=big_h)
