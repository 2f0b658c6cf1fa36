"""Radius profiles and pointwise canal / tubular hypersurface construction.

The offset-coefficient ladder is implemented once for general ambient
dimension n and reused for n = 3 and n = 4, always on the "+" sign branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import curve as curve_mod
from . import oracle as oracle_mod
from .curve import CenterCurve, _frame_at, _gs_frame, frenet_apparatus
from .errors import ContractError, RegularityError
from .jets import Jet2

EPS_REG = 1e-6    # required margin for 1 - rho'^2


@dataclass(frozen=True)
class RadiusProfile:
    """Radius function rho(v1) with three derivatives.

    ``eval(v1)`` returns (rho, rho', rho'', rho''').
    """
    eval: Callable[[float], tuple]
    kind: str

    def at(self, v1, eps_reg=EPS_REG):
        rho, d1, d2, d3 = self.eval(float(v1))
        if rho <= 0.0:
            raise RegularityError(f"rho({v1}) = {rho} <= 0")
        if 1.0 - d1 * d1 < eps_reg:
            raise RegularityError(
                f"regularity 1 - rho'^2 = {1.0 - d1 * d1:.3e} < {eps_reg} at v1 = {v1}")
        return rho, d1, d2, d3


def constant_profile(lam):
    lam = float(lam)
    return RadiusProfile(lambda v1: (lam, 0.0, 0.0, 0.0), "constant")


def linear_profile(a, b):
    a, b = float(a), float(b)
    return RadiusProfile(lambda v1: (a * v1 + b, a, 0.0, 0.0), "linear")


def poly_trig_profile(poly=(), trig=()):
    poly = [float(x) for x in poly]
    trig = [(float(t.get("cos", 0.0)), float(t.get("sin", 0.0)), float(t["omega"]))
            for t in trig]

    def ev(v1):
        out = []
        for j in range(4):
            val = 0.0
            for p, cp in enumerate(poly):
                if p >= j:
                    val += cp * math.perm(p, j) * v1 ** (p - j)
            for acos, asin, w in trig:
                ph = w * v1 + j * math.pi / 2.0
                val += (w ** j) * (acos * math.cos(ph) + asin * math.sin(ph))
            out.append(val)
        return tuple(out)

    return RadiusProfile(ev, "poly_trig")


def table_profile(v1_nodes, rho, drho, d2rho, d3rho, kind="table"):
    """Tabulated profile with per-field cubic Hermite interpolation."""
    v1_nodes = np.asarray(v1_nodes, dtype=float)
    s_rho = CubicHermiteSpline(v1_nodes, rho, drho)
    s_d1 = CubicHermiteSpline(v1_nodes, drho, d2rho)
    s_d2 = CubicHermiteSpline(v1_nodes, d2rho, d3rho)
    s_d3 = s_d2.derivative()

    def ev(v1):
        return (float(s_rho(v1)), float(s_d1(v1)),
                float(s_d2(v1)), float(s_d3(v1)))

    return RadiusProfile(ev, kind)


@dataclass(frozen=True)
class CanalPatch:
    """Canal hypersurface patch: unit-speed center curve + radius profile."""
    curve: CenterCurve
    profile: RadiusProfile
    n: int
    domain: dict   # axis name ("v1", "v2", ...) -> (lo, hi)

    def __post_init__(self):
        if self.n != self.curve.dim:
            raise ContractError("patch dimension differs from curve dimension")
        if not self.curve.declared_unit_speed:
            raise ContractError("canal patches require a unit-speed center curve")
        if self.n < 3 or self.n > 8:
            raise ContractError("ambient dimension must be in [3, 8]")

    @property
    def param_names(self):
        return [f"v{i}" for i in range(1, self.n)]

    def param_box(self):
        return [tuple(self.domain[name]) for name in self.param_names]


def offset_coefficients(profile_at, angles, n):
    """Offset coefficients a_1..a_n of the canal map ("+" branch).

    ``profile_at`` is (rho, rho'); ``angles`` are v_2..v_{n-1}.
    a_1 = -rho rho' and the remaining coefficients follow the sin/cos product
    ladder; their squares always sum to rho^2.
    """
    rho, drho = profile_at[0], profile_at[1]
    angles = [float(a) for a in angles]
    if len(angles) != n - 2:
        raise ContractError(f"need {n - 2} angles for n = {n}, got {len(angles)}")
    if 1.0 - drho * drho < EPS_REG:
        raise RegularityError(f"|rho'| = {abs(drho)} too close to 1")
    w = rho * math.sqrt(1.0 - drho * drho)
    cosv = [math.cos(a) for a in angles]
    sinv = [math.sin(a) for a in angles]
    a = [0.0] * n
    a[0] = -rho * drho
    a[1] = w * math.prod(cosv)
    for i in range(3, n + 1):
        a[i - 1] = w * sinv[i - 3] * math.prod(cosv[j] for j in range(i - 2, n - 2))
    return a


def canal_point(patch: CanalPatch, params) -> np.ndarray:
    """Point X = alpha(v1) + sum a_i F_i(v1) on the canal hypersurface."""
    v1, angles = float(params[0]), params[1:]
    rho, drho, _, _ = patch.profile.at(v1)
    frame = _frame_at(patch.curve, v1)
    alpha = patch.curve.eval(v1, 0)[0]
    a = offset_coefficients((rho, drho), angles, patch.n)
    return alpha + np.asarray(a) @ frame


def tubular_point(patch: CanalPatch, params) -> np.ndarray:
    """Canal point for a constant radius profile (pipe hypersurface)."""
    if patch.profile.kind != "constant":
        raise ContractError("tubular_point requires a constant radius profile")
    return canal_point(patch, params)


def canal_partials_closed(patch: CanalPatch, params):
    """Closed-form first partials of the E^4 canal map, in ambient coordinates."""
    if patch.n != 4:
        raise ContractError("closed partials are implemented for n = 4 only")
    v1, v2, v3 = (float(p) for p in params)
    rho, drho, d2rho, _ = patch.profile.at(v1)
    fren = frenet_apparatus(patch.curve, v1)
    k1, k2, k3 = fren.curvatures
    m = 1.0 - drho * drho
    w = math.sqrt(m)
    c2, s2 = math.cos(v2), math.sin(v2)
    c3, s3 = math.cos(v3), math.sin(v3)
    r = drho * w - rho * drho * d2rho / w
    cv1 = np.array([
        m - k1 * rho * w * c2 * c3 - rho * d2rho,
        -k1 * rho * drho - k2 * rho * w * s2 * c3 + r * c2 * c3,
        rho * w * (k2 * c2 * c3 - k3 * s3) + r * s2 * c3,
        k3 * rho * w * s2 * c3 + r * s3,
    ])
    cv2 = np.array([0.0, -rho * w * s2 * c3, rho * w * c2 * c3, 0.0])
    cv3 = np.array([0.0, -rho * w * c2 * s3, -rho * w * s2 * s3, rho * w * c3])
    f = fren.frame
    return cv1 @ f, cv2 @ f, cv3 @ f


# ---------------------------------------------------------------------------
# probes for the numeric oracle

def make_probe(patch: CanalPatch, mode="fd", fd_step=None):
    """Black-box immersion probe over the patch for cross-validation.

    ``mode="fd"`` gives a pure point evaluator (derivatives by central
    differences in the oracle); ``mode="taylor"`` additionally supplies exact
    first/second partials propagated through the construction with jet
    arithmetic (built-in analytic curves only).
    """
    box = patch.param_box()
    if fd_step is None:
        fd_step = tuple(3e-5 * (hi - lo) for lo, hi in box)
    jet_fn = None
    if mode == "taylor":
        if patch.curve.analytic_order < patch.n + 2:
            raise ContractError("taylor probes need analytic built-in curves")
        if patch.n != 4:
            raise ContractError("taylor probes are implemented for n = 4 only")
        jet_fn = lambda at: _exact_jet(patch, at)
    elif mode != "fd":
        raise ContractError(f"unknown probe mode {mode!r}")
    return oracle_mod.ImmersionProbe(
        eval=lambda at: canal_point(patch, at),
        n=patch.n, fd_step=fd_step, mode=mode, jet_fn=jet_fn)


def _frame_jets(c: CenterCurve, v1: float):
    n = c.dim
    d = c.eval(v1, n + 2)
    if np.linalg.norm(d[2]) <= curve_mod.PIVOT_TOL:
        if c.frame_override is None:
            raise ContractError("degenerate curve without frame_override")
        return [[Jet2(float(x)) for x in row] for row in c.frame_override]
    derivs = [[Jet2(d[j][i], d[j + 1][i], d[j + 2][i]) for i in range(n)]
              for j in range(1, n + 1)]
    override = None if c.frame_override is None else c.frame_override.tolist()
    return _gs_frame(derivs, n, override)


def _exact_jet(patch: CanalPatch, at):
    """Exact first and second partials of the canal map at ``at`` (n = 4)."""
    v1, v2, v3 = (float(p) for p in at)
    rho, d1, d2, d3 = patch.profile.at(v1)
    rj = Jet2(rho, d1, d2)
    rpj = Jet2(d1, d2, d3)
    a1 = -(rj * rpj)
    w = rj * (1.0 - rpj * rpj).sqrt()
    dcurve = patch.curve.eval(v1, 2)
    alpha = [Jet2(dcurve[0][i], dcurve[1][i], dcurve[2][i]) for i in range(4)]
    F = _frame_jets(patch.curve, v1)
    c2, s2 = math.cos(v2), math.sin(v2)
    c3, s3 = math.cos(v3), math.sin(v3)

    def comb(coeffs):
        # coeffs: per-frame-vector scalar (float or Jet2); returns 4 jets
        out = []
        for i in range(4):
            acc = Jet2(0.0)
            for cf, fv in zip(coeffs, F):
                acc = acc + cf * fv[i]
            out.append(acc)
        return out

    x = [ai + bi for ai, bi in zip(alpha, comb([a1, w * (c2 * c3), w * (s2 * c3), w * s3]))]
    e2 = comb([Jet2(0.0), w * (-s2 * c3), w * (c2 * c3), Jet2(0.0)])
    e3 = comb([Jet2(0.0), w * (-c2 * s3), w * (-s2 * s3), w * c3])

    wf = w.f
    Ff = np.array([[fv[i].f for i in range(4)] for fv in F])
    first = [np.array([xi.d1 for xi in x]),
             np.array([ei.f for ei in e2]),
             np.array([ei.f for ei in e3])]
    sec = {}
    sec[(0, 0)] = np.array([xi.d2 for xi in x])
    sec[(0, 1)] = np.array([ei.d1 for ei in e2])
    sec[(0, 2)] = np.array([ei.d1 for ei in e3])
    sec[(1, 1)] = wf * (-c2 * c3 * Ff[1] - s2 * c3 * Ff[2])
    sec[(1, 2)] = wf * (s2 * s3 * Ff[1] - c2 * s3 * Ff[2])
    sec[(2, 2)] = wf * (-c2 * c3 * Ff[1] - s2 * c3 * Ff[2] - s3 * Ff[3])
    return first, sec
