"""Executable classification theorems: flatness, minimality, Weingarten.

Every verdict is established twice: from the analytic condition on the
center curve and radius profile, and from a numeric curvature bound over a
probe grid.  Disagreement between the two routes is an error, never silently
resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from . import curvature4
from .canal import CanalPatch, EPS_REG, table_profile
from .curve import frenet_apparatus
from .errors import (ContractError, InconsistencyError, IntegrationError,
                     NumericDomainError, ResolutionError)

K1_ZERO_TOL = 1e-9
FLAT_K_TOL = 1e-8
MINIMAL_H_TOL = 1e-6
ODE_RESIDUAL_TOL = 1e-8
IMPLICIT_TOL = 1e-6
WEINGARTEN_REL_TOL = 1e-6
N_AXIS_SAMPLES = 64


@dataclass
class ClassificationVerdict:
    flat: str = "No"                  # No | Hypercylinder | Hypercone
    minimal: str = "No"               # No | GeneralizedCatenoid
    weingarten_pairs: dict = field(default_factory=dict)   # "23" -> residual
    linear_weingarten: Optional[dict] = None

    def to_dict(self):
        return {
            "flat": self.flat,
            "minimal": self.minimal,
            "weingarten_pairs": self.weingarten_pairs,
            "linear_weingarten": self.linear_weingarten,
        }


@dataclass
class CatenoidProfile:
    """Solution table of 2 - 2 rho'^2 - 3 rho rho'' = 0 on the + branch."""
    a: float
    b: float
    branch: int
    v1: np.ndarray
    rho: np.ndarray
    drho: np.ndarray
    d2rho: np.ndarray
    d3rho: np.ndarray

    def to_profile(self):
        return table_profile(self.v1, self.rho, self.drho, self.d2rho,
                             self.d3rho, kind="catenoid")

    def ode_residuals(self):
        return np.abs(2.0 - 2.0 * self.drho ** 2 - 3.0 * self.rho * self.d2rho)


def _catenoid_slope(a, rho):
    arg = 1.0 - (a / rho) ** (4.0 / 3.0)
    if arg < -1e-12:
        raise IntegrationError(f"rho = {rho} dropped below the throat radius {a}")
    return math.sqrt(max(arg, 0.0))


def solve_catenoid(a, rho0=None, v1_span=(0.0, 2.0), step=1e-3) -> CatenoidProfile:
    """Integrate the catenoid radius ODE by classical fixed-step RK4.

    The ODE 2 - 2 rho'^2 - 3 rho rho'' = 0 is integrated as a first-order
    system in (rho, rho'), which is smooth everywhere including the throat
    (rho = a, rho' = 0, the default start).  The "+" branch is selected by the
    nonnegative initial slope.  The result is checked against the implicit
    integral relation at 10 checkpoints.
    """
    a = float(a)
    if a <= 0.0:
        raise ContractError("catenoid: a must be positive")
    rho0 = a if rho0 is None else float(rho0)
    if rho0 < a:
        raise NumericDomainError(f"rho0 = {rho0} < throat radius a = {a}")
    lo, hi = float(v1_span[0]), float(v1_span[1])
    if hi <= lo:
        raise ContractError("catenoid: empty v1 span")
    nsteps = int(round((hi - lo) / step))
    v1 = lo + step * np.arange(nsteps + 1)
    rho = np.empty(nsteps + 1)
    drho = np.empty(nsteps + 1)
    rho[0] = rho0
    drho[0] = _catenoid_slope(a, rho0)

    def f(y):
        r, p = y
        if r <= 0.0:
            raise IntegrationError("rho left the positive domain")
        return np.array([p, (2.0 - 2.0 * p * p) / (3.0 * r)])

    for i in range(nsteps):
        y = np.array([rho[i], drho[i]])
        k1 = f(y)
        k2 = f(y + 0.5 * step * k1)
        k3 = f(y + 0.5 * step * k2)
        k4 = f(y + step * k3)
        rho[i + 1], drho[i + 1] = y + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    d2rho = (2.0 - 2.0 * drho * drho) / (3.0 * rho)
    d3rho = -7.0 * drho * d2rho / (3.0 * rho)
    # first integral: rho'^2 = 1 - (a/rho)^(4/3) must be preserved
    gap = np.max(np.abs(drho - np.array([_catenoid_slope(a, r) for r in rho])))
    if gap > 1e-9:
        raise IntegrationError(
            f"first integral drifted by {gap:.3e}; step {step} unstable")
    prof = CatenoidProfile(a=a, b=lo, branch=+1, v1=v1, rho=rho,
                           drho=drho, d2rho=d2rho, d3rho=d3rho)
    res = prof.ode_residuals()
    if np.max(res) > ODE_RESIDUAL_TOL:
        raise IntegrationError(
            f"ODE residual grew to {np.max(res):.3e}; step {step} unstable")
    _check_implicit_relation(prof)
    return prof


def implicit_relation_residuals(prof: CatenoidProfile, n_checkpoints=10):
    """Quadrature residuals of the implicit relation between rho and v1.

    Between checkpoints c < d (both away from the singular throat) the
    integral of 1/sqrt(1 - (a/rho)^(4/3)) drho from rho(c) to rho(d) must
    equal d - c; returns |integral - (d - c)| per checkpoint.
    """
    a = prof.a
    away = np.nonzero(prof.drho >= 0.2)[0]
    if len(away) < n_checkpoints + 1:
        return np.zeros(0)   # span too short to leave the throat region
    idx = away[np.linspace(0, len(away) - 1, n_checkpoints + 1).astype(int)]
    integrand = lambda r: 1.0 / _catenoid_slope(a, r)
    base = idx[0]
    out = []
    for j in idx[1:]:
        val, _ = quad(integrand, prof.rho[base], prof.rho[j], limit=200)
        out.append(abs(val - (prof.v1[j] - prof.v1[base])))
    return np.array(out)


def _check_implicit_relation(prof: CatenoidProfile, n_checkpoints=10):
    res = implicit_relation_residuals(prof, n_checkpoints)
    if res.size and np.max(res) > IMPLICIT_TOL:
        raise IntegrationError(
            f"implicit relation violated: max residual {np.max(res):.3e}")


# ---------------------------------------------------------------------------
# theorem verdicts

def _axis_samples(patch: CanalPatch, count=N_AXIS_SAMPLES):
    lo, hi = patch.domain["v1"]
    pad = 1e-6 * (hi - lo)
    return np.linspace(lo + pad, hi - pad, count)

def _analytic_state(patch: CanalPatch):
    k1s, d1s, d2s = [], [], []
    for v1 in _axis_samples(patch):
        k1s.append(frenet_apparatus(patch.curve, v1).curvatures[0])
        _, d1, d2, _ = patch.profile.at(v1)
        d1s.append(d1)
        d2s.append(d2)
    return np.array(k1s), np.array(d1s), np.array(d2s)


def classify_flat(patch: CanalPatch, probe_grid) -> str:
    """Flatness verdict: No, Hypercylinder or Hypercone (dual route)."""
    k1s, d1s, d2s = _analytic_state(patch)
    straight = np.max(np.abs(k1s)) <= K1_ZERO_TOL
    lin_profile = np.max(np.abs(d2s)) <= K1_ZERO_TOL
    slope = float(np.mean(d1s))
    if straight and lin_profile:
        if abs(slope) <= K1_ZERO_TOL:
            analytic = "Hypercylinder"
        elif abs(slope) <= 1.0 - EPS_REG:
            analytic = "Hypercone"
        else:
            analytic = "No"
    else:
        analytic = "No"
    max_abs_k = 0.0
    for v1, v2, v3 in probe_grid:
        fren = frenet_apparatus(patch.curve, v1)
        kval = curvature4.gaussian_curvature(fren, patch.profile.at(v1), v2, v3)
        max_abs_k = max(max_abs_k, abs(kval))
    numeric_flat = max_abs_k <= FLAT_K_TOL
    if numeric_flat != (analytic != "No"):
        raise InconsistencyError(
            f"flatness routes disagree: analytic {analytic}, "
            f"max|K| = {max_abs_k:.3e}")
    return analytic


def classify_minimal(patch: CanalPatch, probe_grid) -> str:
    """Minimality verdict: No or GeneralizedCatenoid (dual route)."""
    k1s, d1s, d2s = _analytic_state(patch)
    rhos = np.array([patch.profile.at(v1)[0] for v1 in _axis_samples(patch)])
    straight = np.max(np.abs(k1s)) <= K1_ZERO_TOL
    ode_res = np.max(np.abs(2.0 - 2.0 * d1s ** 2 - 3.0 * rhos * d2s))
    analytic = straight and ode_res <= 1e-7
    max_abs_h = 0.0
    for v1, v2, v3 in probe_grid:
        fren = frenet_apparatus(patch.curve, v1)
        hval = curvature4.mean_curvature(fren, patch.profile.at(v1), v2, v3)
        max_abs_h = max(max_abs_h, abs(hval))
    numeric = max_abs_h <= MINIMAL_H_TOL
    if numeric != analytic:
        raise InconsistencyError(
            f"minimality routes disagree: analytic {analytic}, "
            f"max|H| = {max_abs_h:.3e} (ODE residual {ode_res:.3e})")
    return "GeneralizedCatenoid" if analytic else "No"


def weingarten_residual(k_grid, h_grid, pair, steps):
    """Central-difference residual H_i K_j - H_j K_i on a 2D lattice.

    ``k_grid``/``h_grid`` are 2D arrays over the (v_i, v_j) lattice of the
    pair, with node spacings ``steps = (h_i, h_j)``.  Returns the interior
    residual grid, the scale-relative verdict and the maximum residual.
    """
    k_grid = np.asarray(k_grid, dtype=float)
    h_grid = np.asarray(h_grid, dtype=float)
    if pair not in ("12", "13", "23"):
        raise ContractError(f"unknown Weingarten pair {pair!r}")
    if k_grid.shape != h_grid.shape or k_grid.ndim != 2:
        raise ContractError("K and H lattices must be 2D and congruent")
    if min(k_grid.shape) < 5:
        raise ResolutionError("need at least 5 nodes per lattice axis")
    hi, hj = float(steps[0]), float(steps[1])
    dk_i = (k_grid[2:, 1:-1] - k_grid[:-2, 1:-1]) / (2.0 * hi)
    dk_j = (k_grid[1:-1, 2:] - k_grid[1:-1, :-2]) / (2.0 * hj)
    dh_i = (h_grid[2:, 1:-1] - h_grid[:-2, 1:-1]) / (2.0 * hi)
    dh_j = (h_grid[1:-1, 2:] - h_grid[1:-1, :-2]) / (2.0 * hj)
    residual = dh_i * dk_j - dh_j * dk_i
    scale = max(1.0, float(np.max(np.abs(dh_i * dk_j))),
                float(np.max(np.abs(dh_j * dk_i))))
    max_res = float(np.max(np.abs(residual))) if residual.size else 0.0
    return residual, max_res <= WEINGARTEN_REL_TOL * scale, max_res


def linear_weingarten_check(lam, k_grid, h_grid):
    """max | -3 lambda H + lambda^3 K - 2 | over a tubular patch grid."""
    lam = float(lam)
    k_grid = np.asarray(k_grid, dtype=float)
    h_grid = np.asarray(h_grid, dtype=float)
    return float(np.max(np.abs(-3.0 * lam * h_grid + lam ** 3 * k_grid - 2.0)))
