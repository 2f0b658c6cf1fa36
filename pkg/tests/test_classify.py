import math

import numpy as np
import pytest

from canalgeom import (classify_flat, classify_minimal,
                       implicit_relation_residuals, linear_weingarten_check,
                       parse_patch, solve_catenoid, weingarten_residual)
from canalgeom import config as cfg
from canalgeom.errors import (ContractError, NumericDomainError,
                              ResolutionError)


def patch_of(curve, radius):
    return parse_patch({"curve": curve, "radius": radius, "n": 4})


LINE = {"kind": "line", "point": [0, 0, 0, 0], "direction": [1, 0, 0, 0],
        "domain": [0.0, 2.0]}


def grid(patch, n=6):
    return cfg.grid_points(patch, (n, n, n))


def test_catenoid_throat_values():
    prof = solve_catenoid(1.0)
    assert prof.rho[0] == 1.0
    assert prof.drho[0] == 0.0
    assert abs(prof.d2rho[0] - 2.0 / 3.0) < 1e-14
    assert prof.ode_residuals().max() <= 1e-8
    assert implicit_relation_residuals(prof).max() <= 1e-6


def test_catenoid_scaling():
    """rho_a(v1) = a * rho_1(v1 / a) by the ODE's scaling symmetry."""
    p1 = solve_catenoid(1.0, v1_span=(0.0, 2.0))
    p2 = solve_catenoid(2.0, v1_span=(0.0, 4.0))
    r1 = p1.to_profile()
    r2 = p2.to_profile()
    for v in (0.5, 1.2, 1.9):
        assert abs(r2.at(2.0 * v)[0] - 2.0 * r1.at(v)[0]) < 1e-10


def test_catenoid_input_validation():
    with pytest.raises(ContractError):
        solve_catenoid(-1.0)
    with pytest.raises(NumericDomainError):
        solve_catenoid(1.0, rho0=0.5)
    with pytest.raises(ContractError):
        solve_catenoid(1.0, v1_span=(1.0, 0.0))


def test_flat_hypercylinder():
    p = patch_of(LINE, {"kind": "constant", "value": 0.5})
    assert classify_flat(p, grid(p)) == "Hypercylinder"


def test_flat_hypercone():
    p = patch_of(dict(LINE, domain=[1.0, 3.0]),
                 {"kind": "linear", "a": 0.5, "b": 0.1})
    assert classify_flat(p, grid(p)) == "Hypercone"


def test_not_flat():
    p = patch_of({"kind": "quad_helix", "a": 1.0, "b": 1.0, "c": 2.0},
                 {"kind": "constant", "value": 0.3})
    assert classify_flat(p, grid(p)) == "No"


def test_minimal_catenoid():
    p = patch_of(LINE, {"kind": "catenoid", "a": 1.0})
    assert classify_minimal(p, grid(p)) == "GeneralizedCatenoid"


def test_not_minimal():
    p = patch_of(LINE, {"kind": "constant", "value": 0.5})
    assert classify_minimal(p, grid(p)) == "No"
    assert classify_flat(patch_of(LINE, {"kind": "catenoid", "a": 1.0}),
                         grid(patch_of(LINE, {"kind": "catenoid", "a": 1.0}))) == "No"


def test_weingarten_positive_on_functionally_dependent():
    """K and H that are both functions of one scalar satisfy the relation."""
    h = 1e-4
    u = (np.arange(9) - 4) * h
    uu, vv = np.meshgrid(u, u, indexing="ij")
    t = 0.3 * uu + 0.7 * vv
    K = np.sin(t)
    H = t ** 2 + 2.0 * t
    _, verdict, res = weingarten_residual(K, H, "23", (h, h))
    assert verdict and res < 1e-7


def test_weingarten_negative_on_independent():
    h = 1e-4
    u = (np.arange(9) - 4) * h
    uu, vv = np.meshgrid(u, u, indexing="ij")
    K = 1.0 + uu + 2.0 * vv
    H = 1.0 + 3.0 * uu - vv
    _, verdict, res = weingarten_residual(K, H, "12", (h, h))
    assert not verdict and res > 1.0


def test_weingarten_lattice_contracts():
    with pytest.raises(ResolutionError):
        weingarten_residual(np.zeros((3, 3)), np.zeros((3, 3)), "12", (1e-4, 1e-4))
    with pytest.raises(ContractError):
        weingarten_residual(np.zeros((5, 5)), np.zeros((5, 5)), "21", (1e-4, 1e-4))
    with pytest.raises(ContractError):
        weingarten_residual(np.zeros((5, 5)), np.zeros((5, 6)), "12", (1e-4, 1e-4))


def test_linear_weingarten_tubular():
    lam = 0.7
    k1 = 0.9
    v2 = np.linspace(0, 2 * math.pi, 11)
    v3 = np.linspace(0.1, 1.2, 11)
    from canalgeom import tubular_curvatures
    K = np.empty((11, 11))
    H = np.empty((11, 11))
    for i, a in enumerate(v2):
        for j, b in enumerate(v3):
            K[i, j], H[i, j] = tubular_curvatures(k1, lam, a, b)
    assert linear_weingarten_check(lam, K, H) <= 1e-12
    assert linear_weingarten_check(lam + 0.1, K, H) > 1e-3
