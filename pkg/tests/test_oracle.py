import math

import numpy as np
import pytest

from canalgeom import ImmersionProbe, fd_jet, oracle_forms
from canalgeom.errors import ContractError, NumericDomainError, RankError

STEP3 = (1e-4, 1e-4)
STEP4 = (1e-4, 1e-4, 1e-4)


def test_fd_jet_exact_on_quadratic():
    """Central stencils are exact (up to roundoff) for quadratic maps."""
    A = np.array([[1.0, 2.0, 0.5], [0.0, -1.0, 1.5], [2.0, 0.0, 1.0],
                  [0.3, 0.4, 0.5]])
    B = {(0, 0): 2.0, (0, 1): -1.0, (0, 2): 0.5, (1, 1): 1.0,
         (1, 2): 3.0, (2, 2): -2.0}
    d = np.array([1.0, -1.0, 2.0, 0.0])

    def f(p):
        out = A @ p + d
        for (i, j), c in B.items():
            out = out + c * p[i] * p[j] * np.ones(4)
        return out

    probe = ImmersionProbe(eval=f, n=4, fd_step=STEP4)
    at = np.array([0.3, -0.2, 0.7])
    first, second = fd_jet(probe, at)
    for i in range(3):
        grad = A[:, i] + sum(c * ((i == a) * at[b] + (i == b) * at[a])
                             for (a, b), c in B.items()) * np.ones(4)
        assert np.max(np.abs(first[i] - grad)) < 1e-8
    for (i, j), c in B.items():
        want = c * (2.0 if i == j else 1.0) * np.ones(4)
        assert np.max(np.abs(second[(i, j)] - want)) < 1e-6
        assert np.all(second[(i, j)] == second[(j, i)])


def sphere_probe(r):
    def f(p):
        u, v, w = p
        return r * np.array([math.cos(u) * math.cos(v) * math.cos(w),
                             math.sin(u) * math.cos(v) * math.cos(w),
                             math.sin(v) * math.cos(w),
                             math.sin(w)])
    return ImmersionProbe(eval=f, n=4, fd_step=STEP4)


def test_hypersphere_curvatures():
    for r in (1.0, 2.5):
        of = oracle_forms(sphere_probe(r), np.array([0.4, 0.3, -0.2]))
        assert abs(abs(of.K) - 1.0 / r ** 3) < 1e-6 / r ** 3
        assert abs(abs(of.H) - 1.0 / r) < 1e-6 / r
        # umbilic: S = +-(1/r) I
        assert np.allclose(of.shape, of.shape[0, 0] * np.eye(3), atol=1e-5)


def test_hypersphere_normal_is_radial():
    r = 2.0
    at = np.array([0.7, -0.3, 0.5])
    of = oracle_forms(sphere_probe(r), at)
    x = sphere_probe(r).eval(at)
    assert abs(abs(np.dot(of.normal, x / r)) - 1.0) < 1e-8


def test_normal_sign_alignment():
    at = np.array([0.4, 0.3, -0.2])
    x = sphere_probe(1.0).eval(at)
    of = oracle_forms(sphere_probe(1.0), at, reference_normal=x)
    assert np.dot(of.normal, x) > 0.0
    of2 = oracle_forms(sphere_probe(1.0), at, reference_normal=-x)
    assert np.dot(of2.normal, x) < 0.0
    assert abs(of.K + of2.K) < 1e-9 and abs(of.H + of2.H) < 1e-9


def test_hyperplane_is_flat():
    def f(p):
        return np.array([p[0], p[1], p[2], 2.0 + p[0] - 3.0 * p[1]])
    of = oracle_forms(ImmersionProbe(eval=f, n=4, fd_step=STEP4),
                      np.array([0.1, 0.2, 0.3]))
    assert abs(of.K) < 1e-10 and abs(of.H) < 1e-7
    assert np.max(np.abs(of.h)) < 1e-7


def test_torus_gauss_curvature_3d():
    R, r = 2.0, 0.5

    def f(p):
        u, v = p
        return np.array([(R + r * math.cos(v)) * math.cos(u),
                         (R + r * math.cos(v)) * math.sin(u),
                         r * math.sin(v)])

    probe = ImmersionProbe(eval=f, n=3, fd_step=STEP3)
    for u, v in ((0.3, 0.7), (2.0, 2.5), (1.0, 4.0)):
        of = oracle_forms(probe, np.array([u, v]))
        want = math.cos(v) / (r * (R + r * math.cos(v)))
        assert abs(of.K - want) < 1e-6 * max(1.0, abs(want))


def test_rank_degeneracy_detected():
    def f(p):
        return np.array([p[0] + p[1], p[0] + p[1], p[2], 0.0])
    with pytest.raises(RankError):
        oracle_forms(ImmersionProbe(eval=f, n=4, fd_step=STEP4),
                     np.array([0.0, 0.0, 0.0]))


def test_boundary_guard():
    probe = ImmersionProbe(eval=lambda p: np.zeros(4), n=4, fd_step=STEP4,
                           domain=((0.0, 1.0),) * 3)
    with pytest.raises(NumericDomainError):
        fd_jet(probe, np.array([1e-5, 0.5, 0.5]))


def test_parameter_count_checked():
    probe = sphere_probe(1.0)
    with pytest.raises(ContractError):
        fd_jet(probe, np.array([0.1, 0.2]))
