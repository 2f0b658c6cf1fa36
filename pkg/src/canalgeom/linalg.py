"""Small-dimension Euclidean vector/matrix primitives.

Everything here is written for the tiny sizes this package needs (n <= 8,
matrices up to 4x4 plus generic cofactor recursion).  Determinants use direct
cofactor expansion without pivoting; at these sizes that is exact enough, but
conditioning is the caller's problem for nearly singular input.

The scalar-generic helpers (``dot_generic``, ``det_generic``,
``cross_generic``) accept any element type supporting +, -, * (floats or
truncated-Taylor jets); the numpy entry points wrap them for float arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatchError, ContractError, NumericDomainError

MAX_DIM = 8


def dot(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionMismatchError(
            f"dot: incompatible shapes {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


def norm(u):
    return math.sqrt(dot(u, u))


def dot_generic(u, v):
    if len(u) != len(v):
        raise DimensionMismatchError("dot: length mismatch")
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def det_generic(rows):
    """Determinant by cofactor expansion along the first row."""
    k = len(rows)
    if any(len(r) != k for r in rows):
        raise DimensionMismatchError("det: matrix is not square")
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(k):
        minor = [[r[c] for c in range(k) if c != j] for r in rows[1:]]
        term = rows[0][j] * det_generic(minor)
        if j % 2:
            term = term * (-1.0)
        acc = term if acc is None else acc + term
    return acc


def det(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"det: not square, shape {m.shape}")
    return float(det_generic(m.tolist()))


def cross_generic(vs, zero=0.0):
    """Generalized cross product of n-1 vectors in dimension n.

    Formal cofactor expansion of the determinant whose FIRST row is the
    standard basis and whose remaining rows are the inputs; component i
    carries sign (-1)^i (0-based).  For n=3 this is the classical right-handed
    cross product; for n=4, e1 x e2 x e3 = -e4 under this convention.
    """
    n = len(vs) + 1
    if n < 3 or n > MAX_DIM:
        raise ContractError(f"cross: need 2 <= n-1 <= {MAX_DIM - 1} vectors, got {len(vs)}")
    if any(len(v) != n for v in vs):
        raise DimensionMismatchError("cross: every vector must have dim n = #vectors + 1")
    out = []
    for i in range(n):
        minor = [[v[c] for c in range(n) if c != i] for v in vs]
        term = det_generic(minor)
        if i % 2:
            term = term * (-1.0)
        out.append(term)
    return out


def cross_n(vs):
    vs = [np.asarray(v, dtype=float) for v in vs]
    if any(v.ndim != 1 for v in vs):
        raise DimensionMismatchError("cross: inputs must be vectors")
    return np.array(cross_generic([v.tolist() for v in vs]), dtype=float)


def inv3(m):
    """Inverse of a 3x3 matrix via the adjugate."""
    m = np.asarray(m, dtype=float)
    d = det(m)
    if d == 0.0:
        raise NumericDomainError("inv3: singular matrix")
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(m, i, axis=0), j, axis=1)
            cof[i, j] = (-1.0) ** (i + j) * det(minor)
    return cof.T / d


_SHAPE3_PATTERN_TOL = 1e-9


def eig_shape3(s):
    """Eigenvalues of a 3x3 shape-operator matrix, sorted ascending.

    When the matrix has the canal block pattern (zero entries everywhere in
    rows/columns 2,3 off the diagonal against row 1, except s21/s31), the
    eigenvalues are read off directly: s22 (= s33) with multiplicity two and
    s11.  Otherwise falls back to the trigonometric solution of the
    characteristic cubic (real spectrum assumed, as for any operator similar
    to a symmetric one).
    """
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise NumericDomainError("eig_shape3: non-finite entries")
    scale = max(1.0, float(np.max(np.abs(s))))
    off = (abs(s[0, 1]), abs(s[0, 2]), abs(s[1, 2]), abs(s[2, 1]),
           abs(s[1, 1] - s[2, 2]))
    if max(off) <= _SHAPE3_PATTERN_TOL * scale:
        vals = [s[1, 1], s[2, 2], s[0, 0]]
        return tuple(sorted(vals))
    return _eig3_trig(s)


def _eig3_trig(s):
    # characteristic cubic: lam^3 - c2 lam^2 + c1 lam - c0 = 0
    c2 = s[0, 0] + s[1, 1] + s[2, 2]
    c1 = (s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
          + s[0, 0] * s[2, 2] - s[0, 2] * s[2, 0]
          + s[1, 1] * s[2, 2] - s[1, 2] * s[2, 1])
    c0 = det(s)
    # depressed cubic t^3 + p t + q with lam = t + c2/3
    sh = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = -c0 + c1 * sh - 2.0 * sh ** 3
    if abs(p) < 1e-300:
        r = -q
        t = math.copysign(abs(r) ** (1.0 / 3.0), r) if r != 0.0 else 0.0
        vals = [t + sh] * 3
        return tuple(sorted(vals))
    m = 2.0 * math.sqrt(max(-p, 0.0) / 3.0)
    if m == 0.0:
        return tuple(sorted([sh] * 3))
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    vals = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + sh for k in range(3)]
    return tuple(sorted(vals))
