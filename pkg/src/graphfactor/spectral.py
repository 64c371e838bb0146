"""Floating-point spectra of symmetric integer matrices.

Eigenvalues come from cyclic Jacobi sweeps (robust on the repeated
eigenvalues that regular and bipartite graphs produce); the Perron pair
comes from power iteration.  The module also hosts the largest-eigenvalue
product check used to audit factorizations.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import ParameterError, PreconditionError
from .exact import IntMatrix, adjacency, commute
from .graphs import Graph, is_connected

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 42

_MAX_SWEEPS = 100
_MAX_POWER_ITER = 200_000


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order, plus the tolerance used."""

    values: tuple[float, ...]
    tolerance: float


@dataclass(frozen=True)
class PerronData:
    """Largest eigenvalue and its positive unit eigenvector."""

    value: float
    vector: tuple[float, ...]


@dataclass(frozen=True)
class ProductCheck:
    lhs: float
    rhs: float
    holds: bool


def _off_norm(a: list[list[float]]) -> float:
    n = len(a)
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i][j] * a[i][j]
    return math.sqrt(2.0 * s)


def _jacobi(mat, tol: float, want_vectors: bool):
    """Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops
    below tol.  Returns (diagonal values, rotation matrix or None)."""
    n = len(mat)
    a = [[float(x) for x in row] for row in mat]
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)] if want_vectors else None
    if n == 1:
        return [a[0][0]], v
    skip = tol / (4.0 * n * n)
    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) <= skip:
                    continue
                diff = a[q][q] - a[p][p]
                if abs(apq) < 1e-300 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p][q] = 0.0
                a[p][p] -= t * apq
                a[q][q] += t * apq
                for i in range(p):
                    g_ = a[i][p]
                    h_ = a[i][q]
                    a[i][p] = g_ - s * (h_ + tau * g_)
                    a[i][q] = h_ + s * (g_ - tau * h_)
                for i in range(p + 1, q):
                    g_ = a[p][i]
                    h_ = a[i][q]
                    a[p][i] = g_ - s * (h_ + tau * g_)
                    a[i][q] = h_ + s * (g_ - tau * h_)
                for i in range(q + 1, n):
                    g_ = a[p][i]
                    h_ = a[q][i]
                    a[p][i] = g_ - s * (h_ + tau * g_)
                    a[q][i] = h_ + s * (g_ - tau * h_)
                if v is not None:
                    for i in range(n):
                        g_ = v[i][p]
                        h_ = v[i][q]
                        v[i][p] = g_ - s * (h_ + tau * g_)
                        v[i][q] = h_ + s * (g_ - tau * h_)
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return [a[i][i] for i in range(n)], v


def eigen_sym(m: IntMatrix, tol: float = DEFAULT_TOL) -> Spectrum:
    """Full spectrum of a symmetric integer matrix, sorted descending."""
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    if not m.is_symmetric():
        raise PreconditionError("eigen_sym requires a symmetric matrix")
    values, _ = _jacobi(m.entries, tol, want_vectors=False)
    values.sort(reverse=True)
    if abs(sum(values) - m.trace()) > max(tol, 1e-12 * m.order * (1 + abs(m.trace()))):
        raise ArithmeticError("eigenvalue sum drifted from the trace")
    return Spectrum(tuple(values), tol)


def lambda_max(g: Graph, tol: float = DEFAULT_TOL) -> float:
    return eigen_sym(adjacency(g), tol).values[0]


def spectrum_is_symmetric(s: Spectrum) -> bool:
    """True iff the spectrum is symmetric about zero (within 2*tolerance)."""
    n = len(s.values)
    return all(
        abs(s.values[i] + s.values[n - 1 - i]) <= 2.0 * s.tolerance for i in range(n)
    )


def perron(g: Graph, tol: float = DEFAULT_TOL) -> PerronData:
    """Perron value/vector of a connected graph by power iteration from the
    all-ones vector.  The iteration runs on A + I so bipartite spectra
    (where -lambda_max ties lambda_max in magnitude) cannot oscillate.
    """
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    if not is_connected(g):
        raise PreconditionError("perron requires a connected graph")
    n = g.order
    rows = g.rows
    v = [1.0 / math.sqrt(n)] * n
    for _ in range(_MAX_POWER_ITER):
        w = []
        for i in range(n):
            acc = v[i]
            m = rows[i]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                acc += v[j]
            w.append(acc)
        norm = math.sqrt(sum(x * x for x in w))
        w = [x / norm for x in w]
        dist = math.sqrt(sum((a - b) ** 2 for a, b in zip(w, v)))
        v = w
        if dist < tol:
            break
    else:
        raise ArithmeticError("power iteration did not converge")
    value = 0.0
    for i in range(n):
        m = rows[i]
        acc = 0.0
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            acc += v[j]
        value += v[i] * acc
    if any(x <= 0.0 for x in v):
        raise ArithmeticError("Perron vector came out non-positive")
    return PerronData(value, tuple(v))


def common_eigenbasis(
    a: IntMatrix,
    b: IntMatrix,
    c: IntMatrix,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
):
    """Orthonormal basis diagonalizing three pairwise-commuting symmetric
    matrices, found by diagonalizing a seeded random combination of the
    last two; None after 5 failed draws.

    Returns the basis as a tuple of n vectors (each a tuple of floats).
    """
    n = a.order
    if b.order != n or c.order != n:
        raise ParameterError("matrices must share one order")
    for name, m in (("a", a), ("b", b), ("c", c)):
        if not m.is_symmetric():
            raise PreconditionError(f"matrix {name} is not symmetric")
    if not (commute(a, b) and commute(a, c) and commute(b, c)):
        raise PreconditionError("matrices do not pairwise commute")
    rng = random.Random(seed)
    for _ in range(5):
        r = rng.uniform(-2.0, 2.0)
        s = rng.uniform(-2.0, 2.0)
        combo = [
            [r * b.entries[i][j] + s * c.entries[i][j] for j in range(n)]
            for i in range(n)
        ]
        try:
            _, vecs = _jacobi(combo, tol * 1e-3, want_vectors=True)
        except ArithmeticError:
            continue
        if vecs is None:
            continue
        if all(_diagonalizes(vecs, m, tol) for m in (a, b, c)):
            basis = tuple(tuple(vecs[i][k] for i in range(n)) for k in range(n))
            return basis
    return None


def _diagonalizes(vecs: list[list[float]], m: IntMatrix, tol: float) -> bool:
    n = m.order
    mv = [
        [sum(m.entries[i][t] * vecs[t][k] for t in range(n)) for k in range(n)]
        for i in range(n)
    ]
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            entry = sum(vecs[i][k] * mv[i][l] for i in range(n))
            if abs(entry) > tol:
                return False
    return True


def lambda_max_product_check(
    g: Graph, h: Graph, k: Graph, tol: float = DEFAULT_TOL
) -> ProductCheck:
    """Compare lambda_max(G) against lambda_max(H) * lambda_max(K)."""
    lhs = lambda_max(g, tol)
    rhs = lambda_max(h, tol) * lambda_max(k, tol)
    holds = abs(lhs - rhs) <= tol * max(1.0, abs(lhs))
    return ProductCheck(lhs, rhs, holds)
