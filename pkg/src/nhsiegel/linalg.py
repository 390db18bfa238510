"""Small dense matrix kernel: symmetric eigenproblems, SPD square roots,
inverses, and monomials in matrix entries.

Everything here operates on plain numpy arrays at desk scale (n <= 8).
The symmetric eigensolver is a cyclic Jacobi iteration, which is simple,
deterministic, and accurate to machine precision for such sizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    EigenIterationError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

MAX_DIM = 8

_JACOBI_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 64
_PIVOT_TOL = 1e-13


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[0] > MAX_DIM:
        raise ValueError(f"{name} dimension {a.shape[0]} outside supported range 1..{MAX_DIM}")
    return a


def symmetrize(a) -> np.ndarray:
    """The exactly symmetric part (a + a^T)/2, as a new array."""
    a = _as_square(np.asarray(a, dtype=float))
    return (a + a.T) / 2.0


def _require_symmetric(a, name: str = "matrix") -> np.ndarray:
    a = _as_square(a, name)
    a = np.asarray(a, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
        raise ValueError(f"{name} is not symmetric")
    return (a + a.T) / 2.0


def max_abs_entry(y) -> float:
    """Largest absolute value among the entries of a matrix."""
    y = np.asarray(y)
    return float(np.max(np.abs(y)))


def eigh_sym(y, max_sweeps: int = _JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (decreasing) and orthonormal eigenvectors of a real
    symmetric matrix, via cyclic Jacobi rotations.

    Returns (w, q) with y = q @ diag(w) @ q.T and w[0] >= ... >= w[n-1].
    Raises EigenIterationError if the off-diagonal norm does not fall below
    the convergence threshold within ``max_sweeps`` sweeps (this signals
    pathological input such as non-finite entries).
    """
    a = _require_symmetric(y, "eigh_sym input").copy()
    if not np.all(np.isfinite(a)):
        raise EigenIterationError("eigensolver given non-finite entries")
    n = a.shape[0]
    q = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), q

    scale = float(np.sqrt(np.sum(a * a)))
    thr = _JACOBI_TOL * max(1.0, scale)
    eps_rot = thr / (2.0 * n * n)

    def off_norm() -> float:
        s = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                s += a[i, j] * a[i, j]
        return math.sqrt(2.0 * s)

    converged = False
    for _ in range(max_sweeps):
        if off_norm() <= thr:
            converged = True
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apq = a[p, r]
                if abs(apq) <= eps_rot:
                    continue
                tau = (a[r, r] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                a[p, r] = 0.0
                a[r, p] = 0.0
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
    if not converged and off_norm() > thr:
        raise EigenIterationError(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps "
            "(non-finite or pathological input?)"
        )
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], q[:, order]


def eigenvalues_sym(y) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, in decreasing order."""
    return eigh_sym(y)[0]


def _posdef_tolerance(w: np.ndarray) -> float:
    # Relative rule: positive definite means min eig > 1e-12 * (1 + max eig).
    return 1e-12 * (1.0 + float(w[0]))


def is_positive_definite(y) -> bool:
    w = eigenvalues_sym(y)
    return float(w[-1]) > _posdef_tolerance(w)


def sqrt_posdef(y) -> np.ndarray:
    """Unique symmetric positive-definite square root of an SPD matrix."""
    w, q = eigh_sym(y)
    if float(w[-1]) <= _posdef_tolerance(w):
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (min eigenvalue {w[-1]:.3e})"
        )
    r = (q * np.sqrt(w)) @ q.T
    return (r + r.T) / 2.0


def in_V_delta(y, delta: float, tol: float = 1e-12) -> bool:
    """Whether y >= delta * identity, i.e. min eigenvalue >= delta (up to tol)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    w = eigenvalues_sym(y)
    return float(w[-1]) >= delta - tol


def solve_gauss(a, b) -> np.ndarray:
    """Solve a @ x = b by Gaussian elimination with partial pivoting.

    Works for real or complex a; b may be a vector or a matrix.
    """
    a = _as_square(a, "coefficient matrix")
    n = a.shape[0]
    b = np.asarray(b)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    m = np.array(a, dtype=complex if np.iscomplexobj(a) or np.iscomplexobj(b) else float)
    rhs = np.array(b, dtype=m.dtype)
    scale = max(1.0, float(np.max(np.abs(m))))
    for col in range(n):
        piv = col + int(np.argmax(np.abs(m[col:, col])))
        if abs(m[piv, col]) <= _PIVOT_TOL * scale:
            raise SingularMatrixError(f"pivot {abs(m[piv, col]):.3e} below threshold")
        if piv != col:
            m[[col, piv], :] = m[[piv, col], :]
            rhs[[col, piv], :] = rhs[[piv, col], :]
        inv_piv = 1.0 / m[col, col]
        for row in range(col + 1, n):
            f = m[row, col] * inv_piv
            if f != 0.0:
                m[row, col:] -= f * m[col, col:]
                rhs[row, :] -= f * rhs[col, :]
    x = np.zeros_like(rhs)
    for row in range(n - 1, -1, -1):
        x[row, :] = (rhs[row, :] - m[row, row + 1:] @ x[row + 1:, :]) / m[row, row]
    return x[:, 0] if vector else x


def det(a) -> complex | float:
    """Determinant via partial-pivot elimination (real or complex)."""
    a = _as_square(a, "matrix")
    n = a.shape[0]
    is_complex = np.iscomplexobj(a)
    m = np.array(a, dtype=complex if is_complex else float)
    sign = 1.0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(m[col:, col])))
        if m[piv, col] == 0.0:
            return 0.0j if is_complex else 0.0
        if piv != col:
            m[[col, piv], :] = m[[piv, col], :]
            sign = -sign
        for row in range(col + 1, n):
            f = m[row, col] / m[col, col]
            if f != 0.0:
                m[row, col:] -= f * m[col, col:]
    d = sign * np.prod(np.diag(m))
    return complex(d) if is_complex else float(d.real)


def inverse(a) -> np.ndarray:
    """Matrix inverse.

    Real symmetric positive-definite inputs go through the eigensolver so
    the result is symmetric by construction; everything else goes through
    Gaussian elimination with partial pivoting.
    """
    a = _as_square(a, "matrix")
    if not np.iscomplexobj(a):
        af = np.asarray(a, dtype=float)
        if np.array_equal(af, af.T):
            w, q = eigh_sym(af)
            if float(w[-1]) > _posdef_tolerance(w):
                inv = (q / w) @ q.T
                return (inv + inv.T) / 2.0
    return solve_gauss(a, np.eye(a.shape[0]))


@dataclass(frozen=True)
class MultiIndex:
    """Exponent assignment on the upper-triangular index pairs of an
    n x n symmetric matrix: pairs (i, j), 1 <= i <= j <= n, each carrying a
    non-negative integer power.  Pairs with power zero are not stored.
    """

    n: int
    powers: tuple[tuple[int, int, int], ...]  # (i, j, power), sorted, power > 0

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_DIM:
            raise ValueError(f"dimension {self.n} outside supported range")
        seen = set()
        for (i, j, b) in self.powers:
            if not (1 <= i <= j <= self.n):
                raise ValueError(f"index pair ({i},{j}) outside upper triangle for n={self.n}")
            if b <= 0 or b != int(b):
                raise ValueError(f"power for ({i},{j}) must be a positive integer, got {b}")
            if (i, j) in seen:
                raise ValueError(f"duplicate index pair ({i},{j})")
            seen.add((i, j))
        object.__setattr__(self, "powers", tuple(sorted(self.powers)))

    @classmethod
    def from_dict(cls, n: int, entries: Mapping[tuple[int, int], int]) -> "MultiIndex":
        powers = tuple(
            (i, j, int(b)) for (i, j), b in sorted(entries.items()) if int(b) != 0
        )
        return cls(n, powers)

    @property
    def degree(self) -> int:
        return sum(b for _, _, b in self.powers)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(i, j): b for i, j, b in self.powers}


def monomial(v, beta: MultiIndex) -> float:
    """Product of powers of upper-triangular entries of v prescribed by beta.

    The empty product (all powers zero) is 1, which also covers 0^0.
    """
    v = _as_square(v, "matrix")
    if v.shape[0] != beta.n:
        raise ValueError(f"matrix dimension {v.shape[0]} != multi-index dimension {beta.n}")
    out = 1.0
    for i, j, b in beta.powers:
        out *= float(v[i - 1, j - 1]) ** b
    return out


def multi_index_count(n: int, p: int) -> int:
    """Number of multi-indices of total degree <= p on n(n+1)/2 slots."""
    r = n * (n + 1) // 2
    return math.comb(r + p, p)


def multi_indices(n: int, p: int) -> Iterator[MultiIndex]:
    """All multi-indices with total degree <= p, in a fixed order."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    for total in range(p + 1):
        for combo in itertools.combinations_with_replacement(pairs, total):
            counts: dict[tuple[int, int], int] = {}
            for pair in combo:
                counts[pair] = counts.get(pair, 0) + 1
            yield MultiIndex.from_dict(n, counts)
