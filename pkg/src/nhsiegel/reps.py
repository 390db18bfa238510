"""Polynomial representations of the complex general linear group of the
form Sym^j(standard) tensor det^k, acting on spaces with an explicit
unitary-invariant inner product.

The Sym^j factor is realised on the monomial basis e^a = e_1^{a_1} ... e_n^{a_n}
with a_1 + ... + a_n = j, ordered so that the exponent (j, 0, ..., 0) comes
first.  A matrix M acts by substitution, e_i -> sum_r M[r, i] e_r, and the
det^k factor contributes the scalar det(M)^k.  The inner product is the one
induced from the standard inner product on the j-fold tensor power, under
which the monomial basis is orthogonal with

    <e^a, e^a> = (prod_i a_i!) / j!

so the vector e_1^j has norm 1.  This pairing is invariant under unitary
matrices and satisfies <rho(M) v, w> = <v, rho(M*) w> for all M.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import RepMismatchError, SingularMatrixError, UnsupportedWeightError
from .linalg import MAX_DIM, _as_square, det


@dataclass(frozen=True)
class Rep:
    """The representation Sym^j(standard) tensor det^k of rank-n invertible
    complex matrices.  Highest weight (j + k, k, ..., k)."""

    n: int
    j: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_DIM:
            raise ValueError(f"degree {self.n} outside supported range 1..{MAX_DIM}")
        if self.j < 0 or self.k < 0 or self.j != int(self.j) or self.k != int(self.k):
            raise UnsupportedWeightError(
                f"symmetric power j={self.j} and determinant twist k={self.k} "
                "must be non-negative integers"
            )

    @cached_property
    def dim(self) -> int:
        return math.comb(self.n + self.j - 1, self.j)

    @cached_property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        """Monomial exponent tuples of total degree j, highest first."""
        combos = set()
        for bars in itertools.combinations_with_replacement(range(self.n), self.j):
            a = [0] * self.n
            for i in bars:
                a[i] += 1
            combos.add(tuple(a))
        return tuple(sorted(combos, reverse=True))

    @cached_property
    def weights(self) -> tuple[tuple[int, ...], ...]:
        """Diagonal-torus weight of each basis vector."""
        return tuple(tuple(ai + self.k for ai in a) for a in self.exponents)

    @cached_property
    def basis_sq_norms(self) -> np.ndarray:
        fj = math.factorial(self.j)
        return np.array(
            [math.prod(math.factorial(ai) for ai in a) / fj for a in self.exponents]
        )

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {a: idx for idx, a in enumerate(self.exponents)}


@dataclass(frozen=True, eq=False)
class RepVector:
    """A vector in a representation space, in the monomial basis."""

    rep: Rep
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        if c.shape != (self.rep.dim,):
            raise ValueError(
                f"coordinate length {c.shape} does not match dimension {self.rep.dim}"
            )
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def __add__(self, other: "RepVector") -> "RepVector":
        _check_same_rep(self, other)
        return RepVector(self.rep, self.coords + other.coords)

    def __sub__(self, other: "RepVector") -> "RepVector":
        _check_same_rep(self, other)
        return RepVector(self.rep, self.coords - other.coords)

    def __mul__(self, scalar) -> "RepVector":
        return RepVector(self.rep, self.coords * scalar)

    __rmul__ = __mul__


def make_rep(n: int, j: int, k: int) -> Rep:
    """Sym^j tensor det^k for rank n; highest weight (j + k, k, ..., k)."""
    return Rep(int(n), int(j), int(k))


def highest_weight(rep: Rep) -> tuple[int, ...]:
    return (rep.j + rep.k,) + (rep.k,) * (rep.n - 1)


def vector(rep: Rep, coords) -> RepVector:
    return RepVector(rep, np.asarray(coords, dtype=complex))


def zero_vector(rep: Rep) -> RepVector:
    return RepVector(rep, np.zeros(rep.dim, dtype=complex))


def basis_vector(rep: Rep, idx: int) -> RepVector:
    coords = np.zeros(rep.dim, dtype=complex)
    coords[idx] = 1.0
    return RepVector(rep, coords)


def _check_same_rep(v: RepVector, w: RepVector) -> None:
    if v.rep != w.rep:
        raise RepMismatchError(f"vectors from different representations: {v.rep} vs {w.rep}")


def rep_matrix(rep: Rep, m) -> np.ndarray:
    """The matrix of the representation at m, in the monomial basis."""
    m = np.asarray(m, dtype=complex)
    m = _as_square(m, "representation argument")
    if m.shape[0] != rep.n:
        raise ValueError(f"matrix rank {m.shape[0]} does not match representation rank {rep.n}")
    d = det(m)
    if rep.k > 0:
        scale = max(1.0, float(np.max(np.abs(m))))
        if abs(d) <= 1e-13 * scale**rep.n:
            raise SingularMatrixError(
                "determinant twist requires an invertible matrix"
            )
    if rep.n == 1:
        return np.array([[m[0, 0] ** rep.j * d**rep.k]])
    factor = d**rep.k
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    zero = (0,) * rep.n
    for col, a in enumerate(rep.exponents):
        poly: dict[tuple[int, ...], complex] = {zero: 1.0 + 0.0j}
        for i, ai in enumerate(a):
            for _ in range(ai):
                nxt: dict[tuple[int, ...], complex] = {}
                for expo, cval in poly.items():
                    for r in range(rep.n):
                        mri = m[r, i]
                        if mri == 0.0:
                            continue
                        key = expo[:r] + (expo[r] + 1,) + expo[r + 1:]
                        nxt[key] = nxt.get(key, 0.0) + cval * mri
                poly = nxt
        for expo, cval in poly.items():
            out[rep._index[expo], col] = cval * factor
    return out


def apply(rep: Rep, m, v: RepVector) -> RepVector:
    """rho(m) v."""
    if v.rep != rep:
        raise RepMismatchError("vector does not belong to this representation")
    return RepVector(rep, rep_matrix(rep, m) @ v.coords)


def inner(v: RepVector, w: RepVector) -> complex:
    """The invariant Hermitian pairing, linear in the first slot."""
    _check_same_rep(v, w)
    return complex(np.sum(v.coords * np.conj(w.coords) * v.rep.basis_sq_norms))


def norm(v: RepVector) -> float:
    return math.sqrt(max(0.0, inner(v, v).real))
