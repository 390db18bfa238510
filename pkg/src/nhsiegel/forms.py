"""Nearly holomorphic vector-valued forms as truncated Fourier expansions.

A form of degree n, near-holomorphy degree p, and level N is stored as a
finite coefficient map

    (beta, S)  ->  a in V,

where beta ranges over multi-indices of total degree <= p on the entries of
Y^{-1}, and S over positive semidefinite symmetric matrices with N*S
integral and trace at most the truncation bound.  Evaluation sums

    F(Z) = sum a(beta, S) exp(2 pi i Tr(S Z)) [Y^{-1}]^beta.

Coefficient growth is declared, not inferred: a package carries constants
(A, kappa) with ||a(beta, S)|| <= A (1 + Tr S)^kappa for every stored term,
which is what makes the truncation tail estimable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import FormDataError, TailDivergenceError
from .linalg import (
    MultiIndex,
    eigenvalues_sym,
    inverse,
    monomial,
    multi_index_count,
    sqrt_posdef,
)
from .reps import Rep, RepVector, apply, norm, rep_matrix, zero_vector
from .symplectic import SiegelPoint, SymplecticMatrix, act, automorphy_factor

_TWO_PI = 2.0 * math.pi

# Floating-point allowance added on top of series-tail thresholds when
# judging invariance deviations.
FLOAT_FLOOR = 1e-9


def _canonical_s_key(s_int: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in s_int)


@dataclass(frozen=True, eq=False)
class FourierExpansion:
    """Finitely supported Fourier data of a nearly holomorphic form.

    ``coefficients`` maps (MultiIndex, integer matrix key of N*S) to complex
    coordinate vectors in ``rep``.  Terms with Tr(S) above ``t_max`` are
    dropped on construction; S that fails positive semidefiniteness is
    rejected outright.
    """

    n: int
    p: int
    level: int
    rep: Rep
    t_max: float
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise FormDataError("degree must be positive")
        if self.level < 1 or self.level != int(self.level):
            raise FormDataError("level must be a positive integer")
        if self.p < 0:
            raise FormDataError("near-holomorphy degree must be non-negative")
        if self.rep.n != self.n:
            raise FormDataError(
                f"representation rank {self.rep.n} does not match degree {self.n}"
            )
        if self.t_max < 0:
            raise FormDataError("truncation bound must be non-negative")
        # The invariants hold no matter how the map was assembled.
        checked: dict = {}
        for key, value in dict(self.coefficients).items():
            beta, skey = key
            if not isinstance(beta, MultiIndex) or beta.n != self.n:
                raise FormDataError(f"coefficient key {key!r}: bad multi-index")
            if beta.degree > self.p:
                raise FormDataError(
                    f"coefficient key {key!r}: beta degree {beta.degree} exceeds {self.p}"
                )
            s_int = np.array(skey, dtype=np.int64)
            if s_int.shape != (self.n, self.n) or not np.array_equal(s_int, s_int.T):
                raise FormDataError(f"coefficient key {key!r}: S key must be symmetric {self.n}x{self.n}")
            s_mat = s_int / float(self.level)
            if float(eigenvalues_sym(s_mat)[-1]) < -1e-12:
                raise FormDataError(
                    f"coefficient key {key!r}: S is not positive semidefinite"
                )
            if float(np.trace(s_mat)) > self.t_max + 1e-12:
                raise FormDataError(
                    f"coefficient key {key!r}: Tr(S) exceeds the truncation bound {self.t_max}"
                )
            vec = np.array(value, dtype=complex)
            if vec.shape != (self.rep.dim,):
                raise FormDataError(
                    f"coefficient key {key!r}: value length does not match dimension {self.rep.dim}"
                )
            vec.flags.writeable = False
            checked[(beta, _canonical_s_key(s_int))] = vec
        object.__setattr__(self, "coefficients", checked)

    @classmethod
    def from_terms(
        cls,
        n: int,
        p: int,
        level: int,
        rep: Rep,
        t_max: float,
        terms: Iterable[tuple[MultiIndex, Sequence[Sequence[int]], Sequence[complex]]],
        label: str = "coefficients",
    ) -> "FourierExpansion":
        """Build an expansion from (beta, N*S integer matrix, vector) records.

        Raises FormDataError naming the offending record when a beta exceeds
        degree p, an S is not positive semidefinite, or N*S is not integral.
        """
        coeffs: dict = {}
        for idx, (beta, s_raw, value) in enumerate(terms):
            where = f"{label}[{idx}]"
            if not isinstance(beta, MultiIndex):
                raise FormDataError(f"{where}: beta must be a MultiIndex")
            if beta.n != n:
                raise FormDataError(f"{where}: beta has dimension {beta.n}, expected {n}")
            if beta.degree > p:
                raise FormDataError(
                    f"{where}: beta degree {beta.degree} exceeds near-holomorphy degree {p}"
                )
            s_arr = np.asarray(s_raw, dtype=float)
            if s_arr.shape != (n, n):
                raise FormDataError(f"{where}: S must be {n}x{n}")
            s_round = np.round(s_arr)
            if float(np.max(np.abs(s_arr - s_round))) > 1e-9:
                raise FormDataError(f"{where}: {int(level)}*S is not integral")
            if float(np.max(np.abs(s_round - s_round.T))) != 0.0:
                raise FormDataError(f"{where}: S is not symmetric")
            s_int = s_round.astype(np.int64)
            s_mat = s_int / float(level)
            w = eigenvalues_sym(s_mat)
            if float(w[-1]) < -1e-12:
                raise FormDataError(
                    f"{where}: S is not positive semidefinite (min eigenvalue {w[-1]:.3e})"
                )
            vec = np.array(value, dtype=complex)
            if vec.shape != (rep.dim,):
                raise FormDataError(
                    f"{where}: value has length {vec.shape}, expected {rep.dim}"
                )
            vec.flags.writeable = False
            key = (beta, _canonical_s_key(s_int))
            if key in coeffs:
                raise FormDataError(f"{where}: duplicate (beta, S) record")
            if float(np.trace(s_mat)) <= t_max + 1e-12:
                coeffs[key] = vec
        return cls(n=n, p=p, level=level, rep=rep, t_max=t_max, coefficients=coeffs)

    def terms(self) -> Iterable[tuple[MultiIndex, np.ndarray, np.ndarray]]:
        """Stored (beta, S, vector) triples with S as a float matrix."""
        for (beta, skey), vec in self.coefficients.items():
            s = np.array(skey, dtype=float) / float(self.level)
            yield beta, s, vec.copy()

    def with_t_max(self, t_max: float) -> "FourierExpansion":
        """Re-truncate to a new trace bound."""
        terms = [
            (beta, np.array(skey, dtype=float), vec)
            for (beta, skey), vec in self.coefficients.items()
        ]
        return FourierExpansion.from_terms(
            self.n, self.p, self.level, self.rep, t_max, terms
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        if (self.n, self.p, self.level, self.rep, self.t_max) != (
            other.n,
            other.p,
            other.level,
            other.rep,
            other.t_max,
        ):
            return False
        if set(self.coefficients) != set(other.coefficients):
            return False
        return all(
            np.array_equal(vec, other.coefficients[key])
            for key, vec in self.coefficients.items()
        )

    @cached_property
    def _stacks(self) -> list[tuple[MultiIndex, np.ndarray, np.ndarray]]:
        by_beta: dict[MultiIndex, list] = {}
        for (beta, skey), vec in self.coefficients.items():
            by_beta.setdefault(beta, []).append((skey, vec))
        out = []
        for beta, items in by_beta.items():
            items.sort(key=lambda kv: kv[0])
            s_stack = np.array([k for k, _ in items], dtype=float) / float(self.level)
            v_stack = np.array([v for _, v in items], dtype=complex)
            out.append((beta, s_stack, v_stack))
        return out


def evaluate(f: FourierExpansion, z: SiegelPoint) -> RepVector:
    """Sum the stored expansion at Z."""
    if z.n != f.n:
        raise ValueError(f"point degree {z.n} does not match form degree {f.n}")
    if not f.coefficients:
        return zero_vector(f.rep)
    zc = z.mat
    y_inv = inverse(z.Y)
    total = np.zeros(f.rep.dim, dtype=complex)
    for beta, s_stack, v_stack in f._stacks:
        phases = np.exp(2j * math.pi * np.einsum("kij,ij->k", s_stack, zc))
        total += monomial(y_inv, beta) * (phases @ v_stack)
    return RepVector(f.rep, total)


@dataclass(frozen=True, eq=False)
class FormPackage:
    """An expansion bundled with its transformation test data and declared
    coefficient-growth constants.

    ``gamma_test_set`` holds integral symplectic matrices against which the
    transformation law is checked; ``coset_reps`` are representatives used
    when the invariance group is a proper subgroup of the full integral
    group (default: just the identity).
    """

    expansion: FourierExpansion
    gamma_test_set: tuple[SymplecticMatrix, ...]
    growth_a: float
    growth_kappa: float
    coset_reps: tuple[SymplecticMatrix, ...] = ()

    def __post_init__(self):
        gammas = tuple(self.gamma_test_set)
        for g in gammas:
            if float(np.max(np.abs(g.mat - np.round(g.mat)))) > 1e-9:
                raise FormDataError("gamma_test_set entries must be integral")
        object.__setattr__(self, "gamma_test_set", gammas)
        reps_ = tuple(self.coset_reps) or (SymplecticMatrix.identity(self.expansion.n),)
        object.__setattr__(self, "coset_reps", reps_)
        if not (self.growth_a >= 0.0 and math.isfinite(self.growth_a)):
            raise FormDataError("growth constant A must be finite and non-negative")
        if not math.isfinite(self.growth_kappa):
            raise FormDataError("growth exponent kappa must be finite")
        for beta, s, vec in self.expansion.terms():
            bound = self.growth_a * (1.0 + float(np.trace(s))) ** self.growth_kappa
            vn = float(np.sqrt(np.sum(np.abs(vec) ** 2)))
            if vn > bound * (1.0 + 1e-12):
                raise FormDataError(
                    f"stored coefficient norm {vn:.6g} at Tr(S)={float(np.trace(s)):.6g} "
                    f"exceeds declared growth bound {bound:.6g}"
                )

    @property
    def n(self) -> int:
        return self.expansion.n

    @property
    def rep(self) -> Rep:
        return self.expansion.rep

    @property
    def lambda1(self) -> int:
        return self.rep.j + self.rep.k


@dataclass(frozen=True)
class PointEvaluator:
    """A V-valued function on the upper half space, with its representation."""

    rep: Rep
    n: int
    func: Callable[[SiegelPoint], RepVector]

    def __call__(self, z: SiegelPoint) -> RepVector:
        return self.func(z)


FormLike = FourierExpansion | FormPackage | PointEvaluator


def as_evaluator(f: FormLike) -> PointEvaluator:
    if isinstance(f, PointEvaluator):
        return f
    if isinstance(f, FormPackage):
        f = f.expansion
    expansion = f
    return PointEvaluator(expansion.rep, expansion.n, lambda z: evaluate(expansion, z))


def slash(f: FormLike, g: SymplecticMatrix) -> PointEvaluator:
    """The weight-rho slash action: Z -> rho(C Z + D)^{-1} F(gZ).

    The result is a point evaluator; no re-expansion into Fourier data is
    performed.
    """
    ev = as_evaluator(f)

    def transformed(z: SiegelPoint) -> RepVector:
        j = automorphy_factor(g, z)
        return apply(ev.rep, inverse(j), ev(act(g, z)))

    return PointEvaluator(ev.rep, ev.n, transformed)


def phi(f: FormLike, z: SiegelPoint) -> float:
    """The invariant magnitude ||rho(Y^{1/2}) F(Z)||."""
    ev = as_evaluator(f)
    return norm(apply(ev.rep, sqrt_posdef(z.Y), ev(z)))


def tail_bound(package: FormPackage, y) -> float:
    """Upper bound for the discarded series tail at imaginary part Y.

    Counts lattice matrices with Tr(N*S) = m by (2m+1)^(n(n+1)/2), bounds
    each coefficient by A (1 + m/N)^kappa, uses Tr(S Y) >= delta' Tr(S) with
    delta' the least eigenvalue of Y, and bounds every Y^{-1} monomial by
    max(1, delta'^-p) times the number of multi-indices.  The resulting
    one-dimensional series is summed until it provably closes.
    """
    y = np.asarray(y, dtype=float)
    delta = float(eigenvalues_sym(y)[-1])
    if delta <= 0.0:
        raise TailDivergenceError(
            f"tail estimate requires positive definite Y (min eigenvalue {delta:.3e})"
        )
    a_const = package.growth_a
    if a_const == 0.0:
        return 0.0
    exp_ = package.expansion
    n, p, level = exp_.n, exp_.p, exp_.level
    kappa = package.growth_kappa
    r_slots = n * (n + 1) // 2
    count_beta = multi_index_count(n, p)
    mono = max(1.0, delta ** (-p))
    c = _TWO_PI * delta / level
    m = int(math.floor(level * exp_.t_max + 1e-9)) + 1

    def term(mm: int) -> float:
        return (2.0 * mm + 1.0) ** r_slots * a_const * (1.0 + mm / level) ** kappa * math.exp(-c * mm)

    def ratio_majorant(mm: int) -> float:
        # Upper bound for term(m'+1)/term(m') over all m' >= mm.  Both
        # polynomial ratio factors decrease toward 1, so capping the kappa
        # factor at 1 from below keeps this valid for negative kappa too.
        poly = ((2.0 * mm + 3.0) / (2.0 * mm + 1.0)) ** r_slots
        kfac = ((level + mm + 1.0) / (level + mm)) ** kappa
        return poly * max(1.0, kfac) * math.exp(-c)

    total = 0.0
    closed = False
    for _ in range(200000):
        t = term(m)
        total += t
        r_hat = ratio_majorant(m)
        if r_hat < 1.0:
            rest = t * r_hat / (1.0 - r_hat)
            if rest <= 1e-16 * total:
                total += rest
                closed = True
                break
        m += 1
    if not closed:
        raise TailDivergenceError(
            "tail estimate did not stabilise within the iteration budget "
            f"(min eigenvalue of Y is {delta:.3e}; effectively too small)"
        )
    return count_beta * mono * total


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of checking the transformation law on sample points."""

    gammas: int
    samples: int
    max_deviation: float
    threshold: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "InvarianceReport") -> "InvarianceReport":
        """Combine two shards (counts add, extrema win)."""
        return InvarianceReport(
            gammas=max(self.gammas, other.gammas),
            samples=self.samples + other.samples,
            max_deviation=max(self.max_deviation, other.max_deviation),
            threshold=max(self.threshold, other.threshold),
            violations=self.violations + other.violations,
        )


def check_invariance(
    package: FormPackage,
    samples: Sequence[SiegelPoint],
) -> InvarianceReport:
    """Measure the relative deviation of F|gamma from F on the samples.

    Samples must satisfy Im(Z) >= identity/2, which keeps the truncation
    tail estimable; the per-sample threshold is the tail bound at Z and at
    gamma Z (scaled through the automorphy factor) plus a fixed
    floating-point allowance.
    """
    exp_ = package.expansion
    for z in samples:
        if float(eigenvalues_sym(z.Y)[-1]) < 0.5 - 1e-9:
            raise ValueError("invariance samples must have Im(Z) >= identity/2")
    max_dev = 0.0
    max_thr = 0.0
    violations = 0
    for g in package.gamma_test_set:
        transformed = slash(package, g)
        for z in samples:
            base = evaluate(exp_, z)
            dev = norm(transformed(z) - base) / (1.0 + norm(base))
            jinv = inverse(automorphy_factor(g, z))
            amp = _rep_matrix_frobenius(exp_.rep, jinv)
            zg = act(g, z)
            thr = tail_bound(package, z.Y) + amp * tail_bound(package, zg.Y) + FLOAT_FLOOR
            max_dev = max(max_dev, dev)
            max_thr = max(max_thr, thr)
            if dev > thr:
                violations += 1
    return InvarianceReport(
        gammas=len(package.gamma_test_set),
        samples=len(samples),
        max_deviation=max_dev,
        threshold=max_thr,
        violations=violations,
    )


def _rep_matrix_frobenius(rep: Rep, m) -> float:
    rm = rep_matrix(rep, m)
    return float(np.sqrt(np.sum(np.abs(rm) ** 2)))
