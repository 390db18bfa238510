"""Growth certification for lifted forms.

Two right-hand sides are certified against samples:

  * eigenvalue product bound:   prod_i (mu_i^{l/2} + mu_i^{-l/2}),
  * trace/determinant bound:    (1 + Tr Y)^{n l} (det Y)^{-l/2},

where l is the largest entry of the highest weight and mu_i are the
eigenvalues of Y = Im(Z), together with the moderate-growth inequality
|Phi(g)| <= C (Tr(g^T g))^r for the function lifted to the group.

Constants are estimated empirically: the invariant magnitude phi is swept
over reduced (fundamental-domain) points, its worst ratio against the
eigenvalue bound is inflated by a safety factor, and the resulting constant
is then validated on fresh adversarial sweeps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidExponentError, NotPositiveDefiniteError
from .forms import FormLike, FormPackage, as_evaluator, phi, slash
from .linalg import eigenvalues_sym, inverse
from .reps import RepVector, apply, inner, norm
from .sampling import random_compact, random_siegel_point
from .symplectic import (
    SiegelPoint,
    SymplecticMatrix,
    act,
    automorphy_factor,
    from_point,
    reduce_to_fundamental,
)

log = logging.getLogger(__name__)

DEFAULT_SAFETY = 1.25
DEFAULT_RATIO_TOL = 1e-9


@dataclass(frozen=True)
class SweepConfig:
    """Sampling parameters for constant estimation and bound sweeps."""

    samples: int = 1000
    seed: int = 0
    eig_low: float = 1e-2
    eig_high: float = 1e2
    x_scale: float = 5.0
    safety: float = DEFAULT_SAFETY
    ratio_tol: float = DEFAULT_RATIO_TOL

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.ratio_tol <= 0:
            raise ValueError("ratio tolerance must be positive")


@dataclass(frozen=True)
class GrowthReport:
    """Outcome of a bound-verification sweep."""

    kind: str
    constant: float
    exponent_r: float
    samples: int
    violations: int
    worst_ratio: float
    worst_point: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "GrowthReport") -> "GrowthReport":
        """Combine two shards of the same sweep (samples and violations add,
        the worst ratio and its witness win)."""
        if (self.kind, self.constant, self.exponent_r) != (
            other.kind,
            other.constant,
            other.exponent_r,
        ):
            raise ValueError("cannot merge reports from different sweeps")
        take_other = other.worst_ratio > self.worst_ratio
        return GrowthReport(
            kind=self.kind,
            constant=self.constant,
            exponent_r=self.exponent_r,
            samples=self.samples + other.samples,
            violations=self.violations + other.violations,
            worst_ratio=max(self.worst_ratio, other.worst_ratio),
            worst_point=other.worst_point if take_other else self.worst_point,
            config=self.config,
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "constant": self.constant,
            "exponent_r": self.exponent_r,
            "samples": self.samples,
            "violations": self.violations,
            "worst_ratio": self.worst_ratio,
            "worst_point": self.worst_point,
            "config": self.config,
        }


def sturm_rhs(y, lambda1: int) -> float:
    """prod_i (mu_i^{lambda1/2} + mu_i^{-lambda1/2}) over the eigenvalues of y."""
    mu = eigenvalues_sym(y)
    if float(mu[-1]) <= 0.0:
        raise NotPositiveDefiniteError("eigenvalue bound needs positive definite Y")
    half = lambda1 / 2.0
    out = 1.0
    for m in mu:
        out *= float(m) ** half + float(m) ** (-half)
    return out


def corollary_rhs(y, lambda1: int) -> float:
    """(1 + Tr Y)^{n lambda1} (det Y)^{-lambda1/2}."""
    y = np.asarray(y, dtype=float)
    mu = eigenvalues_sym(y)
    if float(mu[-1]) <= 0.0:
        raise NotPositiveDefiniteError("trace bound needs positive definite Y")
    n = y.shape[0]
    det_y = float(np.prod(mu))
    return (1.0 + float(np.trace(y))) ** (n * lambda1) * det_y ** (-lambda1 / 2.0)


def _fd_height_bound(y, weight: Sequence[int], delta: float) -> float:
    # Debug quantity: det(Y)^{l1/2} * delta^{(1/2) sum_j (l_j - l1)} dominates
    # prod mu_j(Y^{1/2})^{l_j} on points with Y >= delta * identity.
    mu = eigenvalues_sym(y)
    l1 = weight[0]
    det_y = float(np.prod(mu))
    return det_y ** (l1 / 2.0) * delta ** (0.5 * sum(lj - l1 for lj in weight[1:]))


def fundamental_domain_points(
    n: int,
    config: SweepConfig,
) -> Iterable[SiegelPoint]:
    """Reduced points: adversarial draws pushed into the fundamental domain."""
    rng = np.random.default_rng(config.seed)
    for _ in range(config.samples):
        z = random_siegel_point(n, rng, config.eig_low, config.eig_high, config.x_scale)
        _, z_red = reduce_to_fundamental(z)
        yield z_red


def adversarial_points(n: int, config: SweepConfig) -> Iterable[SiegelPoint]:
    rng = np.random.default_rng(config.seed)
    for _ in range(config.samples):
        yield random_siegel_point(n, rng, config.eig_low, config.eig_high, config.x_scale)


def estimate_constant(package: FormPackage, config: SweepConfig) -> float:
    """Empirical constant for the eigenvalue product bound.

    Sweeps phi over fundamental-domain points and over the coset
    representatives, takes the worst ratio against the eigenvalue bound,
    and inflates it by the configured safety factor.
    """
    lam1 = package.lambda1
    evaluators = [
        as_evaluator(package) if _is_identity(g) else slash(package, g)
        for g in package.coset_reps
    ]
    worst = 0.0
    worst_z = None
    for z_red in fundamental_domain_points(package.n, config):
        rhs = sturm_rhs(z_red.Y, lam1)
        for ev in evaluators:
            ratio = phi(ev, z_red) / rhs
            if ratio > worst:
                worst = ratio
                worst_z = z_red
    if log.isEnabledFor(logging.DEBUG) and worst_z is not None:
        from .symplectic import FUNDAMENTAL_DOMAIN_DELTA

        weight = (lam1,) + (package.rep.k,) * (package.n - 1)
        log.debug(
            "ratio sup %.6g at height bound %.6g (safety %.3g)",
            worst,
            _fd_height_bound(worst_z.Y, weight, FUNDAMENTAL_DOMAIN_DELTA.get(package.n, 1.0)),
            config.safety,
        )
    return config.safety * worst


def _is_identity(g: SymplecticMatrix) -> bool:
    return bool(np.array_equal(g.mat, np.eye(g.mat.shape[0])))


def verify_growth_bound(
    package: FormPackage,
    constant: float,
    kind: str = "theorem",
    points: Iterable[SiegelPoint] | None = None,
    config: SweepConfig | None = None,
) -> GrowthReport:
    """Check phi(F, Z) <= constant * RHS(Im Z) over sample points.

    ``kind`` selects the right-hand side: "theorem" for the eigenvalue
    product, "corollary" for the trace/determinant form.  Violations are
    recorded, not raised.
    """
    if kind == "theorem":
        rhs_fn = sturm_rhs
    elif kind == "corollary":
        rhs_fn = corollary_rhs
    else:
        raise ValueError(f"unknown bound kind {kind!r}")
    if constant < 0:
        raise ValueError("bound constant must be non-negative")
    config = config or SweepConfig()
    if points is None:
        points = adversarial_points(package.n, config)
    lam1 = package.lambda1
    ratio_cap = 1.0 + config.ratio_tol
    count = 0
    violations = 0
    worst_ratio = 0.0
    worst_point: dict = {}
    for z in points:
        count += 1
        val = phi(package, z)
        rhs = constant * rhs_fn(z.Y, lam1)
        ratio = _safe_ratio(val, rhs)
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_point = _point_dict(z)
        if ratio > ratio_cap:
            violations += 1
    return GrowthReport(
        kind=kind,
        constant=constant,
        exponent_r=lam1 / 2.0 if kind == "theorem" else float(package.n * lam1),
        samples=count,
        violations=violations,
        worst_ratio=worst_ratio,
        worst_point=worst_point,
        config=_config_dict(config, package),
    )


def lift(f: FormLike, g: SymplecticMatrix) -> RepVector:
    """The lifted function on the group: rho(J(g, iI))^{-1} F(g . iI)."""
    ev = as_evaluator(f)
    base = SiegelPoint.base_point(ev.n)
    j = automorphy_factor(g, base)
    return apply(ev.rep, inverse(j), ev(act(g, base)))


def group_samples(n: int, config: SweepConfig) -> Iterable[SymplecticMatrix]:
    """Samples g = from_point(Z) k with adversarial Z and random compact k."""
    rng = np.random.default_rng(config.seed)
    for _ in range(config.samples):
        z = random_siegel_point(n, rng, config.eig_low, config.eig_high, config.x_scale)
        yield from_point(z) @ random_compact(n, rng)


def verify_moderate_growth(
    package: FormPackage,
    w0: RepVector,
    r: float,
    constant: float,
    elements: Iterable[SymplecticMatrix] | None = None,
    config: SweepConfig | None = None,
) -> GrowthReport:
    """Check |<lift(F, g), w0>| <= C (Tr(g^T g))^r over group samples.

    ``constant`` is the certified eigenvalue-bound constant; the moderate
    growth constant is ||w0|| * constant * safety.  The exponent must be at
    least n * lambda1 / 2.
    """
    lam1 = package.lambda1
    min_r = package.n * lam1 / 2.0
    if r < min_r:
        raise InvalidExponentError(f"exponent {r} below the certified threshold {min_r}")
    config = config or SweepConfig()
    c_mod = norm(w0) * constant * config.safety
    if elements is None:
        elements = group_samples(package.n, config)
    ratio_cap = 1.0 + config.ratio_tol
    count = 0
    violations = 0
    worst_ratio = 0.0
    worst_point: dict = {}
    for g in elements:
        count += 1
        val = abs(inner(lift(package, g), w0))
        rhs = c_mod * float(np.sum(g.mat * g.mat)) ** r
        ratio = _safe_ratio(val, rhs)
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_point = {"g": g.mat.tolist()}
        if ratio > ratio_cap:
            violations += 1
    return GrowthReport(
        kind="moderate-growth",
        constant=c_mod,
        exponent_r=float(r),
        samples=count,
        violations=violations,
        worst_ratio=worst_ratio,
        worst_point=worst_point,
        config=_config_dict(config, package),
    )


def _safe_ratio(val: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if val == 0.0 else math.inf
    return val / rhs


def _point_dict(z: SiegelPoint) -> dict:
    return {"X": z.X.tolist(), "Y": z.Y.tolist()}


def _config_dict(config: SweepConfig, package: FormPackage) -> dict:
    from .symplectic import FUNDAMENTAL_DOMAIN_DELTA

    return {
        "samples": config.samples,
        "seed": config.seed,
        "eig_low": config.eig_low,
        "eig_high": config.eig_high,
        "x_scale": config.x_scale,
        "safety": config.safety,
        "ratio_tol": config.ratio_tol,
        "delta": FUNDAMENTAL_DOMAIN_DELTA.get(package.n),
        "t_max": package.expansion.t_max,
    }
