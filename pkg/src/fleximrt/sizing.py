"""Minimal sample size solvers and their inverses.

Power-based sizing finds the smallest integer N whose formulated power
reaches the nominal target; precision-based sizing finds the smallest N
whose formulated coverage of the requested estimation precision reaches the
nominal confidence level.  Both exploit monotonicity in N: exponential
bracketing from the statistic's feasibility floor, then binary search.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .design import DesignSpec, require_valid
from .information import (
    InformationMatrix,
    TestKind,
    TestStatistic,
    build_information_matrix,
    formulated_coverage,
    formulated_power,
    noncentrality,
)
from .trends import TrendCoefficients, TrendSpec, solve_coefficients

N_CAP = 1_000_000
TIE_TOL = 1e-12


class SizingError(ValueError):
    pass


class EffectTooSmallError(SizingError):
    """Search exceeded the N cap without reaching the target."""


class SizingMethod(str, enum.Enum):
    POWER = "power"
    PRECISION = "precision"


_METHOD_ALIASES = {
    "power": SizingMethod.POWER,
    "precision": SizingMethod.PRECISION,
    "confidence interval": SizingMethod.PRECISION,
}


def parse_method(name: str) -> SizingMethod:
    key = " ".join(str(name).strip().lower().replace("_", " ").split())
    if key in _METHOD_ALIASES:
        return _METHOD_ALIASES[key]
    raise SizingError(f"unknown sizing method {name!r}")


@dataclass(frozen=True)
class SizingRequest:
    """Inputs for one sizing or evaluation call.

    ``trends`` carries the anticipated standardized effect curves (power
    method); ``precision_targets`` carries the requested estimation margins,
    expressed with the same per-category summaries (precision method).
    Exactly one of the two must be given, matching ``method`` — the
    precision method deliberately knows nothing about effect magnitudes.
    """

    design: DesignSpec
    stat_kind: TestKind
    method: SizingMethod
    alpha: float = 0.05
    target: float | None = None
    trends: tuple[TrendSpec, ...] | None = None
    precision_targets: tuple[TrendSpec, ...] | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise SizingError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.target is None:
            object.__setattr__(self, "target",
                               0.8 if self.method == SizingMethod.POWER else 1.0 - self.alpha)
        if not 0.0 < self.target < 1.0:
            raise SizingError(f"target must be in (0, 1), got {self.target}")
        if self.method == SizingMethod.POWER:
            if self.trends is None or self.precision_targets is not None:
                raise SizingError("power method takes `trends` and no precision targets")
        else:
            if self.precision_targets is None or self.trends is not None:
                raise SizingError(
                    "precision method takes `precision_targets`; effect-size "
                    "trends are rejected to avoid confusing the two scales")
        specs = self.trends if self.trends is not None else self.precision_targets
        specs = tuple(specs)
        if self.method == SizingMethod.POWER:
            object.__setattr__(self, "trends", specs)
        else:
            object.__setattr__(self, "precision_targets", specs)
        if len(specs) != self.design.n_categories:
            raise SizingError(
                f"{len(specs)} per-category summaries for "
                f"{self.design.n_categories} categories")
        adding = self.design.schedule.category_adding_days()
        for m, (spec, a_m) in enumerate(zip(specs, adding), start=1):
            if spec.adding_day != a_m:
                raise SizingError(
                    f"category {m}: summary declares adding day {spec.adding_day}, "
                    f"schedule says {a_m}")

    @property
    def category_specs(self) -> tuple[TrendSpec, ...]:
        return self.trends if self.method == SizingMethod.POWER else self.precision_targets


@dataclass(frozen=True)
class ResolvedModel:
    """Design, solved coefficient sets, and the information matrix."""

    request: SizingRequest
    coefficient_sets: tuple[TrendCoefficients, ...]
    deltas: np.ndarray
    info: InformationMatrix
    stat: TestStatistic

    @property
    def quadform(self) -> float:
        """Per-participant quadratic form driving power / coverage."""
        return float(self.deltas @ self.info.matrix @ self.deltas)


def resolve_model(request: SizingRequest) -> ResolvedModel:
    design = require_valid(request.design)
    sets = tuple(
        solve_coefficients(spec, design.days, design.occ_per_day)
        for spec in request.category_specs
    )
    deltas = np.concatenate([c.coeffs for c in sets])
    info = build_information_matrix(design, list(sets))
    stat = TestStatistic(request.stat_kind, sum_p=info.sum_p, q=design.q)
    return ResolvedModel(request, sets, deltas, info, stat)


@dataclass(frozen=True)
class SizingResult:
    n: int
    achieved: float
    achieved_at_n_minus_1: float | None
    method: SizingMethod
    stat: TestStatistic
    alpha: float
    target: float
    ncp: float | None = None
    precision_quadform: float | None = None
    bound_at_n: float | None = None
    deltas: tuple[np.ndarray, ...] = field(default_factory=tuple)


def _evaluate(model: ResolvedModel, n: int) -> float:
    if model.request.method == SizingMethod.POWER:
        ncp = noncentrality(model.info, model.deltas, n)
        return formulated_power(model.stat, ncp, n, model.request.alpha)
    return formulated_coverage(model.stat, n, model.quadform)


def _minimal_n(model: ResolvedModel, target: float) -> int:
    """Smallest feasible integer N with evaluation >= target (tie accepted)."""
    n = model.stat.n_min
    if _evaluate(model, n) >= target - TIE_TOL:
        return n
    lo = n  # known failure
    hi = n
    while True:
        hi = min(2 * hi, N_CAP)
        if _evaluate(model, hi) >= target - TIE_TOL:
            break
        lo = hi
        if hi >= N_CAP:
            raise EffectTooSmallError(
                f"no N <= {N_CAP} reaches target {target}; effect or precision too small")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _evaluate(model, mid) >= target - TIE_TOL:
            hi = mid
        else:
            lo = mid
    return hi


def _result_at(model: ResolvedModel, n: int) -> SizingResult:
    req = model.request
    achieved = _evaluate(model, n)
    below = None
    if n - 1 >= model.stat.n_min:
        below = _evaluate(model, n - 1)
    extras = {}
    if req.method == SizingMethod.POWER:
        extras["ncp"] = noncentrality(model.info, model.deltas, n)
    else:
        extras["precision_quadform"] = model.quadform
        extras["bound_at_n"] = model.stat.critical_value(n, req.alpha) / n
    return SizingResult(
        n=n, achieved=achieved, achieved_at_n_minus_1=below,
        method=req.method, stat=model.stat, alpha=req.alpha, target=req.target,
        deltas=tuple(c.coeffs for c in model.coefficient_sets), **extras)


def solve_sample_size_power(request: SizingRequest) -> SizingResult:
    if request.method != SizingMethod.POWER:
        raise SizingError("request is not a power-method request")
    model = resolve_model(request)
    return _result_at(model, _minimal_n(model, request.target))


def solve_sample_size_precision(request: SizingRequest) -> SizingResult:
    if request.method != SizingMethod.PRECISION:
        raise SizingError("request is not a precision-method request")
    model = resolve_model(request)
    return _result_at(model, _minimal_n(model, request.target))


def solve_sample_size(request: SizingRequest) -> SizingResult:
    if request.method == SizingMethod.POWER:
        return solve_sample_size_power(request)
    return solve_sample_size_precision(request)


@dataclass(frozen=True)
class Evaluation:
    n: int
    value: float
    kind: str  # "power" | "coverage"
    ncp: float | None
    df1: int
    df2: int | None


def evaluate_at_n(request: SizingRequest, n: int) -> Evaluation:
    """Power (or coverage) achieved at exactly ``n`` participants."""
    model = resolve_model(request)
    model.stat.check_feasible(n)
    value = _evaluate(model, n)
    ncp = (noncentrality(model.info, model.deltas, n)
           if request.method == SizingMethod.POWER else None)
    kind = "power" if request.method == SizingMethod.POWER else "coverage"
    return Evaluation(n=n, value=value, kind=kind, ncp=ncp,
                      df1=model.stat.df1, df2=model.stat.df2(n))
