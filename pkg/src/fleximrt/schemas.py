"""JSON request/response documents and their mapping onto core types.

Field names follow the established calculator-argument vocabulary
(``days``, ``occ_per_day``, ``beta_shape``, ``beta_mean``, ``beta_initial``,
``beta_quadratic_max``, ``tau_*`` inside ``availability``, ``sigma``,
``pow``, ``sigLev``, ``method``, ``test``, ``result``, ``SS``) so configs
port directly between the CLI, the HTTP service, and the web planner.
"""

from __future__ import annotations

from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from . import trends
from .design import (
    AvailabilityProfile,
    BaselineBasis,
    CategorySchedule,
    DesignSpec,
    DesignValidationError,
    RandomizationPlan,
    Violation,
    build_uniform_plan,
)
from .information import parse_test_kind
from .simulation import ErrorModel, ScenarioConfig, TruthSpec
from .sizing import SizingMethod, SizingRequest, parse_method


class SchemaError(ValueError):
    pass


class AvailabilityDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shape: str = "constant"
    mean: float = 1.0
    initial: float | None = None
    turning_day: int | None = None


class BaselineDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shape: str
    turning_day: int | None = None


class CalculationRequest(BaseModel):
    """One sizing / evaluation config."""

    model_config = ConfigDict(extra="forbid")

    days: int
    occ_per_day: int = 1
    category_counts: list[int]
    adding_days: list[int]
    randomization: Union[Literal["uniform"], list[list[float]]] = "uniform"
    availability: AvailabilityDoc = Field(default_factory=AvailabilityDoc)
    beta_shape: Union[str, list[str]]
    beta_mean: Union[float, list[float]]
    beta_initial: Union[float, list[float], None] = None
    beta_quadratic_max: Union[int, list[int], None] = None
    sigma: float = 1.0
    pow: float = 0.8
    sigLev: float = 0.05
    method: str = "power"
    test: str = "hotelling N-q-1"
    result: str = "choice_sample_size"
    SS: int | None = None
    q: int | None = None
    baseline: BaselineDoc | None = None


class ViolationDoc(BaseModel):
    code: str
    message: str
    day: int | None = None
    category: int | None = None


class ErrorResponse(BaseModel):
    code: str
    violations: list[ViolationDoc] = Field(default_factory=list)


class SizeResponse(BaseModel):
    n: int
    achieved_power: float | None = None
    achieved_coverage: float | None = None
    achieved_at_n_minus_1: float | None = None
    ncp: float | None = None
    precision_quadform: float | None = None
    bound_at_n: float | None = None
    df1: int
    df2: int | None = None
    stat: str
    method: str
    alpha: float
    target: float
    deltas: list[list[float]]
    sentence: str
    request: CalculationRequest


class EvaluateResponse(BaseModel):
    n: int
    kind: str
    value: float
    ncp: float | None = None
    df1: int
    df2: int | None = None
    sentence: str
    request: CalculationRequest


class ErrorModelDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str = "iid_normal"
    sigma: float = 1.0
    rho: float = 0.0
    phi: float = 0.0
    variance_slope: float = 0.0


class TruthDoc(BaseModel):
    """Data-generating side of a simulation scenario."""

    model_config = ConfigDict(extra="forbid")

    days: int
    occ_per_day: int = 1
    category_counts: list[int]
    adding_days: list[int]
    randomization: Union[Literal["uniform"], list[list[float]]] = "uniform"
    availability: AvailabilityDoc = Field(default_factory=AvailabilityDoc)
    beta_shape: Union[str, list[str]]
    beta_mean: Union[float, list[float]]
    beta_initial: Union[float, list[float], None] = None
    beta_quadratic_max: Union[int, list[int], None] = None
    alpha_coeffs: list[float] | None = None
    error: ErrorModelDoc = Field(default_factory=ErrorModelDoc)
    q: int | None = None
    baseline: BaselineDoc | None = None


class ScenarioRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario_id: str = "scenario"
    truth: TruthDoc
    working: CalculationRequest | None = None
    n: int | None = None
    replicates: int = 1000
    seed: int = 0
    jobs: int = 1
    test: str = "hotelling N-q-1"
    method: str = "power"
    sigLev: float = 0.05
    pow: float = 0.8


class McRow(BaseModel):
    scenario_id: str
    stat: str
    n: int
    replicates: int
    fraction: float
    se: float
    failures: int
    mode: str


class SimulateResponse(BaseModel):
    results: list[McRow]


class HealthResponse(BaseModel):
    status: str
    name: str
    version: str


class EffectCurve(BaseModel):
    category: int
    shape: str
    adding_day: int
    turning_day: int | None = None
    coefficients: list[float]
    days: list[int]
    values: list[float]


class EffectCurvesResponse(BaseModel):
    days: int
    curves: list[EffectCurve]


def _broadcast(value, n_categories: int, field: str, required: bool) -> list:
    if value is None:
        if required:
            raise SchemaError(f"{field} is required for the chosen trend shape")
        return [None] * n_categories
    if isinstance(value, (int, float, str)) or not isinstance(value, list):
        return [value] * n_categories
    if len(value) != n_categories:
        raise SchemaError(
            f"{field} has {len(value)} entries for {n_categories} categories")
    return list(value)


def _category_specs(doc, schedule: CategorySchedule) -> tuple[trends.TrendSpec, ...]:
    m = schedule.n_categories
    shapes = [trends.canonical_shape(s)
              for s in _broadcast(doc.beta_shape, m, "beta_shape", required=True)]
    means = _broadcast(doc.beta_mean, m, "beta_mean", required=True)
    needs_initial = any(s != trends.CONSTANT for s in shapes)
    initials = _broadcast(doc.beta_initial, m, "beta_initial", required=needs_initial)
    needs_turn = any(s in (trends.QUADRATIC, trends.LINEAR_PLATEAU) for s in shapes)
    turns = _broadcast(doc.beta_quadratic_max, m, "beta_quadratic_max", required=needs_turn)
    adding = schedule.category_adding_days()
    out = []
    for shape, mean, initial, turn, a_m in zip(shapes, means, initials, turns, adding):
        if shape == trends.CONSTANT:
            initial = None
        if shape in (trends.CONSTANT, trends.LINEAR):
            turn = None
        out.append(trends.TrendSpec(shape=shape, average=mean, initial=initial,
                                    turning_day=turn, adding_day=a_m))
    return tuple(out)


def _baseline_from(doc, specs: tuple[trends.TrendSpec, ...]) -> BaselineBasis:
    if doc.baseline is not None:
        basis = BaselineBasis(shape=doc.baseline.shape,
                              turning_day=doc.baseline.turning_day)
    else:
        # default: baseline trend mirrors the first category's effect shape
        first = specs[0]
        turning = first.turning_day if first.shape in (
            trends.QUADRATIC, trends.LINEAR_PLATEAU) else None
        basis = BaselineBasis(shape=first.shape, turning_day=turning)
    if doc.q is not None and doc.q != basis.dim:
        raise SchemaError(
            f"q={doc.q} conflicts with baseline shape {basis.shape!r} "
            f"(dimension {basis.dim})")
    return basis


def build_design(doc) -> tuple[DesignSpec, tuple[trends.TrendSpec, ...]]:
    """DesignSpec plus per-category trend summaries from a request document."""
    early = []
    if doc.days < 1:
        early.append(Violation("days", f"days must be >= 1, got {doc.days}"))
    if doc.occ_per_day < 1:
        early.append(Violation(
            "occ_per_day", f"occ_per_day must be >= 1, got {doc.occ_per_day}"))
    if early:
        raise DesignValidationError(early)
    schedule = CategorySchedule(counts=tuple(doc.category_counts),
                                adding_days=tuple(doc.adding_days))
    if doc.randomization == "uniform":
        plan = build_uniform_plan(schedule, doc.days)
    else:
        plan = RandomizationPlan(np.asarray(doc.randomization, dtype=float))
    availability = AvailabilityProfile.from_shape(
        doc.availability.shape, doc.availability.mean, doc.days,
        initial=doc.availability.initial, turning_day=doc.availability.turning_day)
    specs = _category_specs(doc, schedule)
    baseline = _baseline_from(doc, specs)
    design = DesignSpec(days=doc.days, occ_per_day=doc.occ_per_day,
                        schedule=schedule, randomization=plan,
                        availability=availability, baseline=baseline)
    return design, specs


def build_sizing_request(doc: CalculationRequest) -> SizingRequest:
    design, specs = build_design(doc)
    method = parse_method(doc.method)
    kwargs = {"trends": specs} if method == SizingMethod.POWER else {
        "precision_targets": specs}
    target = doc.pow if method == SizingMethod.POWER else 1.0 - doc.sigLev
    return SizingRequest(design=design, stat_kind=parse_test_kind(doc.test),
                         method=method, alpha=doc.sigLev, target=target, **kwargs)


def build_truth(doc: TruthDoc, seed: int, replicates: int) -> TruthSpec:
    design, specs = build_design(doc)
    error = ErrorModel(kind=doc.error.kind, sigma=doc.error.sigma, rho=doc.error.rho,
                       phi=doc.error.phi, variance_slope=doc.error.variance_slope)
    alpha_coeffs = tuple(doc.alpha_coeffs) if doc.alpha_coeffs is not None else None
    return TruthSpec(design=design, trends=specs, error_model=error,
                     alpha_coeffs=alpha_coeffs, seed=seed, replicates=replicates)


def mirror_working(doc: ScenarioRequest) -> CalculationRequest:
    """Working model identical to the truth's mean structure."""
    truth = doc.truth
    return CalculationRequest(
        days=truth.days, occ_per_day=truth.occ_per_day,
        category_counts=truth.category_counts, adding_days=truth.adding_days,
        randomization=truth.randomization, availability=truth.availability,
        beta_shape=truth.beta_shape, beta_mean=truth.beta_mean,
        beta_initial=truth.beta_initial, beta_quadratic_max=truth.beta_quadratic_max,
        sigma=truth.error.sigma, pow=doc.pow, sigLev=doc.sigLev,
        method=doc.method, test=doc.test, q=truth.q, baseline=truth.baseline)


def build_scenario(doc: ScenarioRequest) -> ScenarioConfig:
    truth = build_truth(doc.truth, seed=doc.seed, replicates=doc.replicates)
    working_doc = doc.working if doc.working is not None else mirror_working(doc)
    working = build_sizing_request(working_doc)
    return ScenarioConfig(truth=truth, working=working, n=doc.n,
                          scenario_id=doc.scenario_id)
