"""Request handlers shared by the HTTP service and the command line client."""

from __future__ import annotations

from . import __version__
from .schemas import (
    CalculationRequest,
    EffectCurve,
    EffectCurvesResponse,
    EvaluateResponse,
    HealthResponse,
    McRow,
    ScenarioRequest,
    SimulateResponse,
    SizeResponse,
    build_design,
    build_scenario,
    build_sizing_request,
)
from .simulation import run_study
from .sizing import SizingMethod, evaluate_at_n, solve_sample_size
from .trends import solve_coefficients


def _percent(value: float) -> str:
    return f"{value * 100:g}"


def size_sentence(n: int, target: float, alpha: float, method: SizingMethod) -> str:
    goal = ("power" if method == SizingMethod.POWER
            else "coverage probability")
    return (f"The required sample size is {n} to attain {_percent(target)}% "
            f"{goal} when the significance level is {alpha:g}.")


def power_sentence(n: int, power: float, alpha: float) -> str:
    return (f"The sample size {n} gives {_percent(round(power, 2))}% power "
            f"when the significance level is {alpha:g}")


def coverage_sentence(n: int, coverage: float, alpha: float) -> str:
    return (f"The sample size {n} gives {_percent(round(coverage, 2))}% coverage "
            f"probability when the significance level is {alpha:g}")


def compute_size(doc: CalculationRequest) -> SizeResponse:
    request = build_sizing_request(doc)
    result = solve_sample_size(request)
    power_mode = request.method == SizingMethod.POWER
    return SizeResponse(
        n=result.n,
        achieved_power=result.achieved if power_mode else None,
        achieved_coverage=None if power_mode else result.achieved,
        achieved_at_n_minus_1=result.achieved_at_n_minus_1,
        ncp=result.ncp,
        precision_quadform=result.precision_quadform,
        bound_at_n=result.bound_at_n,
        df1=result.stat.df1,
        df2=result.stat.df2(result.n),
        stat=result.stat.kind.value,
        method=result.method.value,
        alpha=result.alpha,
        target=result.target,
        deltas=[list(map(float, d)) for d in result.deltas],
        sentence=size_sentence(result.n, result.target, result.alpha, request.method),
        request=doc,
    )


def compute_evaluation(doc: CalculationRequest) -> EvaluateResponse:
    if doc.SS is None:
        raise ValueError("SS (the sample size to evaluate) is required")
    request = build_sizing_request(doc)
    evaluation = evaluate_at_n(request, doc.SS)
    if evaluation.kind == "power":
        sentence = power_sentence(evaluation.n, evaluation.value, request.alpha)
    else:
        sentence = coverage_sentence(evaluation.n, evaluation.value, request.alpha)
    return EvaluateResponse(
        n=evaluation.n, kind=evaluation.kind, value=evaluation.value,
        ncp=evaluation.ncp, df1=evaluation.df1, df2=evaluation.df2,
        sentence=sentence, request=doc)


def run_simulation(doc: ScenarioRequest) -> SimulateResponse:
    scenario = build_scenario(doc)
    result = run_study(scenario, jobs=doc.jobs)
    row = McRow(scenario_id=result.scenario_id, stat=result.stat_kind, n=result.n,
                replicates=result.replicates, fraction=result.fraction,
                se=result.se, failures=result.failures, mode=result.mode)
    return SimulateResponse(results=[row])


def compute_effect_curves(doc: CalculationRequest) -> EffectCurvesResponse:
    """Resolved per-category curves over each category's active days.

    Exists so the planner UI can draw previews without re-deriving any
    statistics client-side.
    """
    design, specs = build_design(doc)
    curves = []
    for m, spec in enumerate(specs, start=1):
        coeffs = solve_coefficients(spec, design.days, design.occ_per_day)
        days = list(range(spec.adding_day, design.days + 1))
        values = [coeffs.value_at(d) for d in days]
        curves.append(EffectCurve(
            category=m, shape=spec.shape, adding_day=spec.adding_day,
            turning_day=spec.turning_day,
            coefficients=[float(c) for c in coeffs.coeffs],
            days=days, values=values))
    return EffectCurvesResponse(days=design.days, curves=curves)


def health() -> HealthResponse:
    return HealthResponse(status="ok", name="fleximrt", version=__version__)
