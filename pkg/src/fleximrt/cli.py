"""Command line client.

Flags mirror the JSON config keys; a config file and inline design flags
are mutually exclusive.  By default commands run in-process; ``--url``
sends the same document to a running service instead.  Exit codes: 2 for
validation problems, 3 when the request is infeasible.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import api
from .design import DesignValidationError, validate_design
from .distributions import DistributionError
from .information import AnalyticError, InfeasibleSampleSizeError
from .schemas import CalculationRequest, ScenarioRequest, SchemaError, build_design
from .simulation import SimulationError
from .sizing import EffectTooSmallError, SizingError, SizingMethod, parse_method
from .trends import TrendError

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3

_VALIDATION_ERRORS = (DesignValidationError, TrendError, SizingError, AnalyticError,
                      SimulationError, SchemaError, DistributionError, ValueError)


def _fail(message: str, code: int) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _ints(_ctx, _param, value):
    if value is None:
        return None
    return [int(v) for v in str(value).split(",") if v != ""]


def _floats(_ctx, _param, value):
    if value is None:
        return None
    out = [float(v) for v in str(value).split(",") if v != ""]
    return out[0] if len(out) == 1 else out


def _int_list_or_scalar(_ctx, _param, value):
    if value is None:
        return None
    out = [int(v) for v in str(value).split(",") if v != ""]
    return out[0] if len(out) == 1 else out


_DESIGN_FLAGS = [
    click.option("--days", type=int, default=None, help="Study period in days."),
    click.option("--occ-per-day", type=int, default=None,
                 help="Decision time points per day."),
    click.option("--category-counts", callback=_ints, default=None,
                 help="Comma list: categories added per adding day, e.g. 3,1."),
    click.option("--adding-days", callback=_ints, default=None,
                 help="Comma list of adding days, e.g. 1,91."),
    click.option("--prob", default=None,
                 help="'uniform' or path to a JSON D x (M+1) probability matrix."),
    click.option("--beta-shape", default=None,
                 help="constant | linear | quadratic | linear_plateau "
                      "('linear and constant' accepted)."),
    click.option("--beta-mean", callback=_floats, default=None,
                 help="Average standardized effect, scalar or comma list."),
    click.option("--beta-initial", callback=_floats, default=None,
                 help="Initial standardized effect, scalar or comma list."),
    click.option("--beta-quadratic-max", callback=_int_list_or_scalar, default=None,
                 help="Turning day per category, scalar or comma list."),
    click.option("--tau-shape", default=None, help="Availability trend shape."),
    click.option("--tau-mean", type=float, default=None, help="Mean availability."),
    click.option("--tau-initial", type=float, default=None,
                 help="Initial availability."),
    click.option("--tau-quadratic-max", type=int, default=None,
                 help="Availability turning day."),
    click.option("--sigma", type=float, default=None,
                 help="Residual standard deviation (echoed; effects are standardized)."),
    click.option("--pow", "pow_", type=float, default=None, help="Target power."),
    click.option("--sig-lev", type=float, default=None, help="Significance level."),
    click.option("--method", default=None, help="power | precision."),
    click.option("--test", default=None,
                 help="chi | 'hotelling N' | 'hotelling N-q-1'."),
    click.option("--q", type=int, default=None,
                 help="Baseline trend dimension override."),
]


def _design_options(cmd):
    for flag in reversed(_DESIGN_FLAGS):
        cmd = flag(cmd)
    return cmd


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        _fail(f"malformed JSON in {path}: {exc}", EXIT_VALIDATION)


def _request_from_flags(config: str | None, flags: dict) -> CalculationRequest:
    inline = {k: v for k, v in flags.items() if v is not None}
    if config is not None and inline:
        _fail(f"--config conflicts with inline flags: {', '.join(sorted(inline))}",
              EXIT_VALIDATION)
    if config is not None:
        payload = _load_json(config)
    else:
        required = ("days", "category_counts", "adding_days", "beta_shape", "beta_mean")
        missing = [k for k in required if k not in inline]
        if missing:
            _fail(f"missing required flags: {', '.join(missing)}", EXIT_VALIDATION)
        payload = {
            "days": inline["days"],
            "category_counts": inline["category_counts"],
            "adding_days": inline["adding_days"],
            "beta_shape": inline["beta_shape"],
            "beta_mean": inline["beta_mean"],
        }
        if "occ_per_day" in inline:
            payload["occ_per_day"] = inline["occ_per_day"]
        if "beta_initial" in inline:
            payload["beta_initial"] = inline["beta_initial"]
        if "beta_quadratic_max" in inline:
            payload["beta_quadratic_max"] = inline["beta_quadratic_max"]
        prob = inline.get("prob")
        if prob is not None and prob != "uniform":
            payload["randomization"] = _load_json(prob)
        availability = {}
        for key, field in (("tau_shape", "shape"), ("tau_mean", "mean"),
                           ("tau_initial", "initial"), ("tau_quadratic_max", "turning_day")):
            if key in inline:
                availability[field] = inline[key]
        if availability:
            payload["availability"] = availability
        for key in ("sigma", "sig_lev", "method", "test", "q"):
            if key in inline:
                payload["sigLev" if key == "sig_lev" else key] = inline[key]
        if "pow_" in inline:
            payload["pow"] = inline["pow_"]
    try:
        return CalculationRequest.model_validate(payload)
    except Exception as exc:
        _fail(f"invalid config: {exc}", EXIT_VALIDATION)


def _emit(response, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(response.model_dump(), sort_keys=True))
    else:
        click.echo(response.sentence)


def _post(url: str, endpoint: str, payload: dict):
    import httpx

    reply = httpx.post(f"{url.rstrip('/')}{endpoint}", json=payload, timeout=600.0)
    if reply.status_code >= 400:
        body = reply.json()
        lines = [v.get("message", "") for v in body.get("violations", [])]
        code = EXIT_INFEASIBLE if body.get("code") == "infeasible" else EXIT_VALIDATION
        _fail("\n".join([body.get("code", "error")] + lines), code)
    return reply.json()


def _run_calc(handler, sentence_key, config, url, fmt, flags, result_mode,
              ss=None, expected_method=None):
    doc = _request_from_flags(config, flags)
    updates = {"result": result_mode}
    if ss is not None:
        updates["SS"] = ss
    doc = doc.model_copy(update=updates)
    if expected_method is not None:
        try:
            method = parse_method(doc.method)
        except SizingError as exc:
            _fail(str(exc), EXIT_VALIDATION)
        if method != expected_method:
            _fail(f"this command requires method={expected_method.value!r}, "
                  f"config says {doc.method!r}", EXIT_VALIDATION)
    if url:
        body = _post(url, "/api/v1/size" if result_mode == "choice_sample_size"
                     else "/api/v1/evaluate", doc.model_dump())
        if fmt == "json":
            click.echo(json.dumps(body, sort_keys=True))
        else:
            click.echo(body[sentence_key])
        return
    try:
        response = handler(doc)
    except (InfeasibleSampleSizeError, EffectTooSmallError) as exc:
        _fail(str(exc), EXIT_INFEASIBLE)
    except DesignValidationError as exc:
        _fail("\n".join(str(v) for v in exc.violations), EXIT_VALIDATION)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)
    _emit(response, fmt)


@click.group()
def main() -> None:
    """Sample size calculators for staged-category micro-randomized trials."""


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="JSON config file.")
@click.option("--url", default=None, help="Send the request to a running service.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_design_options
def size(config, url, fmt, **flags):
    """Solve the minimal sample size for the configured design."""
    _run_calc(api.compute_size, "sentence", config, url, fmt, flags,
              "choice_sample_size")


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--url", default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--ss", type=int, required=True, help="Sample size to evaluate.")
@_design_options
def power(config, url, fmt, ss, **flags):
    """Report the formulated power at a given sample size."""
    _run_calc(api.compute_evaluation, "sentence", config, url, fmt, flags,
              "choice_power", ss=ss, expected_method=SizingMethod.POWER)


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--url", default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--ss", type=int, required=True, help="Sample size to evaluate.")
@_design_options
def coverage(config, url, fmt, ss, **flags):
    """Report the formulated coverage probability at a given sample size."""
    if config is None and flags.get("method") is None:
        flags = dict(flags, method="precision")
    _run_calc(api.compute_evaluation, "sentence", config, url, fmt, flags,
              "choice_coverage_probability", ss=ss, expected_method=SizingMethod.PRECISION)


@main.command()
@click.option("--config", type=click.Path(exists=True), required=True,
              help="Scenario JSON (truth + working sub-documents).")
@click.option("--url", default=None)
@click.option("--out", type=click.Path(), default=None, help="Write CSV here.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--replicates", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=None, help="Replicate parallelism cap.")
def simulate(config, url, out, fmt, replicates, seed, jobs):
    """Run a Monte Carlo study and emit one CSV row per scenario/stat/N."""
    payload = _load_json(config)
    try:
        doc = ScenarioRequest.model_validate(payload)
    except Exception as exc:
        _fail(f"invalid scenario: {exc}", EXIT_VALIDATION)
    updates = {}
    if replicates is not None:
        updates["replicates"] = replicates
    if seed is not None:
        updates["seed"] = seed
    if jobs is not None:
        updates["jobs"] = jobs
    doc = doc.model_copy(update=updates)
    if url:
        body = _post(url, "/api/v1/simulate", doc.model_dump())
        rows = body["results"]
    else:
        try:
            rows = [r.model_dump() for r in api.run_simulation(doc).results]
        except _VALIDATION_ERRORS as exc:
            _fail(str(exc), EXIT_VALIDATION)
    if fmt == "json":
        text = json.dumps({"results": rows}, sort_keys=True)
    else:
        lines = ["scenario_id,stat,n,replicates,fraction,se,failures"]
        lines += [f"{r['scenario_id']},{r['stat']},{r['n']},{r['replicates']},"
                  f"{r['fraction']:.6f},{r['se']:.6f},{r['failures']}" for r in rows]
        text = "\n".join(lines)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.option("--config", type=click.Path(exists=True), default=None)
@_design_options
def validate(config, **flags):
    """Check a design config; print violations and exit 2 if any."""
    doc = _request_from_flags(config, flags)
    try:
        design, _specs = build_design(doc)
    except DesignValidationError as exc:
        _fail("\n".join(str(v) for v in exc.violations), EXIT_VALIDATION)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)
    violations = validate_design(design)
    if violations:
        _fail("\n".join(str(v) for v in violations), EXIT_VALIDATION)
    click.echo("valid")


@main.command()
@click.option("--port", type=int, default=None,
              help="Port (default: FLEXIMRT_PORT or 8000).")
@click.option("--host", default="127.0.0.1")
def serve(port, host):
    """Run the HTTP service."""
    import uvicorn

    if port is None:
        port = int(os.environ.get("FLEXIMRT_PORT", "8000"))
    uvicorn.run("fleximrt.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
