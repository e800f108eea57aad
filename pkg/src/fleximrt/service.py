"""HTTP service exposing sizing, evaluation, and simulation.

Stateless; every endpoint takes the full config document.  Validation
failures come back as 422 with a structured violation list, malformed JSON
as 400.  No persistence, no authentication: this is a desk tool.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import api
from .design import DesignValidationError
from .distributions import DistributionError
from .information import AnalyticError, InfeasibleSampleSizeError
from .schemas import (
    CalculationRequest,
    EffectCurvesResponse,
    ErrorResponse,
    EvaluateResponse,
    HealthResponse,
    ScenarioRequest,
    SchemaError,
    SimulateResponse,
    SizeResponse,
    ViolationDoc,
)
from .simulation import SimulationError
from .sizing import EffectTooSmallError, SizingError
from .trends import TrendError

_VALIDATION_ERRORS = (DesignValidationError, TrendError, SizingError, AnalyticError,
                      SimulationError, SchemaError, DistributionError, ValueError)


def _error_body(code: str, violations: list[ViolationDoc]) -> dict:
    return ErrorResponse(code=code, violations=violations).model_dump()


def create_app() -> FastAPI:
    app = FastAPI(title="fleximrt", version=api.health().version)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        if any(e.get("type") == "json_invalid" for e in errors):
            return JSONResponse(status_code=400, content=_error_body(
                "malformed_json",
                [ViolationDoc(code="malformed_json", message="request body is not valid JSON")]))
        violations = [
            ViolationDoc(code=e.get("type", "invalid"),
                         message=f"{'.'.join(str(p) for p in e.get('loc', []))}: {e.get('msg', '')}")
            for e in errors]
        return JSONResponse(status_code=422,
                            content=_error_body("validation_error", violations))

    @app.exception_handler(Exception)
    async def handle_domain_errors(request: Request, exc: Exception):
        if isinstance(exc, (InfeasibleSampleSizeError, EffectTooSmallError)):
            return JSONResponse(status_code=422, content=_error_body(
                "infeasible", [ViolationDoc(code="infeasible", message=str(exc))]))
        if isinstance(exc, DesignValidationError):
            violations = [ViolationDoc(code=v.code, message=v.message,
                                       day=v.day, category=v.category)
                          for v in exc.violations]
            return JSONResponse(status_code=422,
                                content=_error_body("validation_error", violations))
        if isinstance(exc, _VALIDATION_ERRORS):
            return JSONResponse(status_code=422, content=_error_body(
                "validation_error",
                [ViolationDoc(code="invalid", message=str(exc))]))
        raise exc

    @app.get("/api/v1/health", response_model=HealthResponse)
    def get_health() -> HealthResponse:
        return api.health()

    @app.post("/api/v1/size", response_model=SizeResponse)
    def post_size(doc: CalculationRequest) -> SizeResponse:
        return api.compute_size(doc)

    @app.post("/api/v1/evaluate", response_model=EvaluateResponse)
    def post_evaluate(doc: CalculationRequest) -> EvaluateResponse:
        return api.compute_evaluation(doc)

    @app.post("/api/v1/simulate", response_model=SimulateResponse)
    def post_simulate(doc: ScenarioRequest) -> SimulateResponse:
        return api.run_simulation(doc)

    @app.post("/api/v1/effect-curves", response_model=EffectCurvesResponse)
    def post_effect_curves(doc: CalculationRequest) -> EffectCurvesResponse:
        return api.compute_effect_curves(doc)

    return app


app = create_app()
