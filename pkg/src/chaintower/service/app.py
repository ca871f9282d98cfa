"""HTTP front end: one POST route per handler.  Validation failures map
to 422 with the located witness, semantic negatives stay ordinary 200
reports, and internal invariant violations map to 500."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import InternalCheckFailed, SemanticNegative, ValidationFailure
from . import handlers, schemas
from ..jsonio import VERSION


def create_app() -> FastAPI:
    app = FastAPI(title="chaintower", version=VERSION)

    @app.exception_handler(ValidationFailure)
    async def _validation(request: Request, exc: ValidationFailure) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.exception_handler(SemanticNegative)
    async def _negative(request: Request, exc: SemanticNegative) -> JSONResponse:
        return JSONResponse(
            status_code=409,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.exception_handler(InternalCheckFailed)
    async def _internal(request: Request, exc: InternalCheckFailed) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": VERSION}

    @app.post("/classify")
    def classify(req: schemas.ClassifyRequest) -> dict:
        return handlers.handle_classify(req.model_dump())

    @app.post("/lift")
    def lift(req: schemas.LiftRequest) -> dict:
        return handlers.handle_lift(req.model_dump())

    @app.post("/factor")
    def factor(req: schemas.FactorRequest) -> dict:
        return handlers.handle_factor(req.model_dump())

    @app.post("/homology")
    def homology_route(req: schemas.HomologyRequest) -> dict:
        return handlers.handle_homology(req.model_dump())

    @app.post("/verify")
    def verify(req: schemas.VerifyRequest) -> dict:
        return handlers.handle_verify(req.model_dump())

    @app.post("/diagram/classify")
    def diagram_classify(req: schemas.DiagramClassifyRequest) -> dict:
        return handlers.handle_diagram_classify(req.model_dump())

    @app.post("/diagram/factor-z")
    def diagram_factor_z(req: schemas.DiagramFactorRequest) -> dict:
        return handlers.handle_diagram_factor_z(req.model_dump())

    @app.post("/diagram/gen")
    def diagram_gen(req: schemas.DiagramGenRequest) -> dict:
        return handlers.handle_diagram_gen(req.model_dump())

    @app.post("/reedy/validate")
    def reedy_validate(req: schemas.ReedyValidateRequest) -> dict:
        return handlers.handle_reedy_validate(req.model_dump())

    @app.post("/reedy/classify")
    def reedy_classify_route(req: schemas.ReedyClassifyRequest) -> dict:
        return handlers.handle_reedy_classify(req.model_dump())

    @app.post("/reedy/latching")
    def reedy_latching(req: schemas.ReedyObjectRequest) -> dict:
        return handlers.handle_reedy_latching(req.model_dump())

    @app.post("/reedy/matching")
    def reedy_matching(req: schemas.ReedyObjectRequest) -> dict:
        return handlers.handle_reedy_matching(req.model_dump())

    @app.post("/reedy/gen")
    def reedy_gen(req: schemas.ReedyGenRequest) -> dict:
        return handlers.handle_reedy_gen(req.model_dump())

    @app.post("/reedy/tower")
    def reedy_tower(req: schemas.ReedyTowerRequest) -> dict:
        return handlers.handle_reedy_tower(req.model_dump())

    @app.post("/selftest")
    def selftest(req: schemas.SelftestRequest) -> dict:
        return handlers.handle_selftest(req.model_dump())

    return app


app = create_app()
