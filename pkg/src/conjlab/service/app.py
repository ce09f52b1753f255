"""FastAPI application over the conjugation-analysis handlers.

Run externally, e.g.:  uvicorn conjlab.service.app:app
"""
from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..errors import ConjlabError
from ..io import figure2_csv, figure2_rows
from . import handlers
from .schemas import (
    ClassifyRequest,
    EigenframeRequest,
    ExperimentRequest,
    MeasurabilityRequest,
    SpectrumRequest,
    TakagiRequest,
    VerifyRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="conjlab",
        version=__version__,
        description="Non-local structure of conjugation symmetries: magic-basis "
                    "spectra, measurability certificates, minimum-entanglement "
                    "eigenframes and QCRB-saturating measurements.",
    )

    @app.exception_handler(ConjlabError)
    async def _domain_error(request: Request, exc: ConjlabError):
        return JSONResponse(status_code=422,
                            content={"error": str(exc),
                                     "type": type(exc).__name__})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/spectrum")
    def spectrum(req: SpectrumRequest) -> dict:
        return handlers.spectrum_handler(req.model_dump())

    @app.post("/classify")
    def classify(req: ClassifyRequest) -> dict:
        return handlers.classify_handler(req.model_dump())

    @app.post("/takagi")
    def takagi(req: TakagiRequest) -> dict:
        return handlers.takagi_handler(req.model_dump())

    @app.post("/eigenframe")
    def eigenframe(req: EigenframeRequest) -> dict:
        return handlers.eigenframe_handler(req.model_dump())

    @app.post("/measurability")
    def measurability(req: MeasurabilityRequest) -> dict:
        return handlers.measurability_handler(req.model_dump())

    @app.post("/magnetometry")
    def magnetometry(req: ExperimentRequest) -> dict:
        return handlers.magnetometry_handler(req.model_dump())

    @app.post("/antiparallel")
    def antiparallel(req: ExperimentRequest) -> dict:
        return handlers.antiparallel_handler(req.model_dump())

    @app.post("/verify")
    def verify(req: VerifyRequest) -> dict:
        return handlers.verify_handler(req.model_dump())

    @app.get("/table1")
    def table1() -> dict:
        return handlers.table1_handler()

    @app.get("/figure2")
    def figure2(grid: int = Query(default=64, ge=2, le=4096),
                format: str = Query(default="json", pattern="^(json|csv)$")):
        if format == "csv":
            return PlainTextResponse(figure2_csv(figure2_rows(grid)),
                                     media_type="text/csv")
        return handlers.figure2_handler(grid)

    return app


app = create_app()
