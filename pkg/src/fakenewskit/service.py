"""HTTP classification service: /v1/classify and /v1/health.

Serves one model artifact at a time behind an atomic reference, so requests
never observe a half-loaded model and a hot reload is a single swap.
Configuration comes from flags or the environment: MODEL_PATH, BIND_ADDR,
EXPLAIN_BUDGET, SEED, ALLOW_ORIGINS, LOG_RAW_TEXT.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from fakenewskit.corpus import normalize_text
from fakenewskit.explain import explain, explanation_payload
from fakenewskit.models.base import ModelArtifact, load_artifact, predict_proba

MAX_TEXT_CHARS = 10_000
DEFAULT_BIND = "127.0.0.1:8080"
DEFAULT_BUDGET = 4096

request_log = logging.getLogger("fakenewskit.service.requests")


class ModelRegistry:
    """Atomic holder for the served artifact; swap() is the hot-reload."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._artifact: ModelArtifact | None = None

    def load(self, path: str | Path) -> None:
        self.swap(load_artifact(path))

    def swap(self, artifact: ModelArtifact) -> None:
        with self._lock:
            self._artifact = artifact

    def get(self) -> ModelArtifact | None:
        return self._artifact


class ClassifyRequest(BaseModel):
    text: str
    explain: bool = True
    budget: int | None = None


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def create_app(model_path: str | Path | None = None, *, seed: int | None = None,
               budget: int | None = None, allow_origins: list[str] | None = None,
               log_raw_text: bool | None = None) -> FastAPI:
    """Build the service app; explicit arguments win over the environment."""
    if model_path is None:
        model_path = os.environ.get("MODEL_PATH") or None
    if seed is None:
        seed = int(os.environ.get("SEED", "0"))
    if budget is None:
        budget = int(os.environ.get("EXPLAIN_BUDGET", str(DEFAULT_BUDGET)))
    if allow_origins is None:
        allow_origins = os.environ.get("ALLOW_ORIGINS", "*").split(",")
    if log_raw_text is None:
        log_raw_text = os.environ.get("LOG_RAW_TEXT", "") == "1"

    app = FastAPI(title="fakenewskit", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=allow_origins, allow_methods=["*"],
        allow_headers=["*"])

    registry = ModelRegistry()
    if model_path:
        registry.load(model_path)
    app.state.registry = registry
    app.state.seed = seed
    app.state.default_budget = budget
    app.state.log_raw_text = log_raw_text

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        return _error(400, "malformed_body", str(exc.errors()[:3]))

    @app.get("/v1/health")
    def health():
        artifact = registry.get()
        if artifact is None:
            return _error(503, "model_not_loaded", "no model artifact is loaded")
        return {"status": "ok", "model_id": artifact.model_id,
                "format_version": artifact.format_version}

    @app.post("/v1/classify")
    def classify(body: ClassifyRequest):
        artifact = registry.get()
        if artifact is None:
            return _error(503, "model_not_loaded", "no model artifact is loaded")
        if len(body.text) == 0:
            return _error(400, "empty_text", "text must be non-empty")
        if len(body.text) > MAX_TEXT_CHARS:
            return _error(400, "too_long",
                          f"text exceeds {MAX_TEXT_CHARS} characters")
        if not normalize_text(body.text):
            return _error(400, "empty_text", "text is empty after normalization")

        started = time.perf_counter()
        p_fake = predict_proba(artifact, body.text)
        label = "fake" if p_fake >= 0.5 else "real"
        explanation = None
        method = None
        if body.explain:
            request_budget = body.budget if body.budget else app.state.default_budget
            result = explain(artifact, body.text, budget=request_budget,
                             seed=app.state.seed)
            explanation = explanation_payload(result)
            method = result.method
        elapsed_ms = (time.perf_counter() - started) * 1000.0

        record = {"ts": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                  "text_length": len(body.text), "label": label,
                  "method": method, "elapsed_ms": round(elapsed_ms, 3)}
        if app.state.log_raw_text:
            record["text"] = body.text
        request_log.info(json.dumps(record))

        return {"label": label, "p_fake": p_fake, "model_id": artifact.model_id,
                "explanation": explanation, "elapsed_ms": elapsed_ms}

    return app


def serve(model_path: str | Path, bind_addr: str = DEFAULT_BIND, *,
          seed: int = 0, budget: int = DEFAULT_BUDGET) -> None:
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    host, _, port = bind_addr.partition(":")
    app = create_app(model_path, seed=seed, budget=budget)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or "8080"),
                log_level="info")
