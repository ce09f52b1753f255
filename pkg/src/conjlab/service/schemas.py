"""Request schemas for the HTTP service.

Operator payloads (matrices, vectors, named constructors) stay as free-form
JSON objects here; their detailed validation — with field-path error
messages — lives in the serialization layer shared with the CLI.
"""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class SpectrumRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conjugation: dict
    tol: float | None = Field(default=None, gt=0)
    degeneracy_tol: float | None = Field(default=None, gt=0)


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conjugation: dict
    tol: float | None = Field(default=None, gt=0)
    degeneracy_tol: float | None = Field(default=None, gt=0)


class TakagiRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: dict
    tol: float | None = Field(default=None, gt=0)
    degeneracy_tol: float | None = Field(default=None, gt=0)


class EigenframeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conjugation: dict
    stiefel: list[list[float]] | None = None
    degeneracy_tol: float | None = Field(default=None, gt=0)


class MeasurabilityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    conjugation: dict
    budget: int = Field(default=256, ge=0)
    seed: int | None = None
    tol: float | None = Field(default=None, gt=0)
    degeneracy_tol: float | None = Field(default=None, gt=0)


class ExperimentRequest(BaseModel):
    """Magnetometry / antiparallel experiment config (shared shape)."""

    model_config = ConfigDict(extra="allow")

    experiment: str = "magnetometry"
    field_dim: int = Field(default=1, ge=1, le=3)
    qubits: int = Field(default=2, ge=1)
    alpha: float = 0.0
    initial: str | dict = "ghz_z"
    points: list
    fisher_tol: float | None = Field(default=None, gt=0)


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    checks: list[str] | None = None
