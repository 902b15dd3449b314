# -*- coding: utf-8 -*-
"""
Pydantic models for the JSON diagonal specification and the JSON cost report.
"""

import json
import math
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, field_validator, model_validator

try:
    from .diagsynth_phase import DiagonalSpec
    from .diagsynth_utils import SpecSchemaError, format_float
except ImportError:
    from diagsynth_phase import DiagonalSpec
    from diagsynth_utils import SpecSchemaError, format_float


class PhaseBlock(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    theta: float
    length: int = Field(alias='len', ge=1)

    @field_validator('theta')
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("theta must be finite")
        return value


class DiagonalSpecModel(BaseModel):
    """Either compressed blocks or a full phase vector, never both."""
    model_config = ConfigDict(extra='forbid')

    n: int = Field(ge=1)
    blocks: Optional[List[PhaseBlock]] = None
    diagonal_thetas: Optional[List[float]] = None
    eps: Optional[float] = Field(default=None, gt=0, lt=1)

    @model_validator(mode='after')
    def _one_encoding(self) -> "DiagonalSpecModel":
        if (self.blocks is None) == (self.diagonal_thetas is None):
            raise ValueError("exactly one of 'blocks' or 'diagonal_thetas' is required")
        size = 1 << self.n
        if self.blocks is not None:
            total = sum(b.length for b in self.blocks)
            if total != size:
                raise ValueError(f"block lengths sum to {total}, expected {size}")
        else:
            if len(self.diagonal_thetas) != size:
                raise ValueError(f"diagonal_thetas has {len(self.diagonal_thetas)} entries, expected {size}")
            if not all(math.isfinite(t) for t in self.diagonal_thetas):
                raise ValueError("diagonal_thetas must be finite")
        return self

    def to_spec(self) -> DiagonalSpec:
        if self.blocks is not None:
            return DiagonalSpec.from_blocks(self.n, [(b.theta, b.length) for b in self.blocks], self.eps)
        return DiagonalSpec(self.n, tuple(self.diagonal_thetas), self.eps)

    @classmethod
    def from_spec(cls, spec: DiagonalSpec) -> "DiagonalSpecModel":
        return cls(n=spec.n, diagonal_thetas=list(spec.thetas), eps=spec.eps)


class CostReportModel(BaseModel):
    method: str
    rotations: int = Field(ge=0)
    entanglement_t: int = Field(ge=0)
    total_t: float = Field(ge=0)
    width: int = Field(ge=1)
    deviation: Optional[float] = None

    @field_serializer('total_t', 'deviation')
    def _fixed_digits(self, value: Optional[float]) -> Optional[float]:
        return None if value is None else float(format_float(value))


def parse_spec(text: str) -> DiagonalSpec:
    """Parses JSON text into a DiagonalSpec, raising SpecSchemaError on any defect."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecSchemaError(f"Malformed JSON: {e}") from e
    try:
        return DiagonalSpecModel.model_validate(data).to_spec()
    except ValidationError as e:
        errors = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'spec'}: {err['msg']}" for err in e.errors())
        raise SpecSchemaError(f"Invalid diagonal spec: {errors}") from e

def dump_spec(spec: DiagonalSpec) -> str:
    return DiagonalSpecModel.from_spec(spec).model_dump_json(exclude_none=True, indent=2)
