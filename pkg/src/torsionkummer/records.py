"""Validated input records for elliptic curves over number fields.

Galois-image data (surjectivity, growth parameters, Cartan parameters) is
taken as given and only checked for shape.
"""

from __future__ import annotations

import json
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from sympy import isprime

from .divisibility import GeneratorMatrix
from .errors import ParseError, SchemaError
from .factored import prime_divisors

SCHEMA_VERSION = 1


def _check_primes(v: list[int]) -> list[int]:
    for p in v:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
    return sorted(set(v))


class FactoredDiscriminant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sign: int = 1
    factors: dict[int, int] = Field(default_factory=dict)

    @field_validator("sign")
    @classmethod
    def _sign(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return v

    @field_validator("factors")
    @classmethod
    def _factors(cls, v: dict[int, int]) -> dict[int, int]:
        for p, e in v.items():
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            if e < 1:
                raise ValueError(f"exponent of {p} must be positive")
        return dict(sorted(v.items()))


class CMData(BaseModel):
    model_config = ConfigDict(extra="forbid")

    order_conductor: int = Field(ge=1)
    ramified_primes: list[int] = Field(default_factory=list)
    cartan_params: dict[int, tuple[int, int]] = Field(default_factory=dict)
    cm_field_in_K: bool = False

    @field_validator("ramified_primes")
    @classmethod
    def _ramified(cls, v: list[int]) -> list[int]:
        return _check_primes(v)

    @field_validator("cartan_params")
    @classmethod
    def _cartan(cls, v: dict[int, tuple[int, int]]) -> dict[int, tuple[int, int]]:
        for p in v:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        return dict(sorted(v.items()))


class CurveRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    label: str
    field_degree: int = Field(ge=1)
    disc_K: Union[int, FactoredDiscriminant]
    bad_reduction_primes: list[int] = Field(default_factory=list)
    nonsurjective_primes: Optional[list[int]] = None
    cm: Optional[CMData] = None
    growth_params: dict[int, int] = Field(default_factory=dict)
    mw_rank: int = Field(ge=1)
    generators: list[list[int]]

    @field_validator("bad_reduction_primes", "nonsurjective_primes")
    @classmethod
    def _primes(cls, v: list[int] | None) -> list[int] | None:
        return None if v is None else _check_primes(v)

    @field_validator("schema_version")
    @classmethod
    def _version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {v}; expected {SCHEMA_VERSION}")
        return v

    @field_validator("disc_K")
    @classmethod
    def _disc(cls, v):
        if isinstance(v, int) and v == 0:
            raise ValueError("discriminant must be nonzero")
        return v

    @field_validator("growth_params")
    @classmethod
    def _growth(cls, v: dict[int, int]) -> dict[int, int]:
        for p, n in v.items():
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            if n < 1:
                raise ValueError(f"n_{p} must be at least 1")
        if 2 in v and v[2] < 2:
            raise ValueError("n_2 must be at least 2 (parameters of maximal growth at 2 require n_2 >= 2)")
        return dict(sorted(v.items()))

    @model_validator(mode="after")
    def _consistency(self) -> CurveRecord:
        if self.cm is not None and self.nonsurjective_primes is not None:
            raise ValueError("a record carries either a cm block or nonsurjective_primes, not both")
        if self.cm is None and self.nonsurjective_primes is None:
            raise ValueError("a non-CM record must list nonsurjective_primes (possibly empty)")
        if len(self.generators) != self.mw_rank:
            raise ValueError(f"generators has {len(self.generators)} rows, expected mw_rank = {self.mw_rank}")
        widths = {len(row) for row in self.generators}
        if len(widths) != 1 or 0 in widths:
            raise ValueError("generators rows must be nonempty and of equal length")
        return self

    @property
    def is_cm(self) -> bool:
        return self.cm is not None

    @property
    def disc_primes(self) -> list[int]:
        if isinstance(self.disc_K, int):
            return prime_divisors(self.disc_K)
        return sorted(self.disc_K.factors)

    def generator_matrix(self) -> GeneratorMatrix:
        return GeneratorMatrix.from_rows(self.generators)

    def to_json(self) -> dict[str, Any]:
        return json.loads(self.model_dump_json(exclude_none=True))


def _field_path(loc: tuple) -> str:
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += ("." if out else "") + str(part)
    return out or "<root>"


def _validate(obj: Any, prefix: str) -> CurveRecord:
    return _validate_model(CurveRecord, obj, prefix)


def ingest_record(document: str | bytes | dict | list) -> CurveRecord | list[CurveRecord]:
    """Parse one record or an array of records from JSON text or decoded data."""
    document = _decode(document)
    if isinstance(document, list):
        return [_validate(obj, f"[{i}]") for i, obj in enumerate(document)]
    return _validate(document, "")


class PipelineInstance(BaseModel):
    """A synthetic finite-level instance: ``V`` generated by ``generators`` under ``action_generators``."""

    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    label: str = ""
    r: int = Field(ge=1)
    s: int = Field(ge=0)
    N: int = Field(ge=1)
    generators: list[list[list[int]]] = Field(default_factory=list)
    action_generators: list[list[list[int]]] = Field(default_factory=list)
    d_A: int = Field(ge=1)
    m_cohomology: int = Field(ge=1)

    @field_validator("schema_version")
    @classmethod
    def _version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {v}; expected {SCHEMA_VERSION}")
        return v

    @model_validator(mode="after")
    def _shapes(self) -> PipelineInstance:
        for name, mats, cols in (("generators", self.generators, self.r), ("action_generators", self.action_generators, self.s)):
            for i, m in enumerate(mats):
                if len(m) != self.s or any(len(row) != cols for row in m):
                    raise ValueError(f"{name}[{i}] must be a {self.s}x{cols} matrix")
        return self

    def to_json(self) -> dict[str, Any]:
        return json.loads(self.model_dump_json())


def _validate_model(model, obj: Any, prefix: str):
    if not isinstance(obj, dict):
        raise SchemaError(prefix or "<root>", "record must be an object")
    try:
        return model.model_validate(obj)
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = tuple(p for p in err["loc"] if p not in ("int", "FactoredDiscriminant"))
        path = _field_path(loc)
        if prefix:
            path = prefix if path == "<root>" else f"{prefix}.{path}"
        msg = err["msg"].removeprefix("Value error, ")
        raise SchemaError(path, msg) from None


def _decode(document: str | bytes | dict | list) -> Any:
    if isinstance(document, (str, bytes)):
        try:
            return json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    return document


def ingest_pipeline_instance(document: str | bytes | dict | list) -> PipelineInstance | list[PipelineInstance]:
    document = _decode(document)
    if isinstance(document, list):
        return [_validate_model(PipelineInstance, obj, f"[{i}]") for i, obj in enumerate(document)]
    return _validate_model(PipelineInstance, document, "")
