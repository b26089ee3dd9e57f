import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal, Self

import yaml
from pydantic import BaseModel, Field, TypeAdapter, field_validator, model_validator

from ..conventions import DEFAULT_RECORD_PATH
from ..oracle import OracleBounds
from ..rootsys import DEFAULT_RANK_CAP
from .expected_values import Computation, ExpectedResultType

# ---------------- Engine Settings ---------------- #


class EngineSettings(BaseModel):
    """
    Process-wide limits. Precedence: YAML file, then environment, then CLI flags.

    YAML example:
        rank_cap: 4
        oracle_primes: [2, 3, 5]
        workers: 4
    """

    model_config = {"extra": "forbid"}

    rank_cap: int = Field(default=DEFAULT_RANK_CAP, ge=1)
    oracle_max_degree: int = Field(default=6, ge=0)
    oracle_primes: list[int] = Field(default_factory=lambda: [2, 3, 5], min_length=1)
    oracle_max_cells: int = Field(default=2_000_000, ge=1)
    workers: int = Field(default=1, ge=1)
    conventions: Path = DEFAULT_RECORD_PATH

    @classmethod
    def from_yaml_file(cls, file_path: str | Path) -> Self:
        file_path = Path(file_path)
        with open(file_path) as file:
            data = yaml.safe_load(file) or {}
        return cls.model_validate(data)

    def with_environment(self, environ: Mapping[str, str] | None = None) -> Self:
        """Apply ``MOTIVIC_WORKERS`` and ``MOTIVIC_CONVENTIONS`` on top of these settings."""
        environ = os.environ if environ is None else environ
        update: dict[str, Any] = {}
        if environ.get("MOTIVIC_WORKERS"):
            update["workers"] = environ["MOTIVIC_WORKERS"]
        if environ.get("MOTIVIC_CONVENTIONS"):
            update["conventions"] = environ["MOTIVIC_CONVENTIONS"]
        if not update:
            return self
        return type(self).model_validate({**self.model_dump(), **update})

    def oracle_bounds(self) -> OracleBounds:
        return OracleBounds(
            primes=tuple(self.oracle_primes), max_degree=self.oracle_max_degree, max_cells=self.oracle_max_cells
        )


# ---------------- Job Configuration ---------------- #


class JobConfig(BaseModel):
    """Everything that determines one CLI computation; echoed under ``"config"`` in JSON output."""

    model_config = {"extra": "forbid"}

    command: str = Field(..., min_length=1)
    root_system: str | None = None
    b: str | None = None
    grade: int | None = None
    order: int | None = None
    spec: str = "generic"
    output_format: Literal["json", "table"] = "table"
    conventions: Path = DEFAULT_RECORD_PATH
    workers: int = Field(default=1, ge=1)
    parameters: dict[str, Any] = Field(default_factory=dict)


# ---------------- Check Suites ---------------- #

COMPUTATION_PARAMETERS: dict[str, set[str]] = {
    "zeta": {"genus", "phi", "order"},
    "psi": {"m", "order"},
    "theta": {"type", "rank", "d", "f", "order"},
    "blowup": {"type", "rank", "b", "order"},
    "eisenstein": {"type", "rank", "b", "grade", "layer"},
    "hall": {"type", "rank", "b", "grade", "form", "action", "l", "layer"},
    "quot": {"order"},
    "subbundles": {"order"},
    "oracle": {"kind", "q", "a1", "m", "n"},
    "torsors": {"type", "rank", "d"},
    "funceq": {"type", "rank", "b", "grade", "w", "genus"},
    "rank2-funceq": {"order", "genus"},
}


class CheckCase(BaseModel):
    model_config = {"extra": "forbid"}

    name: str = Field(..., min_length=1)
    description: str = Field(default="")
    computation: Computation
    parameters: dict[str, Any] = Field(default_factory=dict)

    expected_results: list[ExpectedResultType] = Field(default_factory=list)

    @classmethod
    def from_yaml_dict(cls, data: dict) -> Self:
        """Create CheckCase from YAML dictionary"""
        # Pydantic handles discrimination of the expected results
        expected_results_adapter = TypeAdapter(list[ExpectedResultType])
        expected_results = expected_results_adapter.validate_python(data.get("expected_results", []))

        return cls(
            name=data["name"],
            description=data.get("description", ""),
            computation=data["computation"],
            parameters=data.get("parameters") or {},
            expected_results=expected_results,
        )

    @field_validator("expected_results")
    @classmethod
    def must_have_at_least_one_result(cls, v):
        if not v:
            raise ValueError("Check case must have at least one expected result")
        return v

    @model_validator(mode="after")
    def validate_parameter_names_known(self):
        unknown = set(self.parameters) - COMPUTATION_PARAMETERS[self.computation]
        if unknown:
            raise ValueError(f"Unknown parameters for '{self.computation}': {sorted(unknown)}")
        return self


class CheckSuite(BaseModel):
    model_config = {"extra": "forbid"}

    suite_name: str = Field(..., min_length=1)
    description: str = Field(default="")
    check_cases: list[CheckCase] = Field(default_factory=list)

    @classmethod
    def from_yaml_dict(cls, data: dict) -> Self:
        """Create CheckSuite from parsed YAML dictionary"""
        return cls(
            suite_name=data["suite_name"],
            description=data.get("description", ""),
            check_cases=[CheckCase.from_yaml_dict(case) for case in data.get("check_cases", [])],
        )

    @classmethod
    def from_yaml_file(cls, file_path: str | Path) -> Self:
        """Load CheckSuite directly from YAML file"""
        with open(Path(file_path)) as file:
            data = yaml.safe_load(file)
        return cls.from_yaml_dict(data)

    @field_validator("check_cases")
    @classmethod
    def must_have_cases(cls, v):
        if not v:
            raise ValueError("Check suite must contain at least one check case")
        return v

    @model_validator(mode="after")
    def validate_case_names_unique(self):
        names = [c.name for c in self.check_cases]
        if len(names) != len(set(names)):
            duplicates = {n for n in names if names.count(n) > 1}
            raise ValueError(f"Duplicate check case names found: {duplicates}")
        return self

    def to_json_file(self, file_path: str | Path):
        """Export check suite to JSON"""
        with open(file_path, "w") as f:
            f.write(self.model_dump_json(indent=2))

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
