"""Machine-readable run reports and the recorder recipes write checks into."""

import json
import logging
import os
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from forms.errors import GeometryError
from forms.sweep import PositivityReport

from .config import SCHEMA_VERSION

logger = logging.getLogger(__name__)

CheckKind = Literal["positivity", "residual", "value", "error"]


class CheckEntry(BaseModel):
    name: str
    kind: CheckKind
    passed: bool
    report: Optional[PositivityReport] = None
    value: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    error: Optional[str] = None
    error_type: Optional[str] = None
    details: Dict[str, Any] = {}


class Provenance(BaseModel):
    resolutions: Dict[str, List[int]] = {}
    tolerances: Dict[str, float] = {}
    parameters: Dict[str, Any] = {}
    resolution_scale: float = 1.0
    jobs: int = 1
    wall_time: float = 0.0


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    scenario: str
    recipe: str
    passed: bool
    checks: List[CheckEntry]
    warnings: List[str] = []
    provenance: Provenance = Provenance()

    def failed_checks(self) -> List[CheckEntry]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, wall_time: bool = True) -> dict:
        data = self.model_dump(mode="json", by_alias=True)
        if not wall_time:
            data["provenance"].pop("wall_time", None)
        return data

    def write(self, path: str) -> str:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")
        logger.info(f"Report written to {path}")
        return path


def _describe(exc: BaseException) -> str:
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        where = ".".join(str(x) for x in first["loc"])
        return f"{where}: {first['msg']}" if where else first["msg"]
    return str(exc)


class CheckRecorder:
    """
    Collects check entries in execution order. ``selected`` restricts the
    recorded checks to the named ones; errors are always recorded.
    """

    def __init__(self, selected: Optional[Sequence[str]] = None):
        self.entries: List[CheckEntry] = []
        self.selected = set(selected) if selected else None
        self.resolutions: Dict[str, List[int]] = {}

    def wants(self, name: str) -> bool:
        return self.selected is None or name in self.selected

    def _add(self, entry: CheckEntry) -> CheckEntry:
        self.entries.append(entry)
        level = logging.INFO if entry.passed else logging.WARNING
        logger.log(level, f"{'PASS' if entry.passed else 'FAIL'} {entry.name}")
        return entry

    def positivity(self, name: str, report: PositivityReport, **details) -> CheckEntry:
        return self._add(
            CheckEntry(name=name, kind="positivity", passed=report.passed, report=report, value=report.min_value, details=details)
        )

    def residual(self, name: str, value: float, tol: float, **details) -> CheckEntry:
        value = float(value)
        return self._add(CheckEntry(name=name, kind="residual", passed=value <= tol, value=value, tolerance=tol, details=details))

    def value(self, name: str, value: float, expected: float, tol: float, **details) -> CheckEntry:
        value = float(value)
        passed = abs(value - expected) <= tol
        return self._add(
            CheckEntry(name=name, kind="value", passed=passed, value=value, expected=float(expected), tolerance=tol, details=details)
        )

    def flag(self, name: str, passed: bool, **details) -> CheckEntry:
        return self._add(CheckEntry(name=name, kind="value", passed=bool(passed), details=details))

    def error(self, name: str, exc: BaseException) -> CheckEntry:
        logger.error(f"{name} failed: {type(exc).__name__}: {_describe(exc)}")
        return self._add(
            CheckEntry(name=name, kind="error", passed=False, error=_describe(exc), error_type=type(exc).__name__)
        )

    @contextmanager
    def step(self, name: str) -> Iterator[None]:
        """Record a GeometryError or a validation error raised inside the block as a failed check."""
        try:
            yield
        except (GeometryError, ValidationError) as e:
            self.error(name, e)

    @property
    def passed(self) -> bool:
        return bool(self.entries) and all(e.passed for e in self.entries)
