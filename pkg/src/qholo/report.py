"""Run configuration and the JSON report envelope shared by all subcommands."""
from __future__ import annotations

import datetime as _dt
import json
import math
import subprocess
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from . import __version__

DEFAULT_TOL_INEQ = 1e-10
DEFAULT_TOL_RESID = 1e-12
SCHEMA_FILE = "report.schema.json"


@dataclass
class Record:
    """One verified statement: ``lhs <= rhs + tolerance`` or ``|lhs - rhs| <= tolerance``."""

    name: str
    anchor: str
    lhs: float
    rhs: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def inequality(name: str, anchor: str, lhs: float, rhs: float, tol: float, **detail) -> Record:
    return Record(name, anchor, float(lhs), float(rhs), tol, bool(lhs <= rhs + tol), detail)


def equality(name: str, anchor: str, lhs: float, rhs: float, tol: float, **detail) -> Record:
    return Record(name, anchor, float(lhs), float(rhs), tol, bool(abs(lhs - rhs) <= tol), detail)


def residual_record(name: str, anchor: str, value: float, tol: float, **detail) -> Record:
    """``value`` is a residual that must not exceed ``tol`` (``tol == 0`` demands exact zero)."""
    return Record(name, anchor, float(value), 0.0, tol, bool(value <= tol), detail)


@dataclass
class RunConfig:
    subcommand: str
    q: list = field(default_factory=list)
    d: int | None = None
    degree: int | None = None
    r: list = field(default_factory=list)
    t_policy: str = "janson"
    samples: int | None = None
    n_list: list = field(default_factory=list)
    seed: int = 0
    backend: str = "float"
    out: str | None = None
    format: str = "json"
    tol_ineq: float = DEFAULT_TOL_INEQ
    tol_resid: float = DEFAULT_TOL_RESID
    poly: str | None = None
    n_max: int | None = None
    n_brute: int | None = None
    workers: int = 1

    def validate(self):
        for r in self.r:
            if r < 2 or r % 2:
                raise ValueError(f"r = {r} must be an even integer >= 2")
        if self.tol_ineq <= 0 or self.tol_resid <= 0:
            raise ValueError("tolerances must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.backend not in ("float", "rational"):
            raise ValueError("backend must be float or rational")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        parse_t_policy(self.t_policy)


def parse_t_policy(policy: str) -> float:
    """Offset from the Janson time: ``janson`` -> 0, ``janson-0.05`` -> -0.05, ``janson+0.1`` -> 0.1."""
    p = policy.strip().replace("−", "-").replace("±", "+")
    if not p.startswith("janson"):
        raise ValueError(f"unknown t-policy {policy!r}")
    rest = p[len("janson"):]
    if not rest:
        return 0.0
    if rest[0] not in "+-":
        raise ValueError(f"unknown t-policy {policy!r}")
    try:
        return float(rest)
    except ValueError:
        raise ValueError(f"unknown t-policy {policy!r}") from None


def build_id() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "--short", "HEAD"], capture_output=True,
                             text=True, timeout=5, cwd=Path(__file__).resolve().parent)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


@dataclass
class ReportEnvelope:
    config: dict
    records: list
    results: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.records if r.passed)
        return {"total": len(self.records), "passed": passed, "failed": len(self.records) - passed}

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "meta": self.meta,
            "records": [{k: _finite(v) for k, v in asdict(r).items()} for r in self.records],
            "results": self.results,
            "summary": {**self.summary, "ok": self.ok},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)


class Timer:
    def __enter__(self):
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self._t0
        return False

    def meta(self) -> dict[str, Any]:
        return {"build": build_id(), "started": self.started, "wall_seconds": round(self.seconds, 3)}


def load_schema() -> dict:
    return json.loads(resources.files("qholo").joinpath(SCHEMA_FILE).read_text())
