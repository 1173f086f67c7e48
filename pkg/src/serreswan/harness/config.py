"""Run configuration for the verification harness.

The JSON layout is::

    {"algebra": {"blocks": [2, 3]}, "module": {"rows": [3, 1]},
     "seed": 42, "samples": 200, "fd_step": 1e-4,
     "tol_analytic": 1e-8, "tol_fd": 1e-5, "suites": ["algebra", ...]}

Missing keys take the defaults above; unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from ..algebra import MAX_BLOCK
from ..errors import ConfigError

SUITES = (
    "algebra",
    "geometry",
    "gelfand",
    "module",
    "bundle",
    "connection",
    "serre-swan",
    "reconstruction",
)

_TOP_KEYS = {"algebra", "module", "seed", "samples", "fd_step", "tol_analytic", "tol_fd", "suites"}


@dataclass(frozen=True)
class RunConfig:
    blocks: tuple[int, ...] = (2, 3)
    rows: tuple[int, ...] = (3, 1)
    seed: int = 42
    samples: int = 200
    fd_step: float = 1e-4
    tol_analytic: float = 1e-8
    tol_fd: float = 1e-5
    suites: tuple[str, ...] = field(default=SUITES)

    def __post_init__(self):
        validate(self)

    def to_json(self) -> dict:
        d = asdict(self)
        return {
            "algebra": {"blocks": list(d["blocks"])},
            "module": {"rows": list(d["rows"])},
            "seed": d["seed"],
            "samples": d["samples"],
            "fd_step": d["fd_step"],
            "tol_analytic": d["tol_analytic"],
            "tol_fd": d["tol_fd"],
            "suites": list(d["suites"]),
        }

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate(c: RunConfig):
    if not c.blocks or not all(_is_int(n) and 1 <= n <= MAX_BLOCK for n in c.blocks):
        raise ConfigError(f"algebra.blocks must be a nonempty list of ints in 1..{MAX_BLOCK}")
    if len(c.rows) != len(c.blocks) or not all(_is_int(d) and d >= 0 for d in c.rows):
        raise ConfigError("module.rows must list one nonnegative int per block")
    if not _is_int(c.seed) or c.seed < 0:
        raise ConfigError("seed must be an unsigned int")
    if not _is_int(c.samples) or c.samples < 1:
        raise ConfigError("samples must be >= 1")
    if not _is_real(c.fd_step) or not 0 < c.fd_step < 1:
        raise ConfigError("fd_step must lie in (0, 1)")
    for name in ("tol_analytic", "tol_fd"):
        v = getattr(c, name)
        if not _is_real(v) or not v > 0:
            raise ConfigError(f"{name} must be > 0")
    unknown = [s for s in c.suites if s not in SUITES]
    if unknown or not c.suites:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")


def parse_config(raw) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(raw) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    kw = {}
    try:
        if "algebra" in raw:
            kw["blocks"] = tuple(raw["algebra"]["blocks"])
        if "module" in raw:
            kw["rows"] = tuple(raw["module"]["rows"])
        for key in ("seed", "samples", "fd_step", "tol_analytic", "tol_fd"):
            if key in raw:
                kw[key] = raw[key]
        if "suites" in raw:
            if not isinstance(raw["suites"], list):
                raise ConfigError("suites must be a list")
            kw["suites"] = tuple(raw["suites"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed config: {exc!r}") from exc
    if "blocks" in kw and "rows" not in kw:
        kw["rows"] = tuple(1 for _ in kw["blocks"])
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw)
