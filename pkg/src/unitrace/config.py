"""Experiment configuration: one JSON file, validated field by field.

Keys (all optional except ``command``)::

    command     one of COMMANDS
    family      spectrum family name or descriptor mapping (see make_spectrum)
    n           list of matrix sizes N
    m_max       largest moment/cumulant order index m (also the weight for ``wg``)
    xi          grid of Fourier variables
    samples     Monte Carlo sample count M
    seed        root seed of the sample streams
    delta       S_N = delta N^{(1-b)/2}
    gamma       T_N = N^gamma
    eps         bump-kernel width
    eps_xi      products eps*xi for the smoothing table
    tv_method   "psi-inversion" or "histogram"
    rel_tol     target relative precision of psi_N
    workers     size of the worker pool
    output      output directory
    cache_dir   character-table cache (default: $UNITRACE_CACHE_DIR or ~/.cache/unitrace)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from .moments import FAMILIES, make_spectrum

SCHEMA_VERSION = 1
COMMANDS = ("wg", "moments", "cumulants", "charfun", "bebound", "upperbound", "rate", "tv", "smooth", "selftest")
TV_METHODS = ("psi-inversion", "histogram")


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` maps field names to messages."""

    def __init__(self, errors: dict[str, str]):
        self.errors = errors
        super().__init__("; ".join(f"{k}: {v}" for k, v in errors.items()))


@dataclass
class ExperimentConfig:
    command: str
    family: Any = "identity"
    n: list[int] = field(default_factory=lambda: [8])
    m_max: int = 4
    xi: list[float] = field(default_factory=lambda: [0.25 * i for i in range(1, 9)])
    samples: int = 100_000
    seed: int = 0
    delta: float = 0.5
    gamma: float = 2.5
    eps: float = 1.0
    eps_xi: list[float] = field(default_factory=lambda: [200.0, 400.0, 800.0])
    tv_method: str = "psi-inversion"
    rel_tol: float = 1e-15
    workers: int = 1
    output: str = "unitrace-out"
    cache_dir: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        err: dict[str, str] = {}
        if self.command not in COMMANDS:
            err["command"] = f"must be one of {', '.join(COMMANDS)}"
        kind = self.family if isinstance(self.family, str) else (self.family or {}).get("kind") if isinstance(self.family, dict) else None
        if kind not in FAMILIES:
            err["family"] = f"kind must be one of {', '.join(FAMILIES)}"
        if not isinstance(self.n, list) or not self.n or not all(isinstance(v, int) and v >= 1 for v in self.n):
            err["n"] = "must be a non-empty list of positive integers"
        elif "family" not in err:
            for v in self.n:
                try:
                    make_spectrum(self.family, v)
                except ValueError as exc:
                    err["family"] = f"N={v}: {exc}"
                    break
        if not isinstance(self.m_max, int) or self.m_max < 1:
            err["m_max"] = "must be a positive integer"
        elif self.command == "wg" and isinstance(self.n, list) and any(self.m_max > v for v in self.n if isinstance(v, int)):
            err["m_max"] = "the Weingarten table needs m <= N for every N"
        if not isinstance(self.xi, list) or not self.xi or any(not _num(v) or v < 0 for v in self.xi):
            err["xi"] = "must be a non-empty list of non-negative numbers"
        if not isinstance(self.samples, int) or self.samples < 2:
            err["samples"] = "must be an integer >= 2"
        if not isinstance(self.seed, int) or self.seed < 0:
            err["seed"] = "must be a non-negative integer"
        if not _num(self.delta) or self.delta <= 0:
            err["delta"] = "must be positive"
        if not _num(self.gamma) or self.gamma <= 2:
            err["gamma"] = "must exceed 2"
        if not _num(self.eps) or self.eps <= 0:
            err["eps"] = "must be positive"
        if not isinstance(self.eps_xi, list) or any(not _num(v) or v < 25 for v in self.eps_xi):
            err["eps_xi"] = "entries must be >= 25 (asymptotic regime)"
        if self.tv_method not in TV_METHODS:
            err["tv_method"] = f"must be one of {', '.join(TV_METHODS)}"
        if not _num(self.rel_tol) or not 0 < self.rel_tol < 1:
            err["rel_tol"] = "must lie in (0, 1)"
        if not isinstance(self.workers, int) or self.workers < 1:
            err["workers"] = "must be a positive integer"
        if not isinstance(self.output, str) or not self.output:
            err["output"] = "must be a non-empty path"
        if err:
            raise ConfigError(err)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, **asdict(self)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        schema = data.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError({"schema": f"unsupported version {schema!r}"})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError({k: "unknown key" for k in unknown})
        if "command" not in data:
            raise ConfigError({"command": "required"})
        for key in ("xi", "eps_xi"):
            if isinstance(data.get(key), list):
                data[key] = [float(v) if _num(v) else v for v in data[key]]
        for key in ("delta", "gamma", "eps", "rel_tol"):
            if isinstance(data.get(key), int) and not isinstance(data.get(key), bool):
                data[key] = float(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError({"<file>": f"invalid JSON: {exc}"}) from None
        if not isinstance(data, dict):
            raise ConfigError({"<file>": "top level must be an object"})
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text())

    def digest(self) -> str:
        """sha256 of the canonical JSON, excluding where the outputs go."""
        d = self.to_dict()
        d.pop("output")
        d.pop("workers")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)
