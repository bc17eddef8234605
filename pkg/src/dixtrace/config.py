"""Run configuration: ladder geometry, tolerances, evaluation budgets.

A single RunConfig travels through every pipeline entry point so that a JSON
config file plus CLI overrides fully determine the numerical behavior. All
defaults are chosen so that the bundled model operators evaluate within a
desktop-scale time budget.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = ["LadderPlan", "RunConfig"]


@dataclass(frozen=True)
class LadderPlan:
    """Geometric evaluation ladder.

    Checkpoints are round(n_min * ratio**j) for j = 0, 1, ... up to n_max,
    deduplicated after rounding. ratio must exceed 1.
    """

    n_min: int = 1 << 10
    n_max: int = 1 << 24
    ratio: float = 2.0

    def __post_init__(self):
        if self.n_min < 1:
            raise DomainError("ladder n_min must be >= 1")
        if self.n_max <= self.n_min:
            raise DomainError("ladder requires n_min < n_max")
        if not self.ratio > 1.0:
            raise DomainError("ladder ratio must be > 1")

    def checkpoints(self) -> list[int]:
        out: list[int] = []
        x = float(self.n_min)
        while True:
            n = int(round(x))
            if n > self.n_max:
                break
            if not out or n > out[-1]:
                out.append(n)
            x *= self.ratio
        if not out or out[-1] != self.n_max:
            out.append(self.n_max)
        return out


@dataclass(frozen=True)
class RunConfig:
    """Knobs for the trace, residue, and limit pipelines."""

    ladder: LadderPlan = field(default_factory=LadderPlan)
    # ladder used by dense sequence limits when cheaper than the main ladder
    dense_ladder: LadderPlan = field(default_factory=lambda: LadderPlan(1 << 10, 1 << 20, 2.0))
    points_per_octave: int = 4
    cesaro_order: int = 1
    threshold: float = 1e-3
    zeta_head: int = 20_000
    enum_budget: int = 1 << 23
    extrapolation_order: int = 2
    agreement_tol: float = 1e-2
    band_budget_factor: float = 3.0
    error_floor: float = 1e-4
    chunk: int = 1 << 20
    seed: int = 0

    def __post_init__(self):
        if self.cesaro_order not in (1, 2, 3):
            raise DomainError("cesaro_order must be 1, 2, or 3")
        if self.threshold <= 0:
            raise DomainError("threshold must be positive")
        if self.points_per_octave < 1:
            raise DomainError("points_per_octave must be >= 1")
        if self.extrapolation_order < 1:
            raise DomainError("extrapolation_order must be >= 1")
        if self.chunk < 1024:
            raise DomainError("chunk must be >= 1024")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise DomainError("seed must fit in an unsigned 64-bit integer")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        d = dict(d)
        for key in ("ladder", "dense_ladder"):
            if key in d and isinstance(d[key], dict):
                d[key] = LadderPlan(**d[key])
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(d) - known
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        return RunConfig(**d)

    @staticmethod
    def from_file(path: str) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise DomainError(f"cannot read config file {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("config file must hold a JSON object")
        return RunConfig.from_dict(data)

    def with_updates(self, **kw) -> "RunConfig":
        for key in ("ladder", "dense_ladder"):
            if key in kw and isinstance(kw[key], dict):
                kw[key] = LadderPlan(**kw[key])
        return dataclasses.replace(self, **kw)
