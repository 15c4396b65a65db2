"""Structured check reports shared by the checkers and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def encode(value: Any) -> Any:
    """JSON-friendly rendering of library values (matrices, points, morphisms)."""
    from .grassmann import GrPoint
    from .mor_category import MorPoint, VfMor

    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(value)]
        return np.atleast_2d(value).astype(float).tolist()
    if isinstance(value, GrPoint):
        return {"kind": "grpoint", "frame": encode(value.frame)}
    if isinstance(value, MorPoint):
        return {"kind": "morpoint", "src": encode(value.src), "dst": encode(value.dst),
                "map": encode(value.map_mat)}
    if isinstance(value, VfMor):
        return {"kind": "vfmor", "mat": encode(value.mat)}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


@dataclass
class AxiomResult:
    name: str
    max_residual: float = 0.0
    samples: int = 0
    tolerance: float = 0.0
    witness: Any = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.samples > 0 and self.max_residual <= self.tolerance

    def record(self, res: float, witness=None, error: str | None = None) -> None:
        self.samples += 1
        if math.isnan(res):
            res = math.inf
        if res > self.max_residual:
            self.max_residual = res
            if res > self.tolerance and self.witness is None:
                self.witness = witness
                self.error = error

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual if math.isfinite(self.max_residual) else "inf",
            "samples": self.samples,
            "tolerance": self.tolerance,
            "error": self.error,
            "witness": encode(self.witness) if self.witness is not None else None,
        }


@dataclass
class Report:
    title: str
    results: list[AxiomResult] = field(default_factory=list)
    seed: int | None = None
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def axiom(self, name: str, tolerance: float) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        r = AxiomResult(name, tolerance=tolerance)
        self.results.append(r)
        return r

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def extend(self, other: Report, prefix: str = "") -> None:
        for r in other.results:
            r.name = prefix + r.name
            self.results.append(r)

    def max_residual(self) -> float:
        return max((r.max_residual for r in self.results), default=0.0)

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed, "seed": self.seed,
                "info": encode(self.info), "results": [r.to_dict() for r in self.results]}

    def render_text(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"
                 + (f" (seed {self.seed})" if self.seed is not None else "")]
        for k, v in self.info.items():
            lines.append(f"  {k}: {v}")
        for r in self.results:
            mark = "ok  " if r.passed else "FAIL"
            lines.append(f"  [{mark}] {r.name}: max residual {r.max_residual:.3e} "
                         f"over {r.samples} samples (tol {r.tolerance:.1e})")
            if not r.passed and r.error:
                lines.append(f"         error: {r.error}")
        return "\n".join(lines)
