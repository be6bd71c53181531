"""Result containers shared by the recursions and the membership tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .series import DEFAULT_TOL

Violation = Optional[tuple[int, float]]


def running_scale(*sequences: Sequence[float]) -> np.ndarray:
    """Running maximum of ``|x|`` across aligned sequences, floored at 1."""
    n = min(len(s) for s in sequences)
    mags = np.max(np.abs(np.vstack([np.asarray(s, dtype=float)[:n] for s in sequences])), axis=0)
    return np.maximum.accumulate(np.maximum(mags, 1.0)) if n else np.zeros(0)


def first_negative(values: Sequence[float], tol: float, scales: Sequence[float] | None = None,
                   start: int = 0) -> Violation:
    """First index ``n >= start`` with ``values[n] < -tol * scales[n]``."""
    values = np.asarray(values, dtype=float)
    if scales is None:
        scales = running_scale(values)
    for n in range(start, values.size):
        if values[n] < -tol * scales[n]:
            return n, float(values[n])
    return None


@dataclass
class SequenceReport:
    """A computed coefficient sequence together with its nonnegativity verdict.

    ``scale`` is the per-index tolerance scale actually used: a value passes
    when ``value >= -tolerance * scale[n]``.
    """

    values: np.ndarray
    nonneg: bool
    first_violation: Violation
    order: int
    tolerance: float = DEFAULT_TOL
    scale: np.ndarray | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, values, tol=DEFAULT_TOL, scale=None, start=0, **extra) -> "SequenceReport":
        values = np.asarray(values, dtype=float)
        if scale is None:
            scale = running_scale(values)
        viol = first_negative(values, tol, scale, start=start)
        return cls(values=values, nonneg=viol is None, first_violation=viol,
                   order=max(values.size - 1, 0), tolerance=tol,
                   scale=np.asarray(scale, dtype=float), extra=dict(extra))

    def to_dict(self) -> dict[str, Any]:
        return {
            "nonneg": self.nonneg,
            "first_violation": _violation_dict(self.first_violation),
            "order": self.order,
            "tolerance": self.tolerance,
            "values": [float(v) for v in self.values],
            **{k: _plain(v) for k, v in self.extra.items()},
        }


@dataclass
class Verdict:
    """Outcome of a finite-order membership or shape test."""

    holds: bool
    first_violation: Violation
    order: int
    tolerance: float
    method: str
    lam: float | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.holds != (self.first_violation is None):
            raise ValueError("a verdict holds exactly when it records no violation")

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        out = {
            "holds": self.holds,
            "first_violation": _violation_dict(self.first_violation),
            "order": self.order,
            "tolerance": self.tolerance,
            "lambda": self.lam,
            "method": self.method,
        }
        out.update({k: _plain(v) for k, v in self.details.items()})
        return out


def _violation_dict(v: Violation):
    if v is None:
        return None
    return {"index": int(v[0]), "value": float(v[1])}


def _plain(v):
    if isinstance(v, np.ndarray):
        return [float(x) for x in v]
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (SequenceReport, Verdict)):
        return v.to_dict()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v
