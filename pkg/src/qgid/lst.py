"""Catalog of Laplace-Stieltjes transforms and their Poisson mixtures.

Each family knows how to build the jet of ``h -> phi(center + step * h)``.
With ``step = 1`` that is the ordinary Taylor expansion at ``center``; with
``center = lam`` and ``step = -lam`` it is the expansion of the mixture pgf
``phi(lam * (1 - z))`` at ``z = 0``, whose coefficients are the mixture
masses.  Working directly in the rescaled variable keeps the coefficients
of order one and avoids forming ``lam**n * phi^(n)(lam) / n!`` explicitly.

Composite descriptions (:class:`Shift`, :class:`Convolution`,
:class:`ScaleArg`) are evaluated on jets, never flattened to a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from . import series as ts
from .exceptions import InvalidLST, InvalidParameter, UnknownFamily
from .series import DEFAULT_ORDER, DEFAULT_TOL, TruncatedSeries

# masses below -NEG_MASS_TOL * max|p| mean the description is not an LST
NEG_MASS_TOL = 1e-7


def _real(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
        raise InvalidParameter(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(f"{name} must be finite, got {value!r}")
    return value


def _power_jet(center: float, step: float, alpha: float, order: int) -> TruncatedSeries:
    # (center + step*h)**alpha = center**alpha * (1 + (step/center) h)**alpha
    base = ts.variable(1.0, order, step=step / center)
    return ts.scale(ts.series_real_pow(base, alpha), center ** alpha)


class LSTSpec:
    """Base class for transform descriptions.  Instances are immutable."""

    family: str = ""

    def jet(self, center: float, step: float, order: int) -> TruncatedSeries:
        """Coefficients of ``h -> phi(center + step * h)`` up to ``order``."""
        if not center > 0:
            raise InvalidParameter(f"expansion point must be positive, got {center!r}")
        return self._jet(float(center), float(step), int(order))

    def _jet(self, center: float, step: float, order: int) -> TruncatedSeries:
        raise NotImplementedError

    def value(self, tau: float) -> float:
        """Scalar transform value at ``tau >= 0``."""
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        return {}

    def to_json(self) -> dict[str, Any]:
        return {"family": self.family, "params": self.params()}


@dataclass(frozen=True)
class Degenerate(LSTSpec):
    """Point mass at ``x0``: ``exp(-x0 * tau)``."""

    x0: float = 0.0
    family = "degenerate"

    def __post_init__(self):
        x0 = _real("x0", self.x0)
        if x0 < 0:
            raise InvalidParameter(f"x0 out of range [0,inf): {x0!r}")
        object.__setattr__(self, "x0", x0)

    def _jet(self, center, step, order):
        return ts.series_exp(ts.variable(-self.x0 * center, order, step=-self.x0 * step))

    def value(self, tau):
        return math.exp(-self.x0 * tau)

    def params(self):
        return {"x0": self.x0}


@dataclass(frozen=True)
class Exponential(LSTSpec):
    """Exponential law with mean ``theta``: ``1 / (1 + theta * tau)``."""

    theta: float = 1.0
    family = "exponential"

    def __post_init__(self):
        theta = _real("theta", self.theta)
        if theta <= 0:
            raise InvalidParameter(f"theta out of range (0,inf): {theta!r}")
        object.__setattr__(self, "theta", theta)

    def _jet(self, center, step, order):
        return ts.series_recip(ts.variable(1.0 + self.theta * center, order, step=self.theta * step))

    def value(self, tau):
        return 1.0 / (1.0 + self.theta * tau)

    def params(self):
        return {"theta": self.theta}


@dataclass(frozen=True)
class MittagLeffler(LSTSpec):
    """Continuous Mittag-Leffler law: ``1 / (1 + a * tau**alpha)``."""

    alpha: float = 1.0
    a: float = 1.0
    family = "mittag_leffler"

    def __post_init__(self):
        alpha = _real("alpha", self.alpha)
        a = _real("a", self.a)
        if not 0 < alpha <= 1:
            raise InvalidParameter(f"alpha out of range (0,1]: {alpha!r}")
        if a <= 0:
            raise InvalidParameter(f"a out of range (0,inf): {a!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "a", a)

    def _jet(self, center, step, order):
        return ts.series_recip(1.0 + self.a * _power_jet(center, step, self.alpha, order))

    def value(self, tau):
        return 1.0 / (1.0 + self.a * tau ** self.alpha)

    def params(self):
        return {"alpha": self.alpha, "a": self.a}


@dataclass(frozen=True)
class MLSquared(LSTSpec):
    """Two-fold convolution of Mittag-Leffler: ``(1 + tau**alpha)**-2``."""

    alpha: float = 0.75
    family = "ml_squared"

    def __post_init__(self):
        alpha = _real("alpha", self.alpha)
        if not 0.5 < alpha <= 1:
            raise InvalidParameter(f"alpha out of range (1/2,1]: {alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    def _jet(self, center, step, order):
        base = 1.0 + _power_jet(center, step, self.alpha, order)
        return ts.series_recip(base * base)

    def value(self, tau):
        return (1.0 + tau ** self.alpha) ** -2

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class LogMixture(LSTSpec):
    """``1 / (1 + log(1 + tau))``."""

    family = "log_mixture"

    def _jet(self, center, step, order):
        return ts.series_recip(1.0 + ts.series_log(ts.variable(1.0 + center, order, step=step)))

    def value(self, tau):
        return 1.0 / (1.0 + math.log1p(tau))


@dataclass(frozen=True)
class Shift(LSTSpec):
    """Translation by ``x0 > 0``: ``exp(-x0 * tau) * inner(tau)``."""

    x0: float
    inner: LSTSpec
    family = "shift"

    def __post_init__(self):
        x0 = _real("x0", self.x0)
        if x0 <= 0:
            raise InvalidParameter(f"x0 out of range (0,inf): {x0!r}")
        if not isinstance(self.inner, LSTSpec):
            raise InvalidParameter("shift needs an inner LST description")
        object.__setattr__(self, "x0", x0)

    def _jet(self, center, step, order):
        factor = ts.series_exp(ts.variable(-self.x0 * center, order, step=-self.x0 * step))
        return factor * self.inner._jet(center, step, order)

    def value(self, tau):
        return math.exp(-self.x0 * tau) * self.inner.value(tau)

    def params(self):
        return {"x0": self.x0}

    def to_json(self):
        return {"family": self.family, "params": self.params(), "inner": self.inner.to_json()}


@dataclass(frozen=True)
class Convolution(LSTSpec):
    """Sum of independent variables: product of the parts' transforms."""

    parts: tuple[LSTSpec, ...] = field(default_factory=tuple)
    family = "convolution"

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise InvalidParameter("convolution needs at least one part")
        if not all(isinstance(p, LSTSpec) for p in parts):
            raise InvalidParameter("convolution parts must be LST descriptions")
        object.__setattr__(self, "parts", parts)

    def _jet(self, center, step, order):
        out = self.parts[0]._jet(center, step, order)
        for part in self.parts[1:]:
            out = out * part._jet(center, step, order)
        return out

    def value(self, tau):
        return math.prod(p.value(tau) for p in self.parts)

    def to_json(self):
        return {"family": self.family, "params": {}, "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class ScaleArg(LSTSpec):
    """Law of ``c * X``: ``inner(c * tau)``."""

    c: float
    inner: LSTSpec
    family = "scale_arg"

    def __post_init__(self):
        c = _real("c", self.c)
        if c <= 0:
            raise InvalidParameter(f"c out of range (0,inf): {c!r}")
        if not isinstance(self.inner, LSTSpec):
            raise InvalidParameter("scale_arg needs an inner LST description")
        object.__setattr__(self, "c", c)

    def _jet(self, center, step, order):
        return self.inner._jet(self.c * center, self.c * step, order)

    def value(self, tau):
        return self.inner.value(self.c * tau)

    def params(self):
        return {"c": self.c}

    def to_json(self):
        return {"family": self.family, "params": self.params(), "inner": self.inner.to_json()}


_FAMILIES = {
    "degenerate": Degenerate,
    "exponential": Exponential,
    "mittagleffler": MittagLeffler,
    "mlsquared": MLSquared,
    "logmixture": LogMixture,
    "shift": Shift,
    "convolution": Convolution,
    "scalearg": ScaleArg,
}


def _family_key(name: str) -> str:
    return name.replace("_", "").replace("-", "").lower()


def from_json(obj: Mapping[str, Any]) -> LSTSpec:
    """Decode ``{"family": ..., "params": {...}, "inner"/"parts": ...}``."""
    if not isinstance(obj, Mapping) or "family" not in obj:
        raise InvalidParameter("an LST description must be an object with a 'family' key")
    name = obj["family"]
    if not isinstance(name, str) or _family_key(name) not in _FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}")
    cls = _FAMILIES[_family_key(name)]
    params = dict(obj.get("params") or {})
    if cls in (Shift, ScaleArg):
        if "inner" not in obj:
            raise InvalidParameter(f"{cls.family} needs an 'inner' description")
        params["inner"] = from_json(obj["inner"])
    elif cls is Convolution:
        parts = obj.get("parts")
        if not isinstance(parts, list):
            raise InvalidParameter("convolution needs a 'parts' list")
        params["parts"] = tuple(from_json(p) for p in parts)
    try:
        return cls(**params)
    except TypeError as exc:
        raise InvalidParameter(f"bad parameters for {cls.family}: {exc}") from None


def lst_jet(spec: LSTSpec, tau0: float, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Taylor coefficients of the transform at ``tau0 > 0``."""
    out = spec.jet(tau0, 1.0, order)
    return TruncatedSeries(out.coeffs, center=tau0)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Truncated mass function ``p_0..p_N`` of a ``lam``-Poisson mixture."""

    probs: np.ndarray
    lam: float | None = None

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float).reshape(-1)
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise InvalidParameter("a pmf needs finite masses")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def order(self) -> int:
        return self.probs.size - 1

    @property
    def p0(self) -> float:
        return float(self.probs[0])

    def __len__(self):
        return self.probs.size

    def __getitem__(self, n):
        return self.probs[n]

    def series(self) -> TruncatedSeries:
        return TruncatedSeries(self.probs, 0.0)


def poisson_mixture_pmf(spec: LSTSpec, lam: float, order: int = DEFAULT_ORDER,
                        tol: float = DEFAULT_TOL) -> Pmf:
    """Masses of ``N_lam(T)``: Taylor coefficients of ``phi(lam * (1 - z))``."""
    lam = _real("lambda", lam)
    if lam <= 0:
        raise InvalidParameter(f"lambda out of range (0,inf): {lam!r}")
    probs = spec.jet(lam, -lam, order).coeffs
    top = float(np.max(np.abs(probs)))
    bad = np.nonzero(probs < -NEG_MASS_TOL * top)[0]
    if bad.size:
        n = int(bad[0])
        raise InvalidLST(f"mass p_{n} = {probs[n]:.3e} is negative: not a valid LST")
    if probs.sum() > 1.0 + tol:
        raise InvalidLST(f"masses sum to {probs.sum():.12g} > 1: not a valid LST")
    return Pmf(probs, lam)


def sanity_check(spec: LSTSpec, grid=None, tol: float = DEFAULT_TOL) -> bool:
    """Necessary-condition screen: ``phi(0) = 1`` and ``phi`` nonincreasing on a grid."""
    if grid is None:
        grid = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 81)])
    vals = np.array([spec.value(float(t)) for t in grid])
    return bool(abs(vals[0] - 1.0) <= tol and np.all(np.diff(vals) <= tol))
