"""Truncated power series (jets) in double precision.

A :class:`TruncatedSeries` holds the Taylor coefficients ``c_0..c_N`` of a
function around ``center``.  Arithmetic is exact up to truncation order, so
derivatives obtained from a composed jet are exact derivatives of the
composed function (up to floating point roundoff).

Every operation validates its output and raises
:class:`~qgid.exceptions.NonFiniteError` instead of letting NaN or infinity
leak into a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CenterMismatch, DomainError, InvalidParameter, NearSingular, NonFiniteError

DEFAULT_ORDER = 64
DEFAULT_TOL = 1e-9
# 170! is the last factorial below the double overflow threshold; keep headroom
# for the coefficient itself.
MAX_DERIVATIVE_ORDER = 150


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"{what} produced a non-finite coefficient")
    return values


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Taylor coefficients of a function around ``center``, truncated at ``order``."""

    coeffs: np.ndarray
    center: float = 0.0

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float).reshape(-1)
        if arr.size == 0:
            raise InvalidParameter("a series needs at least one coefficient")
        _finite(arr, "series construction")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "center", float(self.center))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs.tolist()!r}, center={self.center!r})"

    # operator sugar; all the work is done by the module-level functions
    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_add(self, other)
        return self._shift_constant(float(other))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.center)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return scale(self, float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, series_recip(other))
        return scale(self, 1.0 / float(other))

    def __rtruediv__(self, other):
        return scale(series_recip(self), float(other))

    def _shift_constant(self, c: float) -> "TruncatedSeries":
        out = self.coeffs.copy()
        out[0] += c
        return TruncatedSeries(_finite(out, "constant shift"), self.center)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order < 0:
            raise InvalidParameter("order must be nonnegative")
        if order > self.order:
            raise InvalidParameter(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.center)

    def allclose(self, other: "TruncatedSeries", tol: float = DEFAULT_TOL) -> bool:
        """Hybrid comparison ``|a - b| <= tol * max(1, scale)`` coefficientwise."""
        n = min(self.order, other.order) + 1
        a, b = self.coeffs[:n], other.coeffs[:n]
        scale_ = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        return bool(np.all(np.abs(a - b) <= tol * scale_))


def constant(value: float, order: int, center: float = 0.0) -> TruncatedSeries:
    c = np.zeros(order + 1)
    c[0] = value
    return TruncatedSeries(c, center)


def unit(order: int, center: float = 0.0) -> TruncatedSeries:
    return constant(1.0, order, center)


def variable(value: float, order: int, center: float = 0.0, step: float = 1.0) -> TruncatedSeries:
    """The jet of the affine map ``h -> value + step * h``."""
    c = np.zeros(order + 1)
    c[0] = value
    if order >= 1:
        c[1] = step
    return TruncatedSeries(c, center)


def _common(s: TruncatedSeries, t: TruncatedSeries) -> int:
    if s.center != t.center:
        raise CenterMismatch(f"series centered at {s.center} and {t.center}")
    return min(s.order, t.order)


def series_add(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    n = _common(s, t)
    out = s.coeffs[: n + 1] + t.coeffs[: n + 1]
    return TruncatedSeries(_finite(out, "series_add"), s.center)


def scale(s: TruncatedSeries, c: float) -> TruncatedSeries:
    return TruncatedSeries(_finite(s.coeffs * c, "scale"), s.center)


def series_mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the smaller order."""
    n = _common(s, t)
    out = np.convolve(s.coeffs[: n + 1], t.coeffs[: n + 1])[: n + 1]
    return TruncatedSeries(_finite(out, "series_mul"), s.center)


def series_recip(s: TruncatedSeries, tol: float = DEFAULT_TOL) -> TruncatedSeries:
    """Multiplicative inverse; raises :class:`NearSingular` when ``|c_0| <= tol``."""
    c = s.coeffs
    if abs(c[0]) <= tol or c[0] == 0.0:
        raise NearSingular(f"leading coefficient {c[0]!r} is too close to zero")
    n = s.order
    out = np.zeros(n + 1)
    out[0] = 1.0 / c[0]
    for k in range(1, n + 1):
        # sum_{j=1..k} c_j out_{k-j}
        out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
    return TruncatedSeries(_finite(out, "series_recip"), s.center)


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    c = s.coeffs
    n = s.order
    out = np.zeros(n + 1)
    out[0] = math.exp(c[0]) if c[0] < 709.0 else math.inf
    if not math.isfinite(out[0]):
        raise NonFiniteError("series_exp overflow in the constant term")
    kc = np.arange(n + 1) * c
    for k in range(1, n + 1):
        out[k] = np.dot(kc[1 : k + 1], out[k - 1 :: -1][:k]) / k
    return TruncatedSeries(_finite(out, "series_exp"), s.center)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    c = s.coeffs
    if not c[0] > 0.0:
        raise DomainError(f"log needs a positive constant term, got {c[0]!r}")
    n = s.order
    out = np.zeros(n + 1)
    out[0] = math.log(c[0])
    kd = np.zeros(n + 1)
    for k in range(1, n + 1):
        # k d_k = (k c_k - sum_{j=1}^{k-1} j d_j c_{k-j}) / c_0
        acc = np.dot(kd[1:k], c[k - 1 : 0 : -1]) if k > 1 else 0.0
        kd[k] = (k * c[k] - acc) / c[0]
        out[k] = kd[k] / k
    return TruncatedSeries(_finite(out, "series_log"), s.center)


def series_real_pow(s: TruncatedSeries, alpha: float) -> TruncatedSeries:
    """``s ** alpha`` computed as ``exp(alpha * log(s))``; needs ``c_0 > 0``."""
    if not s.coeffs[0] > 0.0:
        raise DomainError(f"real power needs a positive constant term, got {s.coeffs[0]!r}")
    if alpha == 0.0:
        return unit(s.order, s.center)
    return series_exp(scale(series_log(s), alpha))


def series_deriv(s: TruncatedSeries) -> TruncatedSeries:
    """Jet of the derivative; loses one order."""
    if s.order == 0:
        raise InvalidParameter("cannot differentiate an order-0 series")
    k = np.arange(1, s.order + 1)
    return TruncatedSeries(k * s.coeffs[1:], s.center)


def derivatives_from_series(s: TruncatedSeries) -> np.ndarray:
    """``n! * c_n`` for ``n = 0..N`` (the derivatives at the center)."""
    if s.order > MAX_DERIVATIVE_ORDER:
        raise InvalidParameter(
            f"derivative extraction is capped at order {MAX_DERIVATIVE_ORDER}, got {s.order}"
        )
    fact = np.array([math.factorial(k) for k in range(s.order + 1)], dtype=float)
    return _finite(fact * s.coeffs, "derivatives_from_series")


def from_values(values: Iterable[float] | Sequence[float], center: float = 0.0) -> TruncatedSeries:
    return TruncatedSeries(np.asarray(list(values), dtype=float), center)
