"""Grid test for "Poisson mixture with a g.i.d. mixing law".

A pgf ``P`` is such a mixture iff ``0 < P(z) <= 1`` for every ``z <= 1`` and
``H = 1/P - 1`` has ``H^(n)(z) <= 0`` for all ``n >= 1`` and ``z < 1``.  Only a
finite grid and finitely many derivatives can be checked, so a failure is
conclusive while a pass is evidence.

The pgf arrives as a truncated coefficient list.  At each grid point the
function is evaluated one of two ways:

``polynomial``  the truncated polynomial, when an extrapolated bound on the
                discarded tail (and its derivatives) is below tolerance;
``rational``    a low-degree Pade approximant that reproduces *every*
                supplied coefficient, giving the analytic continuation
                beyond the radius of convergence for rational pgfs.

Points where neither is trustworthy are reported as ``inconclusive`` and do
not enter the verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.interpolate import pade

from . import series as ts
from .exceptions import InvalidParameter, NearSingular
from .reports import Verdict
from .semigroup import Geometric, SemigroupFamily
from .series import DEFAULT_TOL

DEFAULT_Z_GRID = (-10.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 0.9)
DEFAULT_DERIVATIVES = 6
MAX_RATIONAL_DEGREE = 4
# a Pade fit must reproduce every coefficient to this relative accuracy
RATIONAL_MATCH = 1e-12


@dataclass
class PointResult:
    z: float
    method: str  # polynomial | rational | inconclusive
    tail_bound: float
    holds: bool | None
    condition: str | None = None  # "i" (range of P) or "ii" (sign of H^(n))
    P: float | None = None
    H_derivatives: list[float] = field(default_factory=list)
    first_violation: tuple[int, float] | None = None

    def to_dict(self):
        fv = self.first_violation
        return {
            "z": self.z,
            "method": self.method,
            "tail_bound": self.tail_bound,
            "holds": self.holds,
            "condition": self.condition,
            "P": self.P,
            "H_derivatives": list(self.H_derivatives),
            "first_violation": None if fv is None else {"index": fv[0], "value": fv[1]},
        }


def _taylor_at(coeffs: np.ndarray, z: float, order: int) -> np.ndarray:
    """Taylor coefficients of the polynomial ``coeffs`` around ``z``."""
    out = np.zeros(order + 1)
    c = np.asarray(coeffs, dtype=float)
    for k in range(order + 1):
        if c.size == 0:
            break
        out[k] = npoly.polyval(z, c) / math.factorial(k)
        c = npoly.polyder(c)
    return out


def tail_bound(coeffs: np.ndarray, z: float, order: int) -> float:
    """Extrapolated bound on the truncation error of ``k! d_k`` for ``k <= order``.

    The discarded coefficients are modelled as ``M * rho**n`` with ``rho`` from a
    root test on the last quarter of the supplied coefficients.
    """
    c = np.abs(np.asarray(coeffs, dtype=float))
    N = c.size - 1
    if z == 0.0 or N < 4:
        return 0.0 if z == 0.0 else math.inf
    idx = np.arange(max(1, N - N // 4), N + 1)
    tail = c[idx]
    if not np.any(tail > 0):
        # finitely supported pgf
        return 0.0
    nz = idx[tail > 0]
    rho = float(np.max(c[nz] ** (1.0 / nz)))
    log_m = float(np.max(np.log(c[nz]) - nz * math.log(rho)))
    az = abs(z)
    if rho * az >= 1.0:
        return math.inf
    worst = 0.0
    for k in range(order + 1):
        total = 0.0
        for n in range(N + 1, N + 20001):
            lt = (log_m + n * math.log(rho) + (n - k) * math.log(az)
                  + math.lgamma(n + 1) - math.lgamma(n - k + 1))
            term = math.exp(lt)
            total += term
            if n > N + 10 and term < 1e-30 * max(total, 1e-300):
                break
        worst = max(worst, total)
    return worst


def rational_fit(coeffs: np.ndarray, max_degree: int = MAX_RATIONAL_DEGREE):
    """Smallest Pade approximant ``num/den`` matching every coefficient, or ``None``.

    Returns ascending coefficient arrays ``(num, den)`` normalized to ``den[0] = 1``.
    """
    c = np.asarray(coeffs, dtype=float)
    N = c.size - 1
    top = float(np.max(np.abs(c)))
    for total in range(1, 2 * max_degree + 1):
        for m in range(1, min(total, max_degree) + 1):
            n = total - m
            if n > max_degree or n + m + 1 > N // 2:
                continue
            try:
                p, q = pade(c[: n + m + 1], m, n)
            except (np.linalg.LinAlgError, ValueError):
                continue
            num, den = p.coeffs[::-1], q.coeffs[::-1]
            if den.size == 0 or den[0] == 0.0:
                continue
            num, den = num / den[0], den / den[0]
            try:
                approx = ts.TruncatedSeries(np.pad(num, (0, N + 1))[: N + 1]) * ts.series_recip(
                    ts.TruncatedSeries(np.pad(den, (0, N + 1))[: N + 1]))
            except Exception:
                continue
            if np.max(np.abs(approx.coeffs - c)) <= RATIONAL_MATCH * max(top, 1e-300):
                return num, den
    return None


def _check_point(jet: np.ndarray, z: float, m: int, tol: float, method: str, bound: float,
                 family: SemigroupFamily) -> PointResult:
    P = float(jet[0])
    if not (P > 0.0 and P <= 1.0 + tol):
        return PointResult(z, method, bound, False, "i", P, [], (0, P))
    H = family.phi_inv_jet(ts.TruncatedSeries(jet))
    derivs = ts.derivatives_from_series(H)[1:]
    scale = np.maximum.accumulate(np.maximum(np.abs(derivs), 1.0))
    for n, (d, s) in enumerate(zip(derivs, scale), start=1):
        if d > tol * s:
            return PointResult(z, method, bound, False, "ii", P, derivs.tolist(), (n, float(d)))
    return PointResult(z, method, bound, True, None, P, derivs.tolist())


@dataclass
class PrecheckReport:
    verdict: Verdict
    points: list[PointResult]

    def to_dict(self):
        return {"verdict": self.verdict.to_dict(), "points": [p.to_dict() for p in self.points]}


def mixture_precheck(pgf_coeffs: Sequence[float], z_grid: Sequence[float] = DEFAULT_Z_GRID,
                     m: int = DEFAULT_DERIVATIVES, tol: float = DEFAULT_TOL,
                     family: SemigroupFamily | None = None) -> PrecheckReport:
    """Check the range condition and ``H^(n) <= 0`` (``1 <= n <= m``) on ``z_grid``.

    ``H = varphi^{-1}(P)`` for the semigroup ``family``: ``1/P - 1`` for the
    geometric family (the default), ``-log P`` for the classical one.

    The overall verdict fails at the first grid point (in grid order) that
    fails; its ``first_violation`` index is the derivative order (0 for the
    range condition) and ``details['z']`` names the point.
    """
    c = np.asarray(pgf_coeffs, dtype=float).reshape(-1)
    if c.size == 0 or not np.all(np.isfinite(c)):
        raise InvalidParameter("pgf coefficients must be a nonempty list of finite numbers")
    if np.any(c < -tol):
        raise InvalidParameter("pgf coefficients must be nonnegative")
    if c.sum() > 1.0 + tol:
        raise InvalidParameter(f"pgf coefficients sum to {c.sum():.12g} > 1")
    m = int(m)
    if m < 1:
        raise InvalidParameter("need at least one derivative (m >= 1)")
    family = family or Geometric()
    rational = None
    points: list[PointResult] = []
    for z in z_grid:
        z = float(z)
        if not z < 1.0:
            raise InvalidParameter(f"grid points must lie in (-inf,1), got {z!r}")
        bound = tail_bound(c, z, m)
        if bound <= tol:
            jet = _taylor_at(c, z, m)
            points.append(_check_point(jet, z, m, tol, "polynomial", bound, family))
            continue
        if rational is None:
            rational = rational_fit(c) or False
        if not rational:
            points.append(PointResult(z, "inconclusive", bound, None))
            continue
        num, den = rational
        dj = _taylor_at(den, z, m)
        if abs(dj[0]) <= tol:
            # pole of the continuation: P is not defined there
            points.append(PointResult(z, "rational", bound, False, "i", math.nan, [], (0, math.nan)))
            continue
        try:
            jet = (ts.TruncatedSeries(_taylor_at(num, z, m)) * ts.series_recip(ts.TruncatedSeries(dj))).coeffs
        except NearSingular:
            points.append(PointResult(z, "inconclusive", bound, None))
            continue
        points.append(_check_point(jet, z, m, tol, "rational", bound, family))
    failed = [p for p in points if p.holds is False]
    evaluated = [p.z for p in points if p.holds is not None]
    if failed:
        f = failed[0]
        verdict = Verdict(False, f.first_violation, m, tol, "mixture_precheck",
                          details={"z": f.z, "condition": f.condition, "evaluated": evaluated,
                                   "semigroup": family.kind})
    else:
        verdict = Verdict(True, None, m, tol, "mixture_precheck",
                          details={"evaluated": evaluated, "semigroup": family.kind})
    return PrecheckReport(verdict, points)
