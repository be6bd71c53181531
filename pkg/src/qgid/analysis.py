"""Finite-order membership tests for lambda-quasi-geometric infinite divisibility.

A law with LST ``phi`` is lambda-q.g.i.d. when its ``lambda``-Poisson mixture,
with pgf ``P(z) = phi(lambda (1 - z))``, is geometrically infinitely
divisible.  Writing ``P = 1 / (1 + c (1 - Q))`` with ``c = 1/phi(lambda) - 1``
this happens iff ``Q`` has nonnegative coefficients.  The same condition reads
``a_n >= 0`` for the forward recursion of :func:`qgid.recursions.a_from_p`,
where ``a_n = (1 - p_0) q_{n+1}``.  Verdict indices always use the ``a``
numbering, so index ``n`` corresponds to the sign of ``(-1)^n K^(n)(lambda)``
with ``K = -phi'/phi**2``.

Every verdict is "up to order N at tolerance tol": nonnegativity of infinitely
many coefficients cannot be decided numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import series as ts
from .exceptions import BracketError, DegenerateAtZero, DegenerateP0, InvalidParameter
from .lst import LSTSpec, Pmf, poisson_mixture_pmf
from .recursions import MIN_P0, a_from_p
from .reports import SequenceReport, Verdict, running_scale
from .semigroup import Geometric, SemigroupFamily
from .series import DEFAULT_ORDER, DEFAULT_TOL

METHODS = ("q_series", "a_recursion")
# upper end of the automatic bracket expansion in threshold_search
LAMBDA_CAP = 1e6


def _positive(name, x):
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise InvalidParameter(f"{name} out of range (0,inf): {x!r}")
    return x


def _mixture(spec: LSTSpec, lam: float, order: int, tol: float) -> Pmf:
    pmf = poisson_mixture_pmf(spec, _positive("lambda", lam), order, tol)
    if pmf.p0 >= 1.0 - tol:
        raise DegenerateAtZero(f"phi({lam}) = {pmf.p0!r} is 1 to tolerance: the mixing law is a point mass at 0")
    if not pmf.p0 > MIN_P0:
        raise DegenerateP0(f"phi({lam}) = {pmf.p0!r} underflows")
    return pmf


def q_series(spec: LSTSpec, lam: float, order: int = DEFAULT_ORDER,
             tol: float = DEFAULT_TOL) -> tuple[float, SequenceReport]:
    """``c_lambda`` and the coefficients ``q_0..q_N`` of ``Q_lambda``.

    ``Q = 1 + 1/c - 1/(c P)``.  ``1/P`` is formed as ``(1/p_0) / (P/p_0)`` so
    the reciprocal always has a unit constant term, however small ``p_0`` is.
    The report is nonnegative only if every ``q_n >= 0`` for ``n >= 1`` and
    ``q_0`` vanishes to tolerance (``extra['q0_ok']``).
    """
    pmf = _mixture(spec, lam, order, tol)
    p0 = pmf.p0
    c = 1.0 / p0 - 1.0
    u = ts.series_recip(ts.scale(pmf.series(), 1.0 / p0)).coeffs
    q = -u / (1.0 - p0)
    q[0] = 1.0 + 1.0 / c - u[0] / (c * p0)
    scale = running_scale(q)
    q0_ok = abs(q[0]) <= tol * scale[0]
    report = SequenceReport.build(q, tol=tol, scale=scale, start=1, c_lambda=c, q0=float(q[0]), q0_ok=q0_ok)
    if not q0_ok:
        report.nonneg = False
        report.first_violation = (0, float(q[0]))
    return c, report


def qgid_test(spec: LSTSpec, lam: float, order: int = DEFAULT_ORDER, method: str = "q_series",
              tol: float = DEFAULT_TOL) -> Verdict:
    """Finite-order lambda-q.g.i.d. verdict by either characterization."""
    if method == "q_series":
        c, rep = q_series(spec, lam, order, tol)
        viol = rep.first_violation
        if viol is not None:
            viol = (viol[0] - 1, viol[1])
        return Verdict(rep.nonneg, viol, order, tol, method, lam=float(lam),
                       details={"c_lambda": c, "q0": rep.extra["q0"]})
    if method == "a_recursion":
        pmf = _mixture(spec, lam, order, tol)
        rep = a_from_p(pmf, tol)
        return Verdict(rep.nonneg, rep.first_violation, order, tol, method, lam=float(lam),
                       details={"c_lambda": 1.0 / pmf.p0 - 1.0})
    raise InvalidParameter(f"method must be one of {METHODS}, got {method!r}")


@dataclass
class GridReport:
    """Per-lambda verdicts over an increasing grid."""

    lambdas: list[float]
    verdicts: list[Verdict]
    all_hold: bool
    largest_passing: float | None
    monotone: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "lambdas": list(self.lambdas),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "all_hold": self.all_hold,
            "largest_passing": self.largest_passing,
            "monotone": self.monotone,
        }


def gid_grid_test(spec: LSTSpec, lam_grid: Sequence[float], order: int = DEFAULT_ORDER,
                  method: str = "q_series", tol: float = DEFAULT_TOL) -> GridReport:
    """Membership on a finite increasing grid, a desk-scale proxy for g.i.d.

    ``monotone`` records whether the verdicts are downward closed (a pass at
    some lambda implies a pass at every smaller grid point), as membership
    must be.
    """
    grid = [_positive("lambda", x) for x in lam_grid]
    if not grid:
        raise InvalidParameter("lambda grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameter("lambda grid must be strictly increasing")
    verdicts = [qgid_test(spec, lam, order, method, tol) for lam in grid]
    holds = [v.holds for v in verdicts]
    passing = [lam for lam, h in zip(grid, holds) if h]
    # downward closed <=> no pass after a failure
    monotone = all(not (h_later and not h_earlier)
                   for i, h_earlier in enumerate(holds) for h_later in holds[i + 1:])
    return GridReport(grid, verdicts, all(holds), max(passing) if passing else None, monotone)


def threshold_search(spec: LSTSpec, order: int = DEFAULT_ORDER, lam_lo: float | None = None,
                     lam_hi: float | None = None, iters: int = 60, method: str = "q_series",
                     tol: float = DEFAULT_TOL, cap: float = LAMBDA_CAP) -> float:
    """Bisect for the largest lambda at which the law is lambda-q.g.i.d.

    Membership is downward closed in lambda, so the predicate is monotone and
    bisection is well defined.  Without ``lam_hi`` the bracket is grown by
    factors of 4 from ``max(1, 2*lam_lo)``; if no failure appears below
    ``cap`` the law passes everywhere tested and ``math.inf`` is returned.
    The estimate returned is the failing end of the final bracket, so ties at
    the tolerance boundary push it upward.
    """
    lo = 1e-6 if lam_lo is None else _positive("lambda_lo", lam_lo)

    def holds(lam):
        return qgid_test(spec, lam, order, method, tol).holds

    if not holds(lo):
        raise BracketError(f"membership already fails at the lower end lambda={lo!r}")
    if lam_hi is None:
        hi = max(1.0, 2.0 * lo)
        while holds(hi):
            lo = hi
            if hi >= cap:
                return math.inf
            hi = min(4.0 * hi, cap)
    else:
        hi = _positive("lambda_hi", lam_hi)
        if hi <= lo:
            raise BracketError("lambda_hi must exceed lambda_lo")
        if holds(hi):
            raise BracketError(f"membership still holds at the upper end lambda={hi!r}")
    for _ in range(int(iters)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return hi


def _split_report(G: ts.TruncatedSeries, tol: float, **extra) -> SequenceReport:
    rep = SequenceReport.build(G.coeffs, tol=tol, **extra)
    total = float(G.coeffs.sum())
    sum_ok = total <= 1.0 + tol
    rep.extra.update(partial_sum=total, sum_ok=sum_ok, pgf_valid=rep.nonneg and sum_ok)
    return rep


def _split_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"p out of range (0,1): {p!r}")
    return p


def split_pgf(spec: LSTSpec, lam: float, p: float, order: int = DEFAULT_ORDER,
              tol: float = DEFAULT_TOL) -> SequenceReport:
    """Coefficients of ``G(z) = P(z) / (p + q P(z))`` and whether ``G`` is a pgf.

    ``extra['pgf_valid']`` combines coefficient nonnegativity with the partial
    sum staying at most one.
    """
    p = _split_p(p)
    P = poisson_mixture_pmf(spec, _positive("lambda", lam), order, tol).series()
    G = Geometric().H_inv_jet(p, P)
    return _split_report(G, tol, p=p, lam=float(lam))


def reconstruct_check(spec: LSTSpec, lam: float, p: float, order: int = DEFAULT_ORDER,
                      tol: float = DEFAULT_TOL) -> float:
    """Max coefficient gap between ``P`` and ``p G / (1 - q G)``.

    This is an algebraic identity, so the residual is pure roundoff whether or
    not ``G`` happens to be a pgf.
    """
    p = _split_p(p)
    P = poisson_mixture_pmf(spec, _positive("lambda", lam), order, tol).series()
    G = Geometric().H_inv_jet(p, P)
    back = ts.scale(G, p) * ts.series_recip(1.0 - (1.0 - p) * G)
    return float(np.max(np.abs(back.coeffs - P.coeffs)))


def nid_k_jet(family: SemigroupFamily, spec: LSTSpec, lam: float, order: int = 32,
              tol: float = DEFAULT_TOL) -> SequenceReport:
    """Signed derivatives ``(-1)^n K^(n)(lambda)`` of ``K = phi' / varphi'(varphi^{-1}(phi))``.

    Expanding in ``h`` with ``tau = lambda - h`` turns the Taylor coefficients
    directly into ``(-1)^n K^(n)(lambda) / n!``.  For the geometric family
    ``K = -phi'/phi**2``, for the classical family ``K = -phi'/phi``.
    """
    lam = _positive("lambda", lam)
    phi = spec.jet(lam, -1.0, order + 1)
    family.check_range(float(phi[0]))
    dphi = -ts.series_deriv(phi)
    # the range check guarantees a nonzero leading term, however small
    inv = ts.series_recip(family.dphi_at_inverse_jet(phi.truncate(order)), tol=0.0)
    K = dphi * inv
    signed = ts.derivatives_from_series(K)
    # exact cancellations (a constant K, say) leave roundoff of the size of the
    # terms that cancelled, so those set the scale
    terms = np.convolve(np.abs(dphi.coeffs), np.abs(inv.coeffs))[: order + 1]
    scale = running_scale(signed, ts.derivatives_from_series(ts.TruncatedSeries(terms)))
    return SequenceReport.build(signed, tol=tol, scale=scale, semigroup=family.kind, lam=lam)


def nid_split(family: SemigroupFamily, spec: LSTSpec, lam: float, p: float,
              order: int = DEFAULT_ORDER, tol: float = DEFAULT_TOL) -> SequenceReport:
    """Coefficients of ``G = H_p^{-1}(P)`` and whether it is a pgf."""
    p = family.check_p(p)
    P = poisson_mixture_pmf(spec, _positive("lambda", lam), order, tol).series()
    G = family.H_inv_jet(p, P)
    return _split_report(G, tol, p=p, lam=float(lam), semigroup=family.kind)
