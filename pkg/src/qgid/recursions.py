"""Coefficient recursions on nonnegative-integer distributions.

Three forward substitutions are provided:

* :func:`a_from_p` solves ``p_{n+1} = sum_{k<=n} p_k a_{n-k}``; a pmf with
  ``0 < p_0 < 1`` is geometrically infinitely divisible iff every ``a_n >= 0``.
* :func:`r_from_p` solves ``(n+1) p_{n+1} = sum_{k<=n} r_k p_{n-k}``; the
  ``r_n`` (the discrete Levy measure) are the coefficients of ``P'/P`` and are
  nonnegative iff the pmf is infinitely divisible.
* :func:`b_from_r` solves ``(n+1) b_{n+1} = r_n - sum_{1<=k<=n} b_k r_{n-k}``
  with ``b_0 = 0``.

For any pmf with ``0 < p_0 < 1`` the identity ``a_n = b_{n+1}`` holds, both
being ``(1 - p_0) q_{n+1}`` for the pgf ``Q`` of the canonical geometric
representation.  The test-suite uses this as a cross-check.

The recursions divide by ``p_0`` at every step.  The tolerance scale of each
index is the running maximum of the magnitudes entering that step (divided
by ``p_0``), so roundoff amplification shows up as a growing scale rather
than as a spurious sign.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import DegenerateP0, InvalidParameter, NonFiniteError, PreconditionNotMet
from .lst import Pmf
from .reports import SequenceReport, Verdict
from .series import DEFAULT_TOL

# p_0 below this is treated as zero; anything above is a usable normal double
MIN_P0 = 1e-280


def _probs(p) -> np.ndarray:
    arr = p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float).reshape(-1)
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise NonFiniteError("masses must be finite")
    return arr


def _check_p0(p0: float):
    if not p0 > MIN_P0:
        raise DegenerateP0(f"p_0 = {p0!r} is too close to zero for the forward recursion")


def _finish(values, scale, tol, **extra) -> SequenceReport:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("recursion produced a non-finite value")
    scale = np.maximum.accumulate(np.maximum(scale, 1.0)) if len(scale) else scale
    return SequenceReport.build(values, tol=tol, scale=scale, **extra)


def a_from_p(p: Pmf | Sequence[float], tol: float = DEFAULT_TOL) -> SequenceReport:
    """``a_0..a_{N-1}`` for a pmf of order ``N``, with the nonnegativity verdict."""
    probs = _probs(p)
    p0 = float(probs[0])
    _check_p0(p0)
    n_out = probs.size - 1
    if p0 >= 1.0 - tol:
        # point mass at zero: every a_n vanishes
        return _finish(np.zeros(n_out), np.ones(n_out), tol, boundary=True)
    a = np.zeros(n_out)
    scale = np.zeros(n_out)
    for n in range(n_out):
        terms = probs[1 : n + 1] * a[n - 1 :: -1][:n] if n else np.zeros(0)
        a[n] = (probs[n + 1] - terms.sum()) / p0
        big = max(abs(probs[n + 1]), float(np.max(np.abs(terms))) if n else 0.0)
        scale[n] = max(abs(a[n]), big / p0)
    return _finish(a, scale, tol, boundary=False)


def r_from_p(p: Pmf | Sequence[float], tol: float = DEFAULT_TOL) -> SequenceReport:
    """Levy sequence ``r_0..r_{N-1}`` of a pmf of order ``N``."""
    probs = _probs(p)
    p0 = float(probs[0])
    _check_p0(p0)
    n_out = probs.size - 1
    r = np.zeros(n_out)
    scale = np.zeros(n_out)
    for n in range(n_out):
        # sum_{k=0}^{n-1} r_k p_{n-k}
        terms = r[:n] * probs[n:0:-1] if n else np.zeros(0)
        lead = (n + 1) * probs[n + 1]
        r[n] = (lead - terms.sum()) / p0
        big = max(abs(lead), float(np.max(np.abs(terms))) if n else 0.0)
        scale[n] = max(abs(r[n]), big / p0)
    return _finish(r, scale, tol)


def b_from_r(r: SequenceReport | Sequence[float], tol: float = DEFAULT_TOL) -> SequenceReport:
    """``b_0..b_M`` (``b_0 = 0``) from ``r_0..r_{M-1}``.

    ``extra['partial_sum']`` is the observed partial sum of the ``b_n`` and
    ``extra['sum_below_one']`` whether it stays below one.  Only a partial sum
    is observable at finite order, so nothing is claimed about the limit.
    """
    rv = r.values if isinstance(r, SequenceReport) else np.asarray(r, dtype=float).reshape(-1)
    if not np.all(np.isfinite(rv)):
        raise NonFiniteError("Levy sequence must be finite")
    m = rv.size
    b = np.zeros(m + 1)
    scale = np.ones(m + 1)
    for n in range(m):
        # sum_{k=1}^{n} b_k r_{n-k}
        terms = b[1 : n + 1] * rv[n - 1 :: -1][:n] if n else np.zeros(0)
        b[n + 1] = (rv[n] - terms.sum()) / (n + 1)
        big = max(abs(rv[n]), float(np.max(np.abs(terms))) if n else 0.0)
        scale[n + 1] = max(abs(b[n + 1]), big / (n + 1))
    total = float(b.sum())
    return _finish(b, scale, tol, partial_sum=total, sum_below_one=total < 1.0)


def pmf_from_a(a: Sequence[float], p0: float) -> np.ndarray:
    """Forward application of the ``a``-recursion: rebuild ``p_0..p_{len(a)}``."""
    a = np.asarray(a, dtype=float)
    p = np.zeros(a.size + 1)
    p[0] = p0
    for n in range(a.size):
        p[n + 1] = np.dot(p[: n + 1], a[n::-1])
    return p


def pmf_from_r(r: Sequence[float], p0: float = 1.0) -> np.ndarray:
    """Forward application of the Levy recursion: rebuild ``p_0..p_{len(r)}``.

    With the default ``p0 = 1`` the result is the pmf up to normalization,
    which is all that shape properties such as log-convexity depend on.
    """
    r = np.asarray(r, dtype=float)
    p = np.zeros(r.size + 1)
    p[0] = p0
    for n in range(r.size):
        p[n + 1] = np.dot(r[: n + 1], p[n::-1]) / (n + 1)
    return p


def _shape_check(s, tol: float, concave: bool) -> Verdict:
    s = np.asarray(s, dtype=float).reshape(-1)
    if not np.all(np.isfinite(s)):
        raise NonFiniteError("sequence must be finite")
    top = float(np.max(np.abs(s))) if s.size else 0.0
    floor = tol * max(1.0, top)
    if np.any(s < -floor):
        n = int(np.nonzero(s < -floor)[0][0])
        raise InvalidParameter(f"log-convexity needs nonnegative terms; s_{n} = {s[n]!r}")
    s = np.clip(s, 0.0, None)
    method = "log_concave" if concave else "log_convex"
    for n in range(1, s.size - 1):
        outer = s[n - 1] * s[n + 1]
        inner = s[n] * s[n]
        gap = inner - outer if concave else outer - inner
        # relative, since the sequences typically decay geometrically or faster;
        # products below (tol*top)**2 are roundoff and cannot carry a sign
        if gap < -tol * max(outer, inner) - (tol * top) ** 2:
            return Verdict(False, (n, float(gap)), s.size - 1, tol, method)
    return Verdict(True, None, max(s.size - 1, 0), tol, method)


def logconvexity_check(s: Sequence[float], tol: float = DEFAULT_TOL) -> Verdict:
    """``s_{n-1} s_{n+1} >= s_n**2`` for every interior ``n``; ties hold."""
    return _shape_check(s, tol, concave=False)


def logconcavity_check(s: Sequence[float], tol: float = DEFAULT_TOL) -> Verdict:
    """``s_{n-1} s_{n+1} <= s_n**2`` for every interior ``n``; ties hold."""
    return _shape_check(s, tol, concave=True)


def hansen_criterion(r: SequenceReport | Sequence[float], mode: str = "convex",
                     tol: float = DEFAULT_TOL) -> Verdict:
    """Geometric infinite divisibility read off ``r_0**2`` versus ``r_1``.

    Only meaningful for a nonnegative Levy sequence that is log-convex
    (``mode="convex"``, holds iff ``r_0**2 <= r_1``) or log-concave
    (``mode="concave"``, holds iff ``r_0**2 >= r_1``).  Outside those
    hypotheses :class:`PreconditionNotMet` is raised rather than guessing.
    """
    if mode not in ("convex", "concave"):
        raise InvalidParameter(f"mode must be 'convex' or 'concave', got {mode!r}")
    if isinstance(r, SequenceReport):
        values, nonneg = r.values, r.nonneg
    else:
        values = np.asarray(r, dtype=float).reshape(-1)
        nonneg = bool(np.all(values >= -tol * max(1.0, float(np.max(np.abs(values))))))
    if values.size < 2:
        raise PreconditionNotMet("need at least r_0 and r_1")
    if not nonneg:
        raise PreconditionNotMet("Levy sequence has negative terms (law is not infinitely divisible)")
    shape = logconvexity_check(values, tol) if mode == "convex" else logconcavity_check(values, tol)
    if not shape.holds:
        raise PreconditionNotMet(f"Levy sequence is not log-{mode} (index {shape.first_violation[0]})")
    r0sq, r1 = float(values[0]) ** 2, float(values[1])
    gap = r1 - r0sq if mode == "convex" else r0sq - r1
    method = f"hansen_{mode}"
    if gap < -tol * max(r0sq, abs(r1)):
        return Verdict(False, (1, gap), values.size - 1, tol, method, details={"r0_squared": r0sq, "r1": r1})
    return Verdict(True, None, values.size - 1, tol, method, details={"r0_squared": r0sq, "r1": r1})
