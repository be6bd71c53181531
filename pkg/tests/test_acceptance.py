"""Acceptance gate: one test per criterion, each printed as a PASS/FAIL line.

Tolerances are the ones the criteria state; none are loosened here.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from qgid import series as ts
from qgid.analysis import nid_k_jet, q_series, qgid_test, reconstruct_check, split_pgf, threshold_search
from qgid.lst import (Convolution, Degenerate, Exponential, LogMixture, MittagLeffler, MLSquared, ScaleArg,
                      Shift, lst_jet, poisson_mixture_pmf)
from qgid.recursions import (a_from_p, b_from_r, hansen_criterion, logconcavity_check, logconvexity_check,
                             pmf_from_r, r_from_p)
from qgid.semigroup import Classical, Geometric
from conftest import random_lambda, random_spec, record_acceptance
from test_lst import mp_value

pytestmark = pytest.mark.acceptance


def ml2_threshold(alpha):
    return ((1 - alpha) / (2 * alpha - 1)) ** (1 / alpha)


def test_criterion_1_mlsquared_thresholds():
    rows, ok = [], True
    for alpha in (0.6, 0.75, 0.9):
        t0 = time.perf_counter()
        lam = threshold_search(MLSquared(alpha), 50)
        dt = time.perf_counter() - t0
        good = abs(lam - ml2_threshold(alpha)) <= 1e-3 and dt < 5.0
        ok &= good
        rows.append(f"a={alpha}: {lam:.6f} vs {ml2_threshold(alpha):.6f} in {dt:.2f}s")
    record_acceptance(1, "threshold closed form", ok, "; ".join(rows))
    assert ok, rows


def test_criterion_2_translation():
    grid = (0.5, 5.0, 50.0)
    base = [qgid_test(LogMixture(), lam, 32) for lam in grid]
    shifted = [qgid_test(Shift(1.0, LogMixture()), lam, 32) for lam in grid]
    ok = all(v.holds for v in base) and all(
        not v.holds and v.first_violation[0] == 1 for v in shifted)
    record_acceptance(2, "translation breaks membership", ok,
                      f"shift violations: {[v.first_violation for v in shifted]}")
    assert ok


def test_criterion_3_convolution():
    grid = (0.1, 1.0, 10.0)
    conv = [qgid_test(Convolution((Exponential(1.0), Exponential(1.0))), lam, 32) for lam in grid]
    single = [qgid_test(Exponential(1.0), lam, 32) for lam in grid]
    ok = all(not v.holds and v.first_violation[0] == 1 for v in conv) and all(v.holds for v in single)
    record_acceptance(3, "convolution breaks membership", ok,
                      f"violations: {[v.first_violation for v in conv]}")
    assert ok


def test_criterion_4_limit():
    alphas = (0.6, 0.7, 0.8, 0.9, 0.95)
    lams = [threshold_search(MLSquared(a), 50) for a in alphas]
    ok = all(b < a for a, b in zip(lams, lams[1:])) and lams[-1] < 0.05
    record_acceptance(4, "threshold collapses as alpha -> 1", ok, ", ".join(f"{x:.5f}" for x in lams))
    assert ok


def test_criterion_5_closed_forms():
    n = np.arange(33)
    q = 0.5
    checks = {}
    pmf = poisson_mixture_pmf(Exponential(1.0), 1.0, 32)
    checks["pmf"] = (pmf.probs, 0.5 ** (n + 1))
    checks["a"] = (a_from_p(pmf).values, np.r_[0.5, np.zeros(31)])
    geom = (1 - q) * q ** n
    checks["r"] = (r_from_p(geom).values, q ** (n[:32] + 1))
    checks["b"] = (b_from_r(q ** (n[:32] + 1)).values, np.r_[0.0, q, np.zeros(31)])
    checks["Q"] = (q_series(Exponential(1.0), 1.0, 32)[1].values, np.r_[0.0, 1.0, np.zeros(31)])
    checks["G"] = (split_pgf(Exponential(1.0), 1.0, 0.5, 32).values, (2 / 3) * (1 / 3) ** n)
    errs = {k: float(np.max(np.abs(got - want))) for k, (got, want) in checks.items()}
    ok = all(e <= 1e-12 for e in errs.values())
    record_acceptance(5, "closed-form oracles at order 32", ok,
                      ", ".join(f"{k}={e:.1e}" for k, e in errs.items()))
    assert ok, errs


def test_criterion_6_cross_characterization():
    rng = np.random.default_rng(6)
    order = 32
    failures = []
    worst_residual = 0.0
    for i in range(200):
        spec, lam = random_spec(rng), random_lambda(rng)
        by_q = qgid_test(spec, lam, order, "q_series")
        by_a = qgid_test(spec, lam, order, "a_recursion")
        if by_q.holds != by_a.holds:
            failures.append((i, "methods", spec, lam))
        pmf = poisson_mixture_pmf(spec, lam, order)
        a = a_from_p(pmf)
        b = b_from_r(r_from_p(pmf))
        scale = np.maximum(a.scale, b.scale[1:])
        if a.nonneg != b.nonneg or np.any(np.abs(a.values - b.values[1:]) > 1e-8 * scale):
            failures.append((i, "a vs b", spec, lam))
        residual = reconstruct_check(spec, lam, float(rng.uniform(0.01, 0.99)), order)
        worst_residual = max(worst_residual, residual)
        if residual > 1e-9:
            failures.append((i, "residual", spec, lam))
        c = float(rng.uniform(0.2, 5.0))
        if qgid_test(ScaleArg(c, spec), lam / c, order).holds != by_q.holds:
            failures.append((i, "scaling", spec, lam))
        if by_q.holds and not qgid_test(spec, lam * float(rng.uniform(0.05, 1.0)), order).holds:
            failures.append((i, "downward closure", spec, lam))
    ok = not failures
    record_acceptance(6, "cross-characterization (200 draws)", ok,
                      f"failures={len(failures)}, worst residual={worst_residual:.1e}")
    assert ok, failures[:5]


def _lemma_triple(r, mode):
    """(g.i.d., r_0^2 condition, pmf shape) for a Levy sequence r."""
    gid = b_from_r(r).nonneg
    hansen = hansen_criterion(r, mode).holds
    p = pmf_from_r(r)
    shape = (logconvexity_check(p) if mode == "convex" else logconcavity_check(p)).holds
    return gid, hansen, shape


def test_criterion_7_convex_equivalence():
    rng = np.random.default_rng(7)
    disagree, seen = [], set()
    for _ in range(100):
        # mixtures of geometric sequences are log-convex
        k = int(rng.integers(1, 4))
        rho = rng.uniform(0.05, 0.95, k)
        w = rng.uniform(0.05, 3.0, k)
        r = np.array([np.sum(w * rho ** (n + 1)) for n in range(30)])
        triple = _lemma_triple(r, "convex")
        seen.add(triple)
        if len(set(triple)) > 1:
            disagree.append(triple)
    ok = not disagree
    record_acceptance("7a", "log-convex Levy sequences: 3 conditions agree", ok,
                      f"disagreements={len(disagree)}, verdict patterns={sorted(seen)}")
    assert ok, disagree[:5]


def test_criterion_7_concave_equivalence():
    rng = np.random.default_rng(77)
    disagree, seen = [], set()
    for _ in range(100):
        # log r_n = a + b n - c n^2 is log-concave
        a, b, c = rng.uniform(-2, 1), rng.uniform(-1.5, 0.5), rng.uniform(0.0, 0.3)
        r = np.exp(a + b * np.arange(30) - c * np.arange(30) ** 2)
        triple = _lemma_triple(r, "concave")
        seen.add(triple)
        if len(set(triple)) > 1:
            disagree.append(triple)
    ok = not disagree
    record_acceptance("7b", "log-concave Levy sequences: 3 conditions agree", ok,
                      f"disagreements={len(disagree)}, verdict patterns={sorted(seen)}")
    assert ok, disagree[:5]


def _reciprocal_k_jet(spec, lam, order):
    """Jet of K = (1/phi)' in h (tau = lam - h), from the jet of 1/phi alone.

    Returns the Taylor coefficients ``(-1)^n K^(n)(lam) / n!`` and the
    magnitude of the terms that enter each of them.
    """
    phi = spec.jet(lam, -1.0, order + 1)
    u = ts.series_recip(phi, tol=0.0).coeffs
    n = np.arange(order + 1)
    # u_n = (-1)^n (1/phi)^(n)(lam) / n!, so the K-jet is -(n+1) u_{n+1}
    jet = -(n + 1) * u[1:]
    terms = np.convolve(np.abs(phi.coeffs), np.abs(u))[1 : order + 2] * (n + 1) / abs(phi[0])
    return jet, terms


def test_criterion_8_semigroup_reduction():
    rng = np.random.default_rng(8)
    fact = np.array([math.factorial(n) for n in range(33)], dtype=float)
    worst = 0.0
    for _ in range(50):
        spec, lam = random_spec(rng), random_lambda(rng)
        # compare jets (Taylor coefficients K^(n)/n!); the n! factor of a
        # derivative would magnify coefficient roundoff by up to 32!
        rep = nid_k_jet(Geometric(), spec, lam, 32)
        got = rep.values / fact
        want, terms = _reciprocal_k_jet(spec, lam, 32)
        # both routes cancel terms of this size, so it bounds their roundoff
        scale = np.maximum.accumulate(np.maximum(np.abs(want), terms))
        worst = max(worst, float(np.max(np.abs(got - want) / scale)))
    classical = nid_k_jet(Classical(), Exponential(1.0), 1.0, 32)
    positive = bool(np.all(classical.values > 0))
    ok = worst <= 1e-10 and positive
    record_acceptance(8, "semigroup reduction", ok, f"worst rel gap={worst:.1e}, classical positive={positive}")
    assert ok


FAMILIES = {
    "degenerate": lambda rng: Degenerate(float(rng.uniform(0.1, 3))),
    "exponential": lambda rng: Exponential(float(rng.uniform(0.1, 5))),
    "mittag_leffler": lambda rng: MittagLeffler(float(rng.uniform(0.1, 1)), float(rng.uniform(0.2, 3))),
    "ml_squared": lambda rng: MLSquared(float(rng.uniform(0.55, 1))),
    "log_mixture": lambda rng: LogMixture(),
    "shift": lambda rng: Shift(float(rng.uniform(0.1, 2)), MLSquared(0.75)),
    "convolution": lambda rng: Convolution((Exponential(1.0), MittagLeffler(0.6, 1.0))),
    "scale_arg": lambda rng: ScaleArg(float(rng.uniform(0.2, 5)), LogMixture()),
}


def test_criterion_9_derivative_sanity():
    rng = np.random.default_rng(9)
    mp.mp.dps = 30
    worst = 0.0
    for make in FAMILIES.values():
        for _ in range(20):
            spec = make(rng)
            tau0 = float(math.exp(rng.uniform(math.log(0.05), math.log(20))))
            jet = lst_jet(spec, tau0, 4).coeffs
            for n in range(5):
                exact = float(mp.diff(lambda t: mp_value(spec, t), tau0, n) / math.factorial(n))
                worst = max(worst, abs(jet[n] - exact) / max(abs(exact), 1e-300))
    ok = worst <= 1e-5
    record_acceptance(9, "jets vs numerical differentiation", ok, f"worst rel gap={worst:.1e}")
    assert ok
