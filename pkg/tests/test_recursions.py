import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgid.exceptions import DegenerateP0, InvalidParameter, PreconditionNotMet
from qgid.lst import Degenerate, Exponential, poisson_mixture_pmf
from qgid.recursions import (a_from_p, b_from_r, hansen_criterion, logconcavity_check, logconvexity_check,
                             pmf_from_a, pmf_from_r, r_from_p)
from conftest import random_lambda, random_spec

GEOM = 0.5 ** np.arange(1, 34)
POISSON = np.array([math.exp(-1) / math.factorial(n) for n in range(33)])


class TestA:
    def test_geometric(self):
        rep = a_from_p(GEOM)
        np.testing.assert_allclose(rep.values, [0.5] + [0] * 31, atol=1e-12)
        assert rep.nonneg and rep.first_violation is None

    def test_poisson(self):
        rep = a_from_p(POISSON)
        assert rep.values[0] == pytest.approx(1.0)
        assert rep.values[1] == pytest.approx(-0.5)
        assert not rep.nonneg and rep.first_violation[0] == 1

    def test_point_mass(self):
        rep = a_from_p([1.0, 0, 0, 0])
        assert rep.values.tolist() == [0, 0, 0] and rep.nonneg and rep.extra["boundary"]

    def test_zero_p0(self):
        with pytest.raises(DegenerateP0):
            a_from_p([0.0, 0.5, 0.5])

    def test_round_trip(self, rng):
        for _ in range(30):
            p = poisson_mixture_pmf(random_spec(rng), random_lambda(rng), 24)
            if p.p0 > 0.999:
                continue
            a = a_from_p(p)
            back = pmf_from_a(a.values, p.p0)
            # roundoff grows with the reported scale, not with the masses
            np.testing.assert_allclose(back, p.probs, rtol=0, atol=1e-12 * a.scale[-1])


class TestR:
    def test_poisson(self):
        rep = r_from_p(POISSON)
        np.testing.assert_allclose(rep.values, [1] + [0] * 31, atol=1e-12)
        assert rep.nonneg

    def test_geometric(self):
        np.testing.assert_allclose(r_from_p(GEOM).values, 0.5 ** np.arange(1, 33), rtol=1e-12)

    def test_two_point(self):
        rep = r_from_p([0.5, 0, 0.5, 0, 0, 0])
        assert rep.values[1] == pytest.approx(2.0) and rep.values[3] == pytest.approx(-2.0)
        assert rep.first_violation == (3, pytest.approx(-2.0))

    def test_round_trip(self):
        r = r_from_p(GEOM).values
        np.testing.assert_allclose(pmf_from_r(r, 0.5), GEOM, rtol=1e-12)


class TestB:
    def test_geometric(self):
        rep = b_from_r(0.5 ** np.arange(1, 33))
        np.testing.assert_allclose(rep.values, [0, 0.5] + [0] * 31, atol=1e-12)
        assert rep.nonneg and rep.extra["partial_sum"] == pytest.approx(0.5) and rep.extra["sum_below_one"]

    def test_poisson(self):
        rep = b_from_r([1.0] + [0.0] * 10)
        assert rep.values[1] == pytest.approx(1.0) and rep.values[2] == pytest.approx(-0.5)
        assert rep.first_violation[0] == 2

    def test_zeros(self):
        rep = b_from_r(np.zeros(6))
        assert rep.values.tolist() == [0] * 7 and rep.nonneg

    def test_a_equals_shifted_b(self, rng):
        # a_n = b_{n+1}: both are (1 - p0) q_{n+1}
        for _ in range(40):
            p = poisson_mixture_pmf(random_spec(rng), random_lambda(rng), 20)
            if p.p0 > 0.999:
                continue
            a = a_from_p(p)
            b = b_from_r(r_from_p(p))
            scale = np.maximum(a.scale, b.scale[1:])
            assert np.all(np.abs(a.values - b.values[1:]) <= 1e-8 * scale)


class TestShape:
    def test_geometric(self):
        s = 0.3 ** np.arange(12)
        assert logconvexity_check(s).holds and logconcavity_check(s).holds

    def test_poisson(self):
        v = logconvexity_check(POISSON)
        assert not v.holds and v.first_violation[0] == 1
        assert logconcavity_check(POISSON).holds

    def test_small(self):
        assert logconvexity_check([1, 1, 2]).holds
        v = logconcavity_check([1, 1, 2])
        assert not v.holds and v.first_violation[0] == 1

    def test_negative_rejected(self):
        with pytest.raises(InvalidParameter):
            logconvexity_check([1, -1, 2])

    @settings(max_examples=100)
    @given(st.floats(-1, 1), st.floats(0, 0.5), st.integers(3, 30))
    def test_log_convex_pmf_is_gid(self, b, c, n):
        # log-convex masses give a nonnegative a-sequence
        k = np.arange(n + 1)
        p = np.exp(b * k + c * k * k / n - 0.0)
        p = p / (p.sum() * 1.5)
        assert logconvexity_check(p).holds
        assert a_from_p(p).nonneg


class TestHansen:
    def test_geometric(self):
        v = hansen_criterion(r_from_p(GEOM), "convex")
        assert v.holds and v.details["r0_squared"] == pytest.approx(0.25)

    def test_poisson(self):
        v = hansen_criterion(r_from_p(POISSON), "convex")
        assert not v.holds and v.first_violation[0] == 1
        assert not b_from_r(r_from_p(POISSON)).nonneg

    def test_ones(self):
        r = np.ones(20)
        assert hansen_criterion(r, "convex").holds
        assert b_from_r(r).nonneg

    def test_preconditions(self):
        with pytest.raises(PreconditionNotMet):
            hansen_criterion([1.0, -0.1, 0.3])
        with pytest.raises(PreconditionNotMet):
            hansen_criterion([1.0, 1.0, 2.0], mode="concave")
        with pytest.raises(PreconditionNotMet):
            hansen_criterion([1.0])
        with pytest.raises(InvalidParameter):
            hansen_criterion([1.0, 1.0], mode="flat")
