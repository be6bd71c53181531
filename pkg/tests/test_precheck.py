import math

import numpy as np
import pytest

from qgid.exceptions import InvalidParameter
from qgid.lst import Degenerate, Exponential, LogMixture, poisson_mixture_pmf
from qgid.precheck import mixture_precheck, rational_fit, tail_bound
from qgid.semigroup import Classical

GEOM = 0.5 ** np.arange(1, 41)
POISSON = [math.exp(-1) / math.factorial(n) for n in range(30)]
# 1/(2 - z^2) = sum z^(2k) / 2^(k+1)
EXAMPLE1 = [0.5 ** (n // 2 + 1) if n % 2 == 0 else 0.0 for n in range(40)]


def test_geometric_holds():
    rep = mixture_precheck(GEOM, [-5, -1, 0, 0.9])
    assert rep.verdict.holds
    assert rep.verdict.details["evaluated"] == [-5, -1, 0, 0.9]
    # H = 1 - z: H' = -1 and higher derivatives vanish
    for point in rep.points:
        assert point.H_derivatives[0] == pytest.approx(-1.0, abs=1e-9)
        np.testing.assert_allclose(point.H_derivatives[1:], 0.0, atol=1e-8)


def test_rational_continuation_used_outside_the_disc():
    rep = mixture_precheck(GEOM, [-5.0])
    assert rep.points[0].method == "rational"
    assert rep.points[0].P == pytest.approx(1 / 7)


def test_example1_not_a_mixture():
    rep = mixture_precheck(EXAMPLE1, [-2.0])
    v = rep.verdict
    assert not v.holds and v.details["condition"] == "i" and v.first_violation[0] == 0
    assert rep.points[0].P == pytest.approx(-0.5)


def test_poisson_fails_second_derivative():
    v = mixture_precheck(POISSON, [0.0], m=4).verdict
    assert not v.holds and v.first_violation[0] == 2 and v.details["condition"] == "ii"
    assert v.first_violation[1] == pytest.approx(math.e)


def test_poisson_is_classical_member():
    # -log P = 1 - z: the classical transform sees an i.d. law
    assert mixture_precheck(POISSON, [-1.0, 0.0, 0.5], m=4, family=Classical()).verdict.holds


def test_member_mixtures_hold():
    for spec, lam in ((Exponential(2.0), 1.0), (LogMixture(), 0.5)):
        coeffs = poisson_mixture_pmf(spec, lam, 60).probs
        assert mixture_precheck(coeffs, [-0.5, 0.0, 0.5]).verdict.holds


def test_nonmember_fails_inside_disc():
    coeffs = poisson_mixture_pmf(Degenerate(1.0), 2.0, 60).probs
    assert not mixture_precheck(coeffs, [-0.5, 0.0, 0.5]).verdict.holds


def test_inconclusive_points_are_reported():
    # a finite but non-rational tail: no continuation beyond the disc
    coeffs = poisson_mixture_pmf(LogMixture(), 0.5, 40).probs
    rep = mixture_precheck(coeffs, [-10.0, 0.0])
    assert rep.points[0].method == "inconclusive" and rep.points[0].holds is None
    assert rep.verdict.details["evaluated"] == [0.0]


def test_tail_bound():
    assert tail_bound(GEOM, 0.0, 4) == 0.0
    assert tail_bound(GEOM, 0.5, 2) < 1e-9
    assert tail_bound(GEOM, -3.0, 2) == math.inf
    assert tail_bound([0.5, 0.5, 0, 0, 0, 0, 0, 0], 5.0, 3) == 0.0


def test_rational_fit():
    num, den = rational_fit(GEOM)
    np.testing.assert_allclose(np.trim_zeros(num, "b"), [0.5], atol=1e-14)
    np.testing.assert_allclose(np.trim_zeros(den, "b"), [1, -0.5], atol=1e-14)
    assert rational_fit(POISSON) is None


@pytest.mark.parametrize("coeffs,grid,m", [
    ([], [0.0], 4),
    ([0.5, -0.3, 0.8], [0.0], 4),
    ([0.7, 0.7], [0.0], 4),
    (GEOM, [1.0], 4),
    (GEOM, [0.0], 0),
])
def test_bad_input(coeffs, grid, m):
    with pytest.raises(InvalidParameter):
        mixture_precheck(coeffs, grid, m)
