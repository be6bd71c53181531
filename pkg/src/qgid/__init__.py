"""Numerical tests of (quasi-)geometric infinite divisibility for laws on [0, inf).

Distributions are described by their Laplace-Stieltjes transforms
(:mod:`qgid.lst`); membership is decided at finite order through truncated
power series (:mod:`qgid.series`), coefficient recursions
(:mod:`qgid.recursions`) and the tests in :mod:`qgid.analysis` and
:mod:`qgid.precheck`.
"""

__version__ = "0.1.0"

from .analysis import (gid_grid_test, nid_k_jet, nid_split, q_series, qgid_test,
                       reconstruct_check, split_pgf, threshold_search)
from .exceptions import QGIDError
from .lst import (Convolution, Degenerate, Exponential, LogMixture, LSTSpec, MittagLeffler,
                  MLSquared, Pmf, ScaleArg, Shift, from_json, lst_jet, poisson_mixture_pmf)
from .precheck import mixture_precheck
from .recursions import (a_from_p, b_from_r, hansen_criterion, logconcavity_check,
                         logconvexity_check, r_from_p)
from .reports import SequenceReport, Verdict
from .semigroup import Classical, Geometric, SemigroupFamily
from .series import TruncatedSeries

__all__ = [
    "Classical", "Convolution", "Degenerate", "Exponential", "Geometric", "LSTSpec", "LogMixture",
    "MLSquared", "MittagLeffler", "Pmf", "QGIDError", "ScaleArg", "SemigroupFamily",
    "SequenceReport", "Shift", "TruncatedSeries", "Verdict", "a_from_p", "b_from_r",
    "from_json", "gid_grid_test", "hansen_criterion", "logconcavity_check",
    "logconvexity_check", "lst_jet", "mixture_precheck", "nid_k_jet", "nid_split",
    "poisson_mixture_pmf", "q_series", "qgid_test", "r_from_p", "reconstruct_check",
    "split_pgf", "threshold_search",
]
