"""Semigroup transforms for generalized (N-) infinite divisibility.

A commuting family of counting variables ``N_p`` with pgfs ``H_p`` comes with
an LST ``varphi`` satisfying ``varphi(0) = -varphi'(0) = 1`` and
``varphi(tau) = H_p(varphi(p * tau))``.  Two families are supported:

``Geometric``   ``varphi = 1/(1+t)``, ``H_p(z) = p z / (1 - q z)``, ``p`` in (0, 1).
``Classical``   ``varphi = exp(-t)``, ``N_p = 1/p`` a.s., ``p`` in {1/m}.
"""

from __future__ import annotations

import math

from . import series as ts
from .exceptions import InvalidParameter, RangeError
from .series import TruncatedSeries

# how close 1/p must be to an integer for the classical family
_INTEGER_SLACK = 1e-9


class SemigroupFamily:
    kind = ""

    def phi(self, t: float) -> float:
        raise NotImplementedError

    def dphi(self, t: float) -> float:
        raise NotImplementedError

    def phi_inv(self, y: float) -> float:
        raise NotImplementedError

    def H(self, p: float, z: float) -> float:
        raise NotImplementedError

    def H_inv(self, p: float, y: float) -> float:
        raise NotImplementedError

    def dphi_at_inverse_jet(self, y: TruncatedSeries) -> TruncatedSeries:
        """Jet of ``varphi'(varphi^{-1}(y))`` for a jet ``y``."""
        raise NotImplementedError

    def H_inv_jet(self, p: float, y: TruncatedSeries) -> TruncatedSeries:
        raise NotImplementedError

    def phi_inv_jet(self, y: TruncatedSeries) -> TruncatedSeries:
        raise NotImplementedError

    def check_p(self, p: float) -> float:
        raise NotImplementedError

    def check_range(self, y: float):
        if not 0.0 < y < 1.0:
            raise RangeError(f"{y!r} is outside the range (0,1) of the {self.kind} transform")

    @staticmethod
    def from_name(name: str) -> "SemigroupFamily":
        key = name.strip().lower()
        if key == "geometric":
            return Geometric()
        if key == "classical":
            return Classical()
        raise InvalidParameter(f"unknown semigroup {name!r} (expected 'geometric' or 'classical')")

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"{type(self).__name__}()"


class Geometric(SemigroupFamily):
    kind = "geometric"

    def phi(self, t):
        return 1.0 / (1.0 + t)

    def dphi(self, t):
        return -1.0 / (1.0 + t) ** 2

    def phi_inv(self, y):
        return 1.0 / y - 1.0

    def H(self, p, z):
        return p * z / (1.0 - (1.0 - p) * z)

    def H_inv(self, p, y):
        return y / (p + (1.0 - p) * y)

    def dphi_at_inverse_jet(self, y):
        return -(y * y)

    def phi_inv_jet(self, y):
        return ts.series_recip(y, tol=0.0) - 1.0

    def H_inv_jet(self, p, y):
        p = self.check_p(p)
        return y * ts.series_recip(p + (1.0 - p) * y)

    def check_p(self, p):
        p = float(p)
        if not 0.0 < p < 1.0:
            raise InvalidParameter(f"p out of range (0,1): {p!r}")
        return p


class Classical(SemigroupFamily):
    kind = "classical"

    def phi(self, t):
        return math.exp(-t)

    def dphi(self, t):
        return -math.exp(-t)

    def phi_inv(self, y):
        return -math.log(y)

    def H(self, p, z):
        return z ** self.multiplicity(p)

    def H_inv(self, p, y):
        return y ** (1.0 / self.multiplicity(p))

    def dphi_at_inverse_jet(self, y):
        return -y

    def phi_inv_jet(self, y):
        return -ts.series_log(y)

    def H_inv_jet(self, p, y):
        return ts.series_real_pow(y, 1.0 / self.multiplicity(p))

    def multiplicity(self, p: float) -> int:
        """The integer ``m = 1/p``; only ``p = 1/m`` is admissible."""
        p = float(p)
        if not 0.0 < p <= 1.0:
            raise InvalidParameter(f"p out of range (0,1]: {p!r}")
        m = round(1.0 / p)
        if m < 1 or abs(1.0 / p - m) > _INTEGER_SLACK * m:
            raise InvalidParameter(f"p = {p!r} is not of the form 1/m for a positive integer m")
        return m

    def check_p(self, p):
        self.multiplicity(p)
        return float(p)
