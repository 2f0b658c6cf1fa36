"""Truncated second-order Taylor (jet) arithmetic in one variable.

Used to push exact derivatives through the canal construction (Gram-Schmidt
frames included) for the exact-jet probe mode.  A ``Jet2`` carries a value and
its first two derivatives with respect to the curve parameter; the arithmetic
implements the product/quotient/chain rules truncated at order two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Jet2:
    f: float
    d1: float = 0.0
    d2: float = 0.0

    @staticmethod
    def lift(x):
        return x if isinstance(x, Jet2) else Jet2(float(x))

    def __add__(self, other):
        o = Jet2.lift(other)
        return Jet2(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.d1, -self.d2)

    def __sub__(self, other):
        return self + (-Jet2.lift(other))

    def __rsub__(self, other):
        return Jet2.lift(other) + (-self)

    def __mul__(self, other):
        o = Jet2.lift(other)
        return Jet2(self.f * o.f,
                    self.d1 * o.f + self.f * o.d1,
                    self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Jet2.lift(other)
        c0 = self.f / o.f
        c1 = (self.d1 - c0 * o.d1) / o.f
        c2 = (self.d2 - 2.0 * c1 * o.d1 - c0 * o.d2) / o.f
        return Jet2(c0, c1, c2)

    def __rtruediv__(self, other):
        return Jet2.lift(other) / self

    def sqrt(self):
        s0 = math.sqrt(self.f)
        s1 = self.d1 / (2.0 * s0)
        s2 = (self.d2 / 2.0 - s1 * s1) / s0
        return Jet2(s0, s1, s2)


def jsqrt(x):
    return x.sqrt() if isinstance(x, Jet2) else math.sqrt(x)


def value(x):
    return x.f if isinstance(x, Jet2) else float(x)
