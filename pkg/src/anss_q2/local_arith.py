"""Arithmetic over the 3-local integers and their finite quotients.

``Local3`` is a :class:`fractions.Fraction` whose denominator is prime to 3.
Ring elements elsewhere in the package store plain ``Fraction`` coefficients
(all denominators that occur are powers of 2) and use the helpers here for
valuations and reductions.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegralInput

INFINITY = math.inf


def _v3_int(n: int) -> int:
    n = abs(n)
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


class Local3(Fraction):
    """An exact element of Z_(3): a rational with denominator prime to 3."""

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        if self.denominator % 3 == 0:
            raise ValueError(f"{Fraction(self)} is not 3-local")
        return self

    def _wrap(op):
        def forward(a, b):
            r = op(Fraction(a), b)
            return Local3(r) if isinstance(r, Fraction) else r

        def reverse(b, a):
            r = op(a, Fraction(b))
            return Local3(r) if isinstance(r, Fraction) else r

        return forward, reverse

    __add__, __radd__ = _wrap(operator.add)
    __sub__, __rsub__ = _wrap(operator.sub)
    __mul__, __rmul__ = _wrap(operator.mul)
    __truediv__, __rtruediv__ = _wrap(operator.truediv)
    del _wrap

    def __neg__(self):
        return Local3(-Fraction(self))

    def __pow__(self, n):
        return Local3(Fraction(self) ** n)

    def __repr__(self):
        return f"Local3({self.numerator}, {self.denominator})"


def val3(x) -> int | float:
    """3-adic valuation of an int or rational; ``INFINITY`` for zero.

    Accepts any ``Fraction``, so values with denominators divisible by 3 get
    a negative valuation instead of an error.
    """
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _v3_int(x.numerator) - _v3_int(x.denominator)


def is_unit(x) -> bool:
    return x != 0 and val3(x) == 0


def is_integral(x) -> bool:
    return val3(x) >= 0


@dataclass(frozen=True)
class Residue:
    """An element of Z/3^K, stored as its least non-negative representative."""

    value: int
    modulus_exp: int

    def __post_init__(self):
        if self.modulus_exp < 0:
            raise ValueError("modulus exponent must be non-negative")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return 3**self.modulus_exp

    def _check(self, other):
        if isinstance(other, int):
            return Residue(other, self.modulus_exp)
        if other.modulus_exp != self.modulus_exp:
            raise ValueError(
                f"modulus mismatch: 3^{self.modulus_exp} vs 3^{other.modulus_exp}"
            )
        return other

    def __add__(self, other):
        other = self._check(other)
        return Residue(self.value + other.value, self.modulus_exp)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Residue(self.value - other.value, self.modulus_exp)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return Residue(self.value * other.value, self.modulus_exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus_exp)

    def __bool__(self):
        return self.value != 0

    def valuation(self) -> int:
        """Valuation of the residue, capped at ``modulus_exp`` for zero."""
        if self.value == 0:
            return self.modulus_exp
        return min(_v3_int(self.value), self.modulus_exp)

    def order_exp(self) -> int:
        """Exponent e with 3^e the additive order of this residue."""
        return self.modulus_exp - self.valuation()

    def __repr__(self):
        return f"{self.value} mod 3^{self.modulus_exp}"


def reduce_mod(x, K: int) -> Residue:
    """Image of a 3-local integer in Z/3^K."""
    x = Fraction(x)
    if x != 0 and val3(x) < 0:
        raise NonIntegralInput(f"{x} has negative 3-adic valuation")
    mod = 3**K
    if K == 0:
        return Residue(0, 0)
    return Residue(x.numerator * pow(x.denominator, -1, mod), K)


def residue_int(x, K: int) -> int:
    """Like :func:`reduce_mod` but returns the bare integer representative."""
    if isinstance(x, int):
        return x % 3**K
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator % 3**K
    if x.denominator % 3 == 0:
        raise NonIntegralInput(f"{x} has negative 3-adic valuation")
    mod = 3**K
    return x.numerator * pow(x.denominator, -1, mod) % mod


def unit_part(x) -> Fraction:
    """x / 3^val3(x) for nonzero x."""
    x = Fraction(x)
    v = val3(x)
    return x / Fraction(3) ** v


def pow2(n: int) -> Fraction:
    """2^n as an exact rational, for any integer n."""
    return Fraction(2**n) if n >= 0 else Fraction(1, 2**-n)


def adic_lemma_check(n: int) -> bool:
    """Check the valuation identities for 4^n - 1 (n even) and 2^n + 1 (n odd)."""
    if n == 0:
        raise ValueError("n must be nonzero")
    if n % 2 == 0:
        return val3(pow2(2 * n) - 1) == val3(n) + 1
    return val3(pow2(n) + 1) == val3(n) + 1
