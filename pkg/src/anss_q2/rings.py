"""Sparse elements of the graded rings B, MF and Gamma in fixed monomial bases.

Bases and normal forms:

* ``BElement``: s^i t^j q2^e with i, j in Z and e in {0, 1}; q2^2 is rewritten
  as (s + t)/2 on construction.
* ``MFElement``: c4^n c6^e Delta^l with n >= 0, e in {0, 1}, l in Z; c6^2 is
  rewritten as c4^3 - 1728 Delta.
* ``GammaElement``: s^i t^j q2^e r^k with k <= 2; r^3 is rewritten as
  -q2 r^2 - q4 r.

Degrees use the internal grading deg s = deg t = deg c4 = 4, deg q2 = deg r = 2,
deg c6 = 6, deg Delta = 12.

Coefficients are ``Fraction`` values with denominators prime to 3.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InvalidIndex, NonInvertibleDenominator

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


class _NonHomogeneous:
    def __repr__(self):
        return "NON_HOMOGENEOUS"

    def __bool__(self):
        return False


NON_HOMOGENEOUS = _NonHomogeneous()


def _as_fraction(c) -> Fraction:
    c = c if isinstance(c, Fraction) else Fraction(c)
    if c.denominator % 3 == 0:
        raise ValueError(f"coefficient {c} is not 3-local")
    return c


class _Sparse:
    """Shared machinery: a finite map monomial -> nonzero Fraction."""

    __slots__ = ("terms",)
    _nvars = 0

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[tuple(key)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms):
        # trusted constructor; caller guarantees nonzero Fraction values
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({(0,) * cls._nvars: _ONE})

    @classmethod
    def monomial(cls, key, coeff=1):
        return cls({tuple(key): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.one() * other
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.one() * other
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, _ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return self.zero()
        return self._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if type(other) is not type(self):
            return NotImplemented
        out = defaultdict(Fraction)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for k, c in self._mul_monomials(k1, k2):
                    out[k] += c1 * c2 * c
        return self._raw({k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        raise NonInvertibleDenominator(f"cannot invert {self!r}")

    def coeff(self, key) -> Fraction:
        return self.terms.get(tuple(key), _ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kc: self._sort_key(kc[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            mono = self._monomial_str(key)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [
            {"monomial": self._monomial_str(k), "coeff": f"{c.numerator}/{c.denominator}"}
            for k, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, items):
        terms = {}
        for item in items:
            key = cls._parse_monomial(item["monomial"])
            terms[key] = terms.get(key, _ZERO) + Fraction(item["coeff"])
        return cls(terms)

    @classmethod
    def _parse_monomial(cls, text):
        exps = dict.fromkeys(cls._var_names, 0)
        if text != "1":
            for factor in text.split("*"):
                m = re.fullmatch(r"([A-Za-z0-9]+?)(?:\^(-?\d+))?", factor)
                if not m or m.group(1) not in exps:
                    raise ValueError(f"bad monomial {text!r}")
                exps[m.group(1)] += int(m.group(2) or 1)
        return tuple(exps[v] for v in cls._var_names)

    def _monomial_str(self, key):
        parts = []
        for name, e in zip(self._var_names, key):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def degrees(self):
        return {self._degree(k) for k in self.terms}


class BElement(_Sparse):
    """Element of B = Z_(3)[s^{+-1}, t^{+-1}, q2] / (q2^2 - (s+t)/2)."""

    __slots__ = ()
    _nvars = 3
    _var_names = ("s", "t", "q2")

    @staticmethod
    def _mul_monomials(a, b):
        i, j, e = a[0] + b[0], a[1] + b[1], a[2] + b[2]
        if e == 2:
            return (((i + 1, j, 0), _HALF), ((i, j + 1, 0), _HALF))
        return (((i, j, e), _ONE),)

    @staticmethod
    def _degree(key):
        return 4 * key[0] + 4 * key[1] + 2 * key[2]

    @staticmethod
    def _sort_key(key):
        return (key[0] + key[1], key[0], key[2])

    def inverse(self):
        if len(self.terms) == 1:
            (i, j, e), c = next(iter(self.terms.items()))
            if e == 0:
                return BElement._raw({(-i, -j, 0): 1 / c})
        raise NonInvertibleDenominator(f"cannot invert {self!r} in B")


class MFElement(_Sparse):
    """Element of MF = Z_(3)[c4, c6, Delta^{+-1}] / (c6^2 - c4^3 + 1728 Delta)."""

    __slots__ = ()
    _nvars = 3
    _var_names = ("c4", "c6", "Delta")

    def __init__(self, terms=None):
        super().__init__(terms)
        for n, e, _ in self.terms:
            if n < 0 or e not in (0, 1):
                raise ValueError(f"({n}, {e}) is not an MF basis exponent")

    @staticmethod
    def _mul_monomials(a, b):
        n, e, l = a[0] + b[0], a[1] + b[1], a[2] + b[2]
        if e == 2:
            return (((n + 3, 0, l), _ONE), ((n, 0, l + 1), Fraction(-1728)))
        return (((n, e, l), _ONE),)

    @staticmethod
    def _degree(key):
        return 4 * key[0] + 6 * key[1] + 12 * key[2]

    @staticmethod
    def _sort_key(key):
        n, e, l = key
        return (n + 3 * l + e, e, -l)

    def inverse(self):
        if len(self.terms) == 1:
            (n, e, l), c = next(iter(self.terms.items()))
            if n == 0 and e == 0:
                return MFElement._raw({(0, 0, -l): 1 / c})
        raise NonInvertibleDenominator(f"cannot invert {self!r} in MF")

    @classmethod
    def _parse_monomial(cls, text):
        key = super()._parse_monomial.__func__(cls, text)
        n, e, l = key
        if n < 0 or e not in (0, 1):
            raise ValueError(f"{text!r} is not an MF basis monomial")
        return key


def _r_power_table():
    # r^k for k = 0..4 as {r-exponent <= 2: BElement}
    q2 = BElement._raw({(0, 0, 1): _ONE})
    q4 = BElement._raw({(1, 0, 0): Fraction(1, 8)})
    one = BElement.one()
    table = {0: {0: one}, 1: {1: one}, 2: {2: one}}
    # r^3 = -q2 r^2 - q4 r
    table[3] = {2: -q2, 1: -q4}
    r4 = defaultdict(BElement.zero)
    for k, c in table[3].items():
        if k + 1 <= 2:
            r4[k + 1] = r4[k + 1] + c
        else:
            for k3, c3 in table[3].items():
                r4[k3] = r4[k3] + c * c3
    table[4] = {k: v for k, v in r4.items() if v}
    return table


_R_POWERS = None


def _r_powers():
    global _R_POWERS
    if _R_POWERS is None:
        _R_POWERS = _r_power_table()
    return _R_POWERS


class GammaElement(_Sparse):
    """Element of Gamma = B[r] / (r^3 + q2 r^2 + q4 r)."""

    __slots__ = ()
    _nvars = 4
    _var_names = ("s", "t", "q2", "r")

    def __init__(self, terms=None):
        super().__init__(terms)
        bad = [k for k in self.terms if k[3] not in (0, 1, 2) or k[2] not in (0, 1)]
        if bad:
            raise ValueError(f"non-normal Gamma monomials {bad}; use gamma_normalize")

    @staticmethod
    def _mul_monomials(a, b):
        return _gamma_mul(BElement._mul_monomials(a[:3], b[:3]), a[3] + b[3])

    @staticmethod
    def _degree(key):
        return 4 * key[0] + 4 * key[1] + 2 * key[2] + 2 * key[3]

    @staticmethod
    def _sort_key(key):
        return (key[3], key[0] + key[1], key[0], key[2])

    def inverse(self):
        if len(self.terms) == 1:
            (i, j, e, k), c = next(iter(self.terms.items()))
            if e == 0 and k == 0:
                return GammaElement._raw({(-i, -j, 0, 0): 1 / c})
        raise NonInvertibleDenominator(f"cannot invert {self!r} in Gamma")

    @classmethod
    def from_b(cls, x: BElement, r_exp: int = 0) -> "GammaElement":
        """x * r^r_exp as a Gamma element."""
        g = cls._raw({(i, j, e, 0): c for (i, j, e), c in x.terms.items()})
        if r_exp == 0:
            return g
        return g * r_gen() ** r_exp

    def r_component(self, k: int) -> BElement:
        """The B-coefficient of r^k."""
        return BElement._raw({(i, j, e): c for (i, j, e, kk), c in self.terms.items() if kk == k})


def _gamma_mul(bpart, k):
    out = defaultdict(Fraction)
    for rk, bcoef in _r_powers()[k].items():
        for key, c in bpart:
            for bkey, bc in bcoef.terms.items():
                for key2, c2 in BElement._mul_monomials(key, bkey):
                    out[key2 + (rk,)] += c * bc * c2
    return tuple((k2, c) for k2, c in out.items() if c)


# -- named elements ---------------------------------------------------------


def b_monomial(i: int, j: int, e: int = 0, coeff=1) -> BElement:
    return BElement({(i, j, e): coeff})


def s_gen() -> BElement:
    return b_monomial(1, 0)


def t_gen() -> BElement:
    return b_monomial(0, 1)


def q2_gen() -> BElement:
    return b_monomial(0, 0, 1)


def q4_gen() -> BElement:
    """q4 = s/8."""
    return b_monomial(1, 0, 0, Fraction(1, 8))


def mu_gen() -> BElement:
    """mu = 16 q2^2 - 64 q4 = 8t."""
    return b_monomial(0, 1, 0, 8)


def r_gen() -> GammaElement:
    return GammaElement({(0, 0, 0, 1): 1})


def c4_gen() -> MFElement:
    return MFElement({(1, 0, 0): 1})


def c6_gen() -> MFElement:
    return MFElement({(0, 1, 0): 1})


def delta_gen() -> MFElement:
    return MFElement({(0, 0, 1): 1})


def mf_monomial(n: int, e: int, l: int, coeff=1) -> MFElement:
    return MFElement({(n, e, l): coeff})


def j_mf(k: int = 1) -> MFElement:
    """k-th power of the j-invariant c4^3 / Delta."""
    if k < 0:
        raise ValueError("j_MF is not invertible in MF")
    return mf_monomial(3 * k, 0, -k)


def a_elem(i: int, j: int) -> BElement:
    """a_{i,j} = s^i t^j - s^j t^i."""
    return b_monomial(i, j) - b_monomial(j, i)


def abar_elem(i: int, j: int) -> BElement:
    return b_monomial(i, j) + b_monomial(j, i)


def b_elem(i: int, j: int) -> BElement:
    return b_monomial(i, j, 1) - b_monomial(j, i, 1)


def bbar_elem(i: int, j: int) -> BElement:
    return b_monomial(i, j, 1) + b_monomial(j, i, 1)


def c_elem(i: int, e: int) -> BElement:
    return b_monomial(i, i, e)


# -- coordinate changes -----------------------------------------------------


def normalize_b(raw) -> BElement:
    """Rewrite a polynomial in q2, q4^{+-1}, mu^{+-1}, s^{+-1}, t^{+-1} in the B basis.

    ``raw`` maps exponent tuples (q2, q4, mu, s, t) to coefficients.  q4 is
    replaced by s/8, mu by 8t and q2^2 by (s+t)/2.
    """
    total = BElement.zero()
    for key, c in raw.items():
        a2, a4, amu, as_, at = key
        if a2 < 0:
            raise NonInvertibleDenominator("q2 is not invertible in B")
        mono = BElement._raw(
            {(a4 + as_, amu + at, 0): _as_fraction(c) * Fraction(8) ** (amu - a4)}
        )
        total = total + mono * _q2_power(a2)
    return total


@lru_cache(maxsize=None)
def _q2_power(n: int) -> BElement:
    if n == 0:
        return BElement.one()
    if n == 1:
        return q2_gen()
    half = BElement._raw({(1, 0, 0): _HALF, (0, 1, 0): _HALF})
    return half ** (n // 2) * (q2_gen() if n % 2 else BElement.one())


@lru_cache(maxsize=None)
def _c4_power_b(n: int) -> BElement:
    # (2s + 8t)^n, expanded by the binomial theorem
    return BElement._raw(
        {(n - r, r, 0): Fraction(comb(n, r) * 2 ** (n - r) * 8**r) for r in range(n + 1)}
    )


_C6_B = None


def _c6_b() -> BElement:
    global _C6_B
    if _C6_B is None:
        _C6_B = BElement({(1, 0, 1): 4, (0, 1, 1): -32})
    return _C6_B


def _delta_power_b(l: int) -> BElement:
    # Delta = s^2 t / 8
    return BElement._raw({(2 * l, l, 0): Fraction(8) ** (-l)})


def mf_monomial_to_b(n: int, e: int, l: int) -> BElement:
    x = _c4_power_b(n)
    if e:
        x = x * _c6_b()
    d = _delta_power_b(l)
    (di, dj, _), dc = next(iter(d.terms.items()))
    return BElement._raw({(i + di, j + dj, ee): c * dc for (i, j, ee), c in x.terms.items()})


def mf_to_b(x: MFElement) -> BElement:
    """Image of an MF element under c4 -> 2s+8t, c6 -> 4 q2 (s-8t), Delta -> s^2 t/8."""
    total = BElement.zero()
    for (n, e, l), c in x.terms.items():
        total = total + mf_monomial_to_b(n, e, l).scale(c)
    return total


def t_degree(x):
    """Common internal degree of all terms, 0 for the zero element.

    Returns ``NON_HOMOGENEOUS`` when the terms have different degrees.
    """
    degs = x.degrees()
    if not degs:
        return 0
    if len(degs) > 1:
        return NON_HOMOGENEOUS
    return degs.pop()


def homogeneous_parts(x):
    parts = defaultdict(dict)
    for k, c in x.terms.items():
        parts[x._degree(k)][k] = c
    return {d: type(x)._raw(t) for d, t in parts.items()}


# -- generator families -----------------------------------------------------


def ell0(m: int) -> int:
    """Largest Delta exponent in the (epsilon=0, m) MF basis block."""
    return m // 3


def ell1(m: int) -> int:
    """Largest Delta exponent in the (epsilon=1, m) MF basis block."""
    return (m - 1) // 3


@dataclass(frozen=True, order=True)
class GeneratorIndex:
    """One of the enumerated generators A^m_v, B^m_v (in B) or C^m_v, D^m_v (in MF)."""

    family: str
    m: int
    v: int

    def __post_init__(self):
        if self.family not in ("A", "B", "C", "D"):
            raise InvalidIndex(f"unknown family {self.family!r}")
        if self.v < 0:
            raise InvalidIndex("v must be non-negative")
        if self.family == "C" and self.m - 3 * ell0(self.m) + 3 * self.v < 0:
            raise InvalidIndex(f"C[{self.m},{self.v}] has negative c4 exponent")
        if self.family == "D" and self.m - 3 * ell1(self.m) - 1 + 3 * self.v < 0:
            raise InvalidIndex(f"D[{self.m},{self.v}] has negative c4 exponent")

    @property
    def eps(self) -> int:
        return 0 if self.family in ("A", "C") else 1

    def ab_indices(self) -> tuple[int, int]:
        """(i, j) of the underlying a_{i,j} / b_{i,j}."""
        if self.family not in ("A", "B"):
            raise InvalidIndex("only A/B generators have (i, j) indices")
        return (self.m - 1) // 2 - self.v, -((-(self.m + 1)) // 2) + self.v

    def mf_exponents(self) -> tuple[int, int, int]:
        """(n, epsilon, l) of the underlying c4^n c6^epsilon Delta^l."""
        if self.family == "C":
            l0 = ell0(self.m)
            return self.m - 3 * l0 + 3 * self.v, 0, l0 - self.v
        if self.family == "D":
            l1 = ell1(self.m)
            return self.m - 3 * l1 - 1 + 3 * self.v, 1, l1 - self.v
        raise InvalidIndex("only C/D generators have MF exponents")

    def __str__(self):
        return f"{self.family}[{self.m},{self.v}]"

    @classmethod
    def parse(cls, text: str) -> "GeneratorIndex":
        m = re.fullmatch(r"([ABCD])\[(-?\d+),(\d+)\]", text.strip())
        if not m:
            raise ValueError(f"bad generator label {text!r}")
        return cls(m.group(1), int(m.group(2)), int(m.group(3)))


def row_index_for(eps: int, i: int, j: int) -> tuple[int, int]:
    """(m, v) such that A^m_v (eps=0) or B^m_v (eps=1) is a_{i,j} / b_{i,j}, i < j."""
    m = i + j
    return m, (m - 1) // 2 - i


def generator_to_monomials(g: GeneratorIndex):
    if g.family in ("A", "B"):
        i, j = g.ab_indices()
        return a_elem(i, j) if g.family == "A" else b_elem(i, j)
    n, e, l = g.mf_exponents()
    return mf_monomial(n, e, l)
