"""Kernels and cokernels of g = psi_[2] - 1 on MF and h = psi_d + 1 on B.

coker h is spanned by the classes of a_{i,j} (i < j) of order 3^(v3(i+j)+1),
b_{i,j} (i < j) of order 3^(v3(2i+2j+1)+1), and a free part spanned by
a_{-i,i}, i >= 1 (where the eigenvalue 1 - 4^(i+j) vanishes).  In coker h a
monomial s^i t^j q2^e with i < j is a_{i,j} q2^e / 2, and one with i > j is
-a_{j,i} q2^e / 2; diagonal monomials die.

coker g is spanned by the MF basis monomials: those of degree 0 (the powers
of j = c4^3 / Delta) freely, the rest with order 3^(v3(deg)+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .local_arith import Residue, reduce_mod, val3
from .rings import BElement, MFElement, a_elem, j_mf

_HALF = Fraction(1, 2)


def a_order_exp(i: int, j: int):
    """Order exponent of a_{i,j} in coker h; ``None`` for the free case i + j = 0."""
    if i + j == 0:
        return None
    return val3(i + j) + 1


def b_order_exp(i: int, j: int) -> int:
    return val3(2 * i + 2 * j + 1) + 1


def mf_order_exp(key):
    """Order exponent of an MF basis monomial in coker g; ``None`` in degree 0."""
    d = MFElement._degree(key)
    if d == 0:
        return None
    return val3(d) + 1


def _add_residue(table, key, c, e):
    r = reduce_mod(c, e)
    old = table.get(key)
    new = r if old is None else old + r
    if new:
        table[key] = new
    else:
        table.pop(key, None)


@dataclass(frozen=True)
class CokerHClass:
    """A class in coker h.

    ``free_part`` maps i >= 1 to the coefficient of a_{-i,i}; ``a_torsion`` and
    ``b_torsion`` map (i, j) with i < j to residues at the generator's order.
    """

    free_part: dict = field(default_factory=dict)
    a_torsion: dict = field(default_factory=dict)
    b_torsion: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.free_part or self.a_torsion or self.b_torsion)

    def __eq__(self, other):
        if not isinstance(other, CokerHClass):
            return NotImplemented
        return (
            self.free_part == other.free_part
            and self.a_torsion == other.a_torsion
            and self.b_torsion == other.b_torsion
        )

    def __add__(self, other):
        free = dict(self.free_part)
        for k, c in other.free_part.items():
            v = free.get(k, 0) + c
            if v:
                free[k] = v
            else:
                free.pop(k)
        a = dict(self.a_torsion)
        for k, r in other.a_torsion.items():
            _add_residue(a, k, r.value, r.modulus_exp)
        b = dict(self.b_torsion)
        for k, r in other.b_torsion.items():
            _add_residue(b, k, r.value, r.modulus_exp)
        return CokerHClass(free, a, b)

    def scale(self, c):
        c = Fraction(c)
        free = {k: v * c for k, v in self.free_part.items() if v * c}
        a, b = {}, {}
        for k, r in self.a_torsion.items():
            _add_residue(a, k, r.value * c, r.modulus_exp)
        for k, r in self.b_torsion.items():
            _add_residue(b, k, r.value * c, r.modulus_exp)
        return CokerHClass(free, a, b)

    def a_coeff(self, i, j):
        """Coefficient on a_{i,j}; i > j is read through a_{i,j} = -a_{j,i}."""
        if i == j:
            return 0
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        if i + j == 0:
            return sign * self.free_part.get(j, Fraction(0))
        r = self.a_torsion.get((i, j))
        return 0 if r is None else (sign * r.value) % r.modulus

    def b_coeff(self, i, j):
        if i == j:
            return 0
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        r = self.b_torsion.get((i, j))
        return 0 if r is None else (sign * r.value) % r.modulus

    def __repr__(self):
        parts = [f"{c}*a[{-i},{i}]" for i, c in sorted(self.free_part.items())]
        parts += [f"{r.value}*a[{i},{j}]" for (i, j), r in sorted(self.a_torsion.items())]
        parts += [f"{r.value}*b[{i},{j}]" for (i, j), r in sorted(self.b_torsion.items())]
        return "CokerH(" + " + ".join(parts) + ")" if parts else "CokerH(0)"


@dataclass(frozen=True)
class CokerGClass:
    """A class in coker g: free coefficients on j^k and torsion residues."""

    free_part: dict = field(default_factory=dict)
    torsion: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.free_part or self.torsion)

    def __repr__(self):
        parts = [f"{c}*j^{k}" for k, c in sorted(self.free_part.items())]
        parts += [f"{r.value}*{MFElement({k: 1})!r}" for k, r in sorted(self.torsion.items())]
        return "CokerG(" + " + ".join(parts) + ")" if parts else "CokerG(0)"


def project_coker_h(x: BElement) -> CokerHClass:
    """Class of ``x`` in coker h.  Mixed-degree input is handled term by term."""
    free, a, b = {}, {}, {}
    for (i, j, e), c in x.terms.items():
        if i == j:
            continue
        half = c * _HALF if i < j else -c * _HALF
        lo, hi = (i, j) if i < j else (j, i)
        if e == 0:
            if lo + hi == 0:
                v = free.get(hi, Fraction(0)) + half
                if v:
                    free[hi] = v
                else:
                    free.pop(hi, None)
            else:
                _add_residue(a, (lo, hi), half, a_order_exp(lo, hi))
        else:
            _add_residue(b, (lo, hi), half, b_order_exp(lo, hi))
    return CokerHClass(free, a, b)


def project_coker_g(x: MFElement) -> CokerGClass:
    free, tors = {}, {}
    for key, c in x.terms.items():
        n, e, l = key
        e_ord = mf_order_exp(key)
        if e_ord is None:
            # degree 0 forces e = 0 and n = -3l, i.e. the monomial j^n/3
            k = n // 3
            free[k] = free.get(k, Fraction(0)) + c
        else:
            _add_residue(tors, key, c, e_ord)
    return CokerGClass({k: v for k, v in free.items() if v}, tors)


def ker_g_element(k: int) -> MFElement:
    """j^k, the k-th basis element of ker g."""
    return j_mf(k)


def ker_h_element(i: int) -> BElement:
    """a_{-i,i}, the i-th basis element of ker h."""
    if i < 1:
        raise ValueError("ker h generators are indexed by i >= 1")
    return a_elem(-i, i)


def residue(value, e) -> Residue:
    return reduce_mod(value, e)
