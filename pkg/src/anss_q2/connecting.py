"""The connecting homomorphisms delta^0 : ker g -> ker h and delta^1 : coker g -> coker h.

delta^0 is the restriction of phi_q - phi_f to ker g = Z_(3)[j], with values
in ker h, spanned by a_{-v,v}.  delta^1 is induced by -phi_f; it preserves
internal degree and therefore splits into blocks

    W_{eps,m} --> coker h in degree 4m + 2 eps,

with source basis C^m_v (eps = 0) or D^m_v (eps = 1) and target generators
A^m_w or B^m_w.  Every target generator in a block has the same order 3^e,
e = v3(m) + 1 (eps = 0) or v3(2m + 1) + 1 (eps = 1), and so does every source
generator, since deg C^m_v = 4m and deg D^m_v = 4m + 2.

Each column is computed by two independent routes: applying the ring maps and
projecting (``route="map"``), and the closed binomial sums (``route="closed"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import FormulaMismatch, InvalidIndex
from .hopf_maps import phi_f, psi_d
from .kercoker import CokerHClass, project_coker_h
from .linalg_snf import LocalMatrix, PresentedGroup, cokernel_presentation, kernel_presentation
from .local_arith import pow2, residue_int, val3
from .rings import GeneratorIndex, ell0, ell1, j_mf, mf_monomial, mf_to_b

ZERO = "zero"
NONZERO = "nonzero"


def block_order_exp(eps: int, m: int) -> int:
    if eps == 0:
        if m == 0:
            raise InvalidIndex("W_{0,0} is the degree-zero part; use the j-power routines")
        return val3(m) + 1
    return val3(2 * m + 1) + 1


def top_row(m: int) -> int:
    """First index of a_{i,m-i} for row 0, namely floor((m-1)/2)."""
    return (m - 1) // 2


def row_of(m: int, i: int) -> int:
    """Row w of the generator a_{i,m-i} / b_{i,m-i} with i < m - i."""
    return top_row(m) - i


def ell(eps: int, m: int) -> int:
    return ell0(m) if eps == 0 else ell1(m)


# -- delta^0 and delta^1 on powers of j ----------------------------------------


def _delta0_closed(k: int, w_max: int) -> list:
    out = []
    for v in range(1, w_max + 1):
        if v <= k:
            c = Fraction(comb(3 * k, 2 * k + v), 4**v) - comb(3 * k, 2 * k - v) * 4**v
        elif v <= 2 * k:
            c = Fraction(-comb(3 * k, 2 * k - v) * 4**v)
        else:
            c = Fraction(0)
        out.append(c * 2 ** (8 * k))
    return out


def _jpow_b(k: int):
    return mf_to_b(j_mf(k))


def _free_coords(x, w_max: int, what: str) -> list:
    """Coordinates of x on a_{-1,1}, ..., a_{-w_max,w_max}; x must lie in their span."""
    coords = []
    for v in range(1, w_max + 1):
        c, c_neg = x.coeff((-v, v, 0)), x.coeff((v, -v, 0))
        if c != -c_neg:
            raise FormulaMismatch(f"{what} is not in ker h: a_[-{v},{v}] asymmetric")
        coords.append(c)
    stray = [k for k in x.terms if not (k[2] == 0 and k[0] == -k[1] and 1 <= abs(k[0]) <= w_max)]
    if stray:
        raise FormulaMismatch(f"{what} has terms outside ker h: {stray[:3]}")
    return coords


def delta0_column(k: int, w_max: int | None = None) -> list:
    """Coordinates of delta^0(j^k) on a_{-1,1}, ..., a_{-w_max,w_max}.

    The closed binomial formula is compared with phi_q - phi_f applied to j^k;
    a disagreement raises :class:`FormulaMismatch`.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    w_max = 2 * k if w_max is None else w_max
    closed = _delta0_closed(k, w_max)
    x = _jpow_b(k)
    image = psi_d(x) - x
    mapped = _free_coords(image, max(w_max, 2 * k), f"delta0(j^{k})")[:w_max]
    if mapped != closed:
        raise FormulaMismatch(f"delta0(j^{k}): closed {closed} != mapped {mapped}")
    return closed


def delta1_on_jpow(k: int, w_max: int | None = None) -> list:
    """Free coordinates of delta^1(j^k) in coker h; equals half of delta0_column."""
    w_max = 2 * k if w_max is None else w_max
    half = [c / 2 for c in delta0_column(k, w_max)]
    cls = project_coker_h(-phi_f(_jpow_b(k)))
    if cls.a_torsion or cls.b_torsion:
        raise FormulaMismatch(f"delta1(j^{k}) has torsion components")
    mapped = [cls.free_part.get(v, Fraction(0)) for v in range(1, w_max + 1)]
    extra = [v for v in cls.free_part if v > w_max and v <= 2 * k]
    if mapped != half or (w_max >= 2 * k and extra):
        raise FormulaMismatch(f"delta1(j^{k}): half of delta0 {half} != mapped {mapped}")
    return half


# -- delta^1 on the torsion blocks ------------------------------------------------


def _add_swapped(acc: dict, i: int, j: int, c: Fraction):
    """Add c * a_{i,j} using a_{i,j} = -a_{j,i} and a_{i,i} = 0."""
    if i == j or not c:
        return
    if i > j:
        i, j, c = j, i, -c
    acc[(i, j)] = acc.get((i, j), Fraction(0)) + c


def delta1_closed(n: int, eps: int, l: int) -> dict:
    """delta^1(c4^n c6^eps Delta^l) from the binomial sums, as {(i, j): coeff}, i < j.

    eps = 0:  -2^(3n-3l-1) sum_r C(n,r) 4^-r a_{2l+r, n+l-r}
    eps = 1:  -2^(3n-3l+1) sum_r C(n,r) 4^-r (b_{2l+r+1, n+l-r} - 8 b_{2l+r, n+l-r+1})
    """
    acc: dict = {}
    if eps == 0:
        pre = -pow2(3 * n - 3 * l - 1)
        for r in range(n + 1):
            _add_swapped(acc, 2 * l + r, n + l - r, pre * comb(n, r) / Fraction(4) ** r)
    else:
        pre = -pow2(3 * n - 3 * l + 1)
        for r in range(n + 1):
            c = pre * comb(n, r) / Fraction(4) ** r
            _add_swapped(acc, 2 * l + r + 1, n + l - r, c)
            _add_swapped(acc, 2 * l + r, n + l - r + 1, -8 * c)
    return {k: v for k, v in acc.items() if v}


def delta1_mapped(n: int, eps: int, l: int) -> CokerHClass:
    """delta^1(c4^n c6^eps Delta^l) = class of -phi_f(x) in coker h."""
    return project_coker_h(-phi_f(mf_to_b(mf_monomial(n, eps, l))))


def delta1_column(eps: int, m: int, v: int, rows: int, route: str = "map") -> list:
    """Column v of the (eps, m) block: residues mod 3^e on rows 0..rows-1."""
    e = block_order_exp(eps, m)
    fam = "C" if eps == 0 else "D"
    n, _, l = GeneratorIndex(fam, m, v).mf_exponents()
    col = [0] * rows
    if route == "map":
        cls = delta1_mapped(n, eps, l)
        table = cls.a_torsion if eps == 0 else cls.b_torsion
        for (i, j), r in table.items():
            w = row_of(m, i)
            if i + j != m:
                raise FormulaMismatch(f"delta1 column leaves degree {m}")
            if w < rows:
                col[w] = r.value
    elif route == "closed":
        for (i, j), c in delta1_closed(n, eps, l).items():
            w = row_of(m, i)
            if w < rows:
                col[w] = residue_int(c, e)
    else:
        raise ValueError(f"unknown route {route!r}")
    return col


def _support_rows(eps: int, m: int, v: int) -> list:
    """All rows w with a nonzero entry in column v (no truncation)."""
    e = block_order_exp(eps, m)
    n, _, l = GeneratorIndex("C" if eps == 0 else "D", m, v).mf_exponents()
    return sorted(
        row_of(m, i) for (i, j), c in delta1_closed(n, eps, l).items() if residue_int(c, e)
    )


# -- blocks -------------------------------------------------------------------


def default_columns(m: int) -> int:
    return max(2 * abs(m) + 8, 24)


@dataclass
class DegreeBlock:
    """The matrix of delta^1 on W_{eps,m}, truncated to a finite window."""

    eps: int
    m: int
    v_max: int
    w_max: int
    order_exp: int
    matrix: LocalMatrix

    @property
    def t_degree(self) -> int:
        return 4 * self.m + 2 * self.eps

    def column(self, v: int) -> list:
        return [int(x) for x in self.matrix.entries[:, v]]

    def leading_row(self, v: int):
        """Largest row with a nonzero entry in column v (the least first index)."""
        col = self.column(v)
        nz = [w for w, x in enumerate(col) if x]
        return nz[-1] if nz else None

    def is_echelon(self) -> bool:
        """Unit leading entries at strictly increasing rows (zero columns allowed)."""
        last = -1
        for v in range(self.v_max):
            w = self.leading_row(v)
            if w is None:
                continue
            if self.column(v)[w] % 3 == 0 or w <= last:
                return False
            last = w
        return True

    def to_csv(self) -> str:
        return self.matrix.to_csv()

    def to_json(self):
        return {
            "eps": self.eps,
            "m": self.m,
            "t": self.t_degree,
            "order_exp": self.order_exp,
            "window": [self.v_max, self.w_max],
            "rows": [str(x) for x in self.matrix.row_labels],
            "cols": [str(x) for x in self.matrix.col_labels],
            "entries": [[int(x) for x in row] for row in self.matrix.entries],
        }


def build_block(eps: int, m: int, v_max: int | None = None, w_max: int | None = None, route="map"):
    """Assemble the (eps, m) block of delta^1 over columns 0..v_max-1.

    By default the window has rows up to the largest row hit by any included
    column, so no nonzero entry of an included column is cut off.
    """
    if eps not in (0, 1):
        raise InvalidIndex("eps must be 0 or 1")
    e = block_order_exp(eps, m)
    v_max = default_columns(m) if v_max is None else v_max
    if v_max < 1:
        raise InvalidIndex("window must be positive")
    if w_max is None:
        w_max = 1 + max((max(_support_rows(eps, m, v), default=-1) for v in range(v_max)), default=0)
        w_max = max(w_max, 1)
    cols = [delta1_column(eps, m, v, w_max, route) for v in range(v_max)]
    entries = np.array(cols, dtype=object).T.reshape(w_max, v_max)
    row_fam, col_fam = ("A", "C") if eps == 0 else ("B", "D")
    matrix = LocalMatrix(
        entries,
        [e] * w_max,
        [e] * v_max,
        [GeneratorIndex(row_fam, m, w) for w in range(w_max)],
        [GeneratorIndex(col_fam, m, v) for v in range(v_max)],
    )
    return DegreeBlock(eps, m, v_max, w_max, e, matrix)


def two_route_agreement(eps: int, m: int, v_max: int) -> bool:
    """Raise FormulaMismatch unless the mapped and closed-form blocks agree."""
    a = build_block(eps, m, v_max, route="map")
    b = build_block(eps, m, v_max, w_max=a.w_max, route="closed")
    if not (a.matrix.entries == b.matrix.entries).all():
        raise FormulaMismatch(f"routes disagree on block ({eps}, {m})")
    return True


def leading_term_expected(eps: int, m: int, v: int):
    """Predicted leading row of column v, or ``ZERO`` / ``NONZERO`` for the exceptional columns."""
    L = ell(eps, m)
    W = top_row(m)
    positive = m > 0
    if not positive:
        return W - 2 * L + 2 * v
    if v < L:
        return W - L + v
    if v == L:
        if eps == 1 and m % 27 == 13:
            return NONZERO
        return ZERO
    return W - 2 * L + 2 * v


# -- kernels, cokernels, stability -----------------------------------------------


@dataclass
class StabilityReport:
    """Comparison of a block's presentations at a window and at the doubled window."""

    eps: int
    m: int
    window: int
    kernel: PresentedGroup
    cokernel: PresentedGroup
    kernel_doubled: PresentedGroup
    cokernel_doubled: PresentedGroup
    stable: bool
    provenance: str
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "eps": self.eps,
            "m": self.m,
            "window": self.window,
            "stable": self.stable,
            "provenance": self.provenance,
            "kernel": self.kernel.to_json(),
            "cokernel": self.cokernel.to_json(),
            "notes": self.notes,
        }


def _coker_signature(P: PresentedGroup, rows: int):
    gens = sorted(
        (s.label, s.order_exp) for s in P.summands if all(g.v < rows for g in s.vector)
    )
    rels = sorted(
        tuple(sorted((str(k), int(c)) for k, c in r.items()))
        for r in P.relations
        if all(g.v < rows for g in r)
    )
    return gens, rels


def _ker_signature(P: PresentedGroup):
    return sorted((s.label, s.order_exp) for s in P.summands)


_ANALYSIS_CACHE: dict = {}


def analyze_block(eps: int, m: int, v_max: int | None = None) -> StabilityReport:
    """Kernel and cokernel of a block with a window-doubling stability check."""
    v_max = default_columns(m) if v_max is None else v_max
    key = (eps, m, v_max)
    if key in _ANALYSIS_CACHE:
        return _ANALYSIS_CACHE[key]
    small = build_block(eps, m, v_max)
    big = build_block(eps, m, 2 * v_max)
    ker, cok = kernel_presentation(small.matrix), cokernel_presentation(small.matrix)
    ker2, cok2 = kernel_presentation(big.matrix), cokernel_presentation(big.matrix)
    stable = _ker_signature(ker) == _ker_signature(ker2) and _coker_signature(
        cok, small.w_max
    ) == _coker_signature(cok2, small.w_max)
    notes = []
    if small.is_echelon() and big.is_echelon():
        provenance = "exact"
    elif stable:
        provenance = "window-stable"
    else:
        provenance = "unstable"
    if eps == 1 and m > 0 and m % 27 == 13:
        notes.append("U-flagged degree: no closed form for this block")
    report = StabilityReport(eps, m, v_max, ker, cok, ker2, cok2, stable, provenance, notes)
    _ANALYSIS_CACHE[key] = report
    return report


def block_kernel(eps: int, m: int, v_max: int | None = None):
    r = analyze_block(eps, m, v_max)
    return r.kernel, r


def block_cokernel(eps: int, m: int, v_max: int | None = None):
    r = analyze_block(eps, m, v_max)
    return r.cokernel, r


def expected_cokernel_rows(eps: int, m: int, rows: int) -> list:
    """Row indices (below ``rows``) of the cokernel generators predicted by the echelon shape."""
    L, W = ell(eps, m), top_row(m)
    if m > 0:
        keep = list(range(0, W - L)) + [W] + [W + k for k in range(1, rows, 2)]
    else:
        keep = list(range(0, W - 2 * L)) + [W - 2 * L + k for k in range(1, rows, 2)]
    return sorted({w for w in keep if 0 <= w < rows})


def u_windows(m_range, v_max: int | None = None) -> list:
    """Window presentations of U^1 and U^2 for the m = 13 mod 27 (m > 0) degrees in ``m_range``.

    U^1 is the kernel of the block.  U^2 is the part of the cokernel that
    carries relations, i.e. the cokernel with its split summands removed.
    """
    out = []
    for m in m_range:
        if m <= 0 or m % 27 != 13:
            continue
        rep = analyze_block(1, m, v_max)
        u2 = PresentedGroup(
            rep.cokernel.relation_summands,
            rep.cokernel.relations,
            _u2_invariants(rep.cokernel),
        )
        out.append((m, rep.kernel, u2, rep))
    return out


def _u2_invariants(P: PresentedGroup) -> list:
    if not P.relations:
        return []
    gens = P.relation_summands
    labels = [next(iter(s.vector)) for s in gens]
    entries = [[rel.get(lab, 0) for rel in P.relations] for lab in labels]
    M = LocalMatrix(entries, [s.order_exp for s in gens], None, labels)
    return cokernel_presentation(M).invariants


def f1(m: int) -> Fraction:
    """f(1, m) = 3(1 + 2^(4-2m)) - m(2 + 2^(4-2m)), the b_{1,m-1} coefficient up to a unit."""
    return 3 * (1 + pow2(4 - 2 * m)) - m * (2 + pow2(4 - 2 * m))


def f1_residue(m: int) -> int:
    """f(1, m) in Z_(3)/(6m + 3) = Z/3^v3(6m + 3), as a signed representative."""
    mod = 3 ** val3(6 * m + 3)
    x = f1(m)
    r = x.numerator * pow(x.denominator, -1, mod) % mod
    return r - mod if 2 * r > mod else r


def delta1_c4_power(n: int) -> CokerHClass:
    """delta^1(c4^n) as a class in coker h."""
    return delta1_mapped(n, 0, 0)


def delta1_c4_power_c6(m: int) -> CokerHClass:
    """delta^1(c4^(m-1) c6) as a class in coker h."""
    return delta1_mapped(m - 1, 1, 0)
