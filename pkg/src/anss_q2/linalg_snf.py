"""Smith normal form over Z/3^K and Z_(3), with labelled kernel and cokernel presentations.

A :class:`LocalMatrix` describes a homomorphism

    (+)_c Z/3^{f_c}  -->  (+)_r Z/3^{e_r}

where an order of ``None`` means a free Z_(3) summand.  Torsion entries are
plain Python integers; free computations use :class:`fractions.Fraction`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import SizeLimitExceeded
from .local_arith import residue_int, val3

FREE = None
ORACLE_LIMIT = 3**12


def _int_dtype(K):
    # entries < 3^K and products < 3^(2K) must fit in int64
    return np.int64 if 2 * K * 1.585 < 62 else object


def _signed(x, mod):
    x %= mod
    return x - mod if 2 * x > mod else x


@dataclass
class LocalMatrix:
    """A matrix with per-row and per-column cyclic orders and labels.

    Args:
        entries: 2-d array-like of ints or Fractions.
        row_orders: order exponent per row (``None`` for free).
        col_orders: order exponent per column; defaults to the maximal row order
            (or free if some row is free).
        row_labels, col_labels: hashable labels; default to indices.
    """

    entries: np.ndarray
    row_orders: list
    col_orders: list = None
    row_labels: list = None
    col_labels: list = None

    def __post_init__(self):
        arr = np.array(self.entries, dtype=object)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(len(self.row_orders), 0)
        if arr.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        nr, nc = arr.shape
        if len(self.row_orders) != nr:
            raise ValueError("row_orders length does not match the matrix")
        if self.col_orders is None:
            finite = [e for e in self.row_orders if e is not None]
            default = None if (len(finite) < nr or not finite) else max(finite)
            self.col_orders = [default] * nc
        if len(self.col_orders) != nc:
            raise ValueError("col_orders length does not match the matrix")
        self.row_labels = list(self.row_labels) if self.row_labels is not None else list(range(nr))
        self.col_labels = list(self.col_labels) if self.col_labels is not None else list(range(nc))
        if len(set(self.row_labels)) != nr or len(set(self.col_labels)) != nc:
            raise ValueError("labels must be unique")
        for r, e in enumerate(self.row_orders):
            for c in range(nc):
                x = arr[r, c]
                arr[r, c] = Fraction(x) if e is None else residue_int(x, e)
        self.entries = arr

    @property
    def shape(self):
        return self.entries.shape

    @property
    def all_torsion(self):
        return all(e is not None for e in self.row_orders) and all(
            f is not None for f in self.col_orders
        )

    @property
    def modulus_exp(self):
        finite = [e for e in self.row_orders + self.col_orders if e is not None]
        return max(finite, default=0)

    def column(self, c):
        return {self.row_labels[r]: self.entries[r, c] for r in range(self.shape[0]) if self.entries[r, c]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row_label", "order"] + [str(c) for c in self.col_labels])
        w.writerow(["col_order", ""] + ["free" if f is None else f for f in self.col_orders])
        for r in range(self.shape[0]):
            e = self.row_orders[r]
            w.writerow([str(self.row_labels[r]), "free" if e is None else e] + [str(x) for x in self.entries[r]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LocalMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        header, col_order_row, body = rows[0], rows[1], rows[2:]
        col_labels = header[2:]
        col_orders = [None if x == "free" else int(x) for x in col_order_row[2:]]
        row_labels = [r[0] for r in body]
        row_orders = [None if r[1] == "free" else int(r[1]) for r in body]
        entries = [[Fraction(x) for x in r[2:]] for r in body]
        if not body:
            entries = np.zeros((0, len(col_labels)), dtype=object)
        return cls(entries, row_orders, col_orders, row_labels, col_labels)


# -- Smith normal form -------------------------------------------------------


def _valuation_mod(arr, K):
    """Element-wise 3-adic valuation of residues mod 3^K (K for zero)."""
    out = np.full(arr.shape, K, dtype=np.int64)
    rest = arr.copy()
    nz = rest != 0
    out[nz] = 0
    for k in range(1, K):
        nz &= (rest % 3) == 0
        if not nz.any():
            break
        rest = np.where(nz, rest // 3, rest)
        out[nz] = k
    return out


def _snf_mod(A, K, track=True):
    mod = 3**K
    dt = _int_dtype(K)
    A = np.array(A, dtype=object) % mod
    A = A.astype(dt)
    m, n = A.shape
    U = np.eye(m, dtype=dt)
    V = np.eye(n, dtype=dt)
    for t in range(min(m, n)):
        sub = A[t:, t:]
        vals = _valuation_mod(sub, K)
        k = int(vals.min()) if vals.size else K
        if k >= K:
            break
        p, q = np.argwhere(vals == k)[0]
        p += t
        q += t
        if p != t:
            A[[t, p]] = A[[p, t]]
            if track:
                U[[t, p]] = U[[p, t]]
        if q != t:
            A[:, [t, q]] = A[:, [q, t]]
            if track:
                V[:, [t, q]] = V[:, [q, t]]
        pk = 3**k
        unit = int(A[t, t]) // pk
        uinv = pow(unit, -1, mod)
        A[t] = (A[t] * uinv) % mod
        if track:
            U[t] = (U[t] * uinv) % mod
        f = A[t + 1 :, t] // pk
        if f.any():
            A[t + 1 :] = (A[t + 1 :] - np.outer(f, A[t])) % mod
            if track:
                U[t + 1 :] = (U[t + 1 :] - np.outer(f, U[t])) % mod
        gcol = A[t, t + 1 :] // pk
        if gcol.any():
            A[t, t + 1 :] = 0
            if track:
                V[:, t + 1 :] = (V[:, t + 1 :] - np.outer(V[:, t], gcol)) % mod
    return A, U, V


def _snf_exact(A, track=True):
    A = [[Fraction(x) for x in row] for row in np.asarray(A, dtype=object).tolist()]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    V = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    v = val3(A[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        k, p, q = best
        A[t], A[p] = A[p], A[t]
        U[t], U[p] = U[p], U[t]
        for row in A:
            row[t], row[q] = row[q], row[t]
        for row in V:
            row[t], row[q] = row[q], row[t]
        scale = Fraction(3) ** k / A[t][t]
        A[t] = [x * scale for x in A[t]]
        U[t] = [x * scale for x in U[t]]
        piv = A[t][t]
        for i in range(t + 1, m):
            f = A[i][t] / piv
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[t])]
                U[i] = [a - f * b for a, b in zip(U[i], U[t])]
        for j in range(t + 1, n):
            f = A[t][j] / piv
            if f:
                A[t][j] = Fraction(0)
                for row in V:
                    row[j] -= f * row[t]
    to_arr = lambda rows, r, c: np.array(rows, dtype=object).reshape(r, c)
    return to_arr(A, m, n), to_arr(U, m, m), to_arr(V, n, n)


def smith_normal_form(M, K=None, track=True):
    """Smith normal form ``U @ M @ V == D``.

    With ``K`` an integer, arithmetic is modulo 3^K and the diagonal of ``D``
    consists of powers of 3 (zero meaning 3^K) in ascending order.  With
    ``K=None`` the computation is exact over Z_(3).  ``M`` may be a
    :class:`LocalMatrix` (whose row orders are then ignored) or an array.

    Pivots are chosen with minimal valuation, then smallest row, then
    smallest column.
    """
    arr = M.entries if isinstance(M, LocalMatrix) else np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    if K is None:
        return _snf_exact(arr, track)
    return _snf_mod(arr, K, track)


def diagonal_exponents(D, K=None):
    """Valuations of the diagonal of an SNF; ``None`` marks a zero (free or 3^K) entry."""
    out = []
    for i in range(min(D.shape)):
        x = D[i, i]
        if K is not None:
            x = int(x) % 3**K
        out.append(None if x == 0 else val3(x))
    return out


# -- presentations -----------------------------------------------------------


def format_vector(vec, mod=None):
    """Render {label: coeff} as e.g. '-27*D[13,3]+D[13,4]'."""
    parts = []
    for label, c in vec.items():
        c = _signed(int(c), mod) if mod is not None and Fraction(c).denominator == 1 else c
        if c == 0:
            continue
        if c == 1:
            parts.append(f"+{label}")
        elif c == -1:
            parts.append(f"-{label}")
        else:
            parts.append(f"{'+' if c > 0 else ''}{c}*{label}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else (text or "0")


@dataclass
class Summand:
    """A cyclic summand: ``order_exp`` (``None`` for free) and a labelled generator."""

    order_exp: int | None
    vector: dict

    @property
    def label(self):
        mod = None if self.order_exp is None else 3**self.order_exp
        return format_vector(self.vector, mod)

    def to_json(self):
        return {"order_exp": "free" if self.order_exp is None else self.order_exp, "generator": self.label}


@dataclass
class PresentedGroup:
    """A finitely presented Z_(3)-module.

    ``summands`` are labelled generators with their orders.  When
    ``relations`` is empty the group is their direct sum; otherwise it is the
    quotient of that sum by the listed relation vectors.  ``invariants`` is
    the abstract isomorphism type, as sorted order exponents (``None`` for
    free) computed by Smith normal form.
    """

    summands: list = field(default_factory=list)
    relations: list = field(default_factory=list)
    invariants: list = field(default_factory=list)

    @property
    def is_trivial(self):
        return not self.invariants

    @property
    def split_summands(self):
        used = {lab for rel in self.relations for lab, c in rel.items() if c}
        return [s for s in self.summands if not (set(s.vector) & used)]

    @property
    def relation_summands(self):
        used = {lab for rel in self.relations for lab, c in rel.items() if c}
        return [s for s in self.summands if set(s.vector) & used]

    def log3_order(self):
        """log_3 of the cardinality, or ``None`` if a free summand is present."""
        if any(e is None for e in self.invariants):
            return None
        return sum(self.invariants)

    def order_exps(self):
        return sorted(self.invariants, key=lambda e: (e is None, e or 0))

    def to_json(self):
        return {
            "summands": [s.to_json() for s in self.summands],
            "relations": [format_vector(r) for r in self.relations],
            "invariants": ["free" if e is None else e for e in self.order_exps()],
        }

    def __repr__(self):
        inv = " + ".join("Z_(3)" if e is None else f"Z/3^{e}" for e in self.order_exps()) or "0"
        rel = f"; relations {[format_vector(r) for r in self.relations]}" if self.relations else ""
        return f"PresentedGroup({inv}{rel})"


def _canonical_generator(vec, orders):
    """Divide out the unit part of the first coordinate of minimal valuation."""
    best = None
    for c, x in vec.items():
        f = orders[c]
        if x % 3**f == 0:
            continue
        v = val3(x)
        if best is None or v < best[0]:
            best = (v, c)
    if best is None:
        return vec
    v, c = best
    unit = (vec[c] // 3**v) % 3 ** orders[c]
    N = max(orders.values())
    uinv = pow(unit, -1, 3**N)
    return {k: (x * uinv) % 3 ** orders[k] for k, x in vec.items() if (x * uinv) % 3 ** orders[k]}


def _subgroup_presentation(gens, col_orders):
    """Decompose the subgroup of (+)Z/3^{f_c} generated by integer column vectors."""
    n = len(col_orders)
    if not gens:
        return []
    N = max(col_orders)
    mod = 3**N
    G = np.array(gens, dtype=object).T.reshape(n, len(gens))
    emb = np.array([[3 ** (N - f)] for f in col_orders], dtype=object)
    D, _, V = _snf_mod(G * emb, N)
    out = []
    Vint = np.array(V, dtype=object)
    for i, d in enumerate(diagonal_exponents(D, N)):
        if d is None:
            continue
        vec = (G.dot(Vint[:, i])) % mod
        out.append((N - d, [int(x) % 3**f for x, f in zip(vec, col_orders)]))
    return out


def kernel_presentation(M: LocalMatrix) -> PresentedGroup:
    """Kernel of M as labelled cyclic summands.

    All-torsion matrices are handled modulo 3^N (N the largest order, rows
    embedded by 3^(N - e_r)); all-free matrices exactly over Z_(3).
    """
    nr, nc = M.shape
    if nc == 0:
        return PresentedGroup()
    if all(e is None for e in M.row_orders) and all(f is None for f in M.col_orders):
        D, _, V = smith_normal_form(M.entries, None)
        rank = sum(1 for d in diagonal_exponents(D) if d is not None)
        summands = []
        for i in range(rank, nc):
            vec = {M.col_labels[c]: V[c, i] for c in range(nc) if V[c, i]}
            summands.append(Summand(None, vec))
        return PresentedGroup(summands, [], [None] * len(summands))
    if not M.all_torsion:
        raise ValueError("kernel of a mixed free/torsion matrix is not supported")
    N = M.modulus_exp
    mod = 3**N
    scaled = np.array(
        [[int(M.entries[r, c]) * 3 ** (N - M.row_orders[r]) for c in range(nc)] for r in range(nr)],
        dtype=object,
    ).reshape(nr, nc)
    D, _, V = _snf_mod(scaled, N)
    diag = diagonal_exponents(D, N) + [None] * (nc - min(nr, nc))
    gens = []
    for i in range(nc):
        a = N if diag[i] is None else diag[i]
        # y_i ranges over 3^(N - a) Z
        if a == 0:
            continue
        gens.append([int(V[c, i]) * 3 ** (N - a) % mod for c in range(nc)])
    orders = dict(zip(M.col_labels, M.col_orders))
    summands = []
    for order, vec in _subgroup_presentation(gens, M.col_orders):
        if order <= 0:
            continue
        labelled = {M.col_labels[c]: x for c, x in enumerate(vec) if x}
        summands.append(Summand(order, _canonical_generator(labelled, orders)))
    summands.sort(key=lambda s: (-s.order_exp, s.label))
    return PresentedGroup(summands, [], sorted(s.order_exp for s in summands))


def cokernel_invariants(M: LocalMatrix) -> list:
    """Order exponents of coker M (``None`` for free) via SNF of [M | diag(3^e_r)]."""
    nr, nc = M.shape
    if nr == 0:
        return []
    rel = np.zeros((nr, nr), dtype=object)
    for r, e in enumerate(M.row_orders):
        rel[r, r] = 0 if e is None else 3**e
    aug = np.concatenate([M.entries.astype(object), rel], axis=1) if nc else rel
    if all(e is not None for e in M.row_orders):
        K = max(M.row_orders) + 1
        D, _, _ = _snf_mod(aug, K, track=False)
        diag = diagonal_exponents(D, K)
    else:
        D, _, _ = _snf_exact(aug, track=False)
        diag = diagonal_exponents(D)
    diag += [None] * (nr - len(diag))
    return sorted((d for d in diag if d != 0), key=lambda e: (e is None, e or 0))


def cokernel_presentation(M: LocalMatrix) -> PresentedGroup:
    """Cokernel of M as surviving row generators plus relation vectors.

    Columns with a unit entry are used, in column order, to eliminate the
    largest-index row holding a unit.  Rows never eliminated are the
    generators; columns left with no unit entry are the relations.
    """
    nr, nc = M.shape
    orders = list(M.row_orders)
    exact = any(e is None for e in orders)
    N = None if exact else max(orders, default=0)

    def red(r, x):
        return x if orders[r] is None else int(x) % 3 ** orders[r]

    def is_unit(x):
        return x != 0 and val3(x) == 0

    cols = [[red(r, M.entries[r, c]) for r in range(nr)] for c in range(nc)]
    alive = [True] * nr
    while True:
        pick = None
        for ci, col in enumerate(cols):
            units = [r for r in range(nr) if alive[r] and is_unit(col[r])]
            if units:
                pick = (ci, units[-1])
                break
        if pick is None:
            break
        ci, p = pick
        piv = cols.pop(ci)
        u = piv[p]
        uinv = (1 / Fraction(u)) if exact else pow(int(u), -1, 3**N)
        for col in cols:
            f = col[p] * uinv
            if f:
                for r in range(nr):
                    if alive[r]:
                        col[r] = red(r, col[r] - f * piv[r])
                col[p] = 0
        if orders[p] is not None:
            extra = [0] * nr
            for r in range(nr):
                if alive[r] and r != p:
                    extra[r] = red(r, -(3 ** orders[p]) * uinv * piv[r])
            if any(extra):
                cols.append(extra)
        alive[p] = False
        for col in cols:
            col[p] = 0
    relations = []
    gen_orders = {r: orders[r] for r in range(nr) if alive[r]}
    for col in cols:
        support = [r for r in range(nr) if alive[r] and col[r]]
        if len(support) == 1:
            # c * x_r = 0 only lowers the order of x_r
            r = support[0]
            v = val3(col[r])
            gen_orders[r] = v if gen_orders[r] is None else min(gen_orders[r], v)
        elif support:
            relations.append({M.row_labels[r]: col[r] for r in support})
    summands = [Summand(e, {M.row_labels[r]: 1}) for r, e in gen_orders.items() if e != 0]
    return PresentedGroup(summands, relations, cokernel_invariants(M))


def in_image(M: LocalMatrix, y) -> bool:
    """Whether the vector ``y`` (indexed like the rows) lies in the image of M."""
    col = np.array(y, dtype=object).reshape(-1, 1)
    aug = LocalMatrix(
        np.concatenate([M.entries, col], axis=1), M.row_orders, M.col_orders + [M.modulus_exp or None]
    )
    return cokernel_invariants(aug) == cokernel_invariants(M)


def brute_force_oracle(M, K):
    """Exhaustively enumerate ker and coker of an integer matrix over Z/3^K.

    Returns ``(kernel_vectors, cokernel_size)`` where ``kernel_vectors`` is a
    set of tuples.
    """
    A = np.array(M, dtype=np.int64) % 3**K
    nr, nc = A.shape
    if 3 ** (K * nc) > ORACLE_LIMIT or 3 ** (K * nr) > ORACLE_LIMIT:
        raise SizeLimitExceeded(f"3^({K}*{max(nr, nc)}) exceeds the oracle limit")
    mod = 3**K
    xs = np.array(list(product(range(mod), repeat=nc)), dtype=np.int64).reshape(-1, nc)
    imgs = (xs @ A.T) % mod
    kernel = {tuple(int(v) for v in x) for x, im in zip(xs, imgs) if not im.any()}
    image_size = len({tuple(im) for im in imgs.tolist()})
    return kernel, mod**nr // image_size
