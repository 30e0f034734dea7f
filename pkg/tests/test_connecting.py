from fractions import Fraction

import pytest

from anss_q2.connecting import (
    NONZERO,
    ZERO,
    analyze_block,
    block_order_exp,
    build_block,
    delta0_column,
    delta1_c4_power,
    delta1_c4_power_c6,
    delta1_closed,
    delta1_column,
    delta1_on_jpow,
    expected_cokernel_rows,
    f1_residue,
    leading_term_expected,
    two_route_agreement,
    u_windows,
)
from anss_q2.errors import InvalidIndex
from anss_q2.linalg_snf import LocalMatrix
from anss_q2.local_arith import is_unit, val3

M13_COLUMNS = [
    [0, 8, 80, 0, 0, 0, 0],
    [78, 21, 5, 62, 0, 0, 0],
    [31, 17, 79, 56, 44, 0, 0],
    [39, 72, 6, 19, 72, 26, 0],
]


def unit_multiple(col, ref, mod):
    return any(u % 3 and all((u * r - c) % mod == 0 for c, r in zip(col, ref)) for u in range(1, mod))


def test_delta0_examples():
    assert delta0_column(0) == []
    assert delta0_column(1) == [-47 * 2**6, -(2**12)]
    assert delta0_column(0, 3) == [0, 0, 0]


def test_delta1_on_jpow_examples():
    assert delta1_on_jpow(1) == [-47 * 2**5, -(2**11)]
    assert delta1_on_jpow(0, 2) == [0, 0]
    for k in range(2, 11):
        assert delta1_on_jpow(k) == [c / 2 for c in delta0_column(k)]


@pytest.mark.parametrize("k", [1, 5, 20])
def test_delta0_unit_at_row_2k(k):
    col = delta0_column(k)
    assert col[2 * k - 1] == -(2 ** (12 * k))
    assert is_unit(col[-1])


def test_block_order():
    assert block_order_exp(1, 13) == 4
    assert block_order_exp(0, 9) == 3
    assert block_order_exp(1, -2) == 2
    with pytest.raises(InvalidIndex):
        block_order_exp(0, 0)
    with pytest.raises(InvalidIndex):
        build_block(0, 0)


def test_m13_printed_columns():
    blk = build_block(1, 13, 12)
    assert blk.order_exp == 4
    for v, ref in enumerate(M13_COLUMNS):
        assert unit_multiple(blk.column(v)[:7], ref, 81)
    assert blk.column(4)[:7] == [0, 0, 0, 27, 0, 54, 0]


def test_m13_kernel():
    rep = analyze_block(1, 13, 12)
    assert [(s.order_exp, s.label) for s in rep.kernel.summands] == [(4, "-27*D[13,3]+D[13,4]")]


def test_m13_cokernel_split_summands():
    labels = [s.label for s in analyze_block(1, 13, 12).cokernel.split_summands]
    for lab in ("B[13,6]", "B[13,7]", "B[13,9]", "B[13,11]"):
        assert lab in labels


def test_delta1_of_c4_is_zero():
    assert not any(delta1_column(0, 1, 0, 4))
    assert not delta1_c4_power(1)


def test_two_routes_agree_on_small_blocks():
    for eps, m in [(0, 1), (0, -4), (1, 4), (1, -3), (1, 13), (0, 9)]:
        assert two_route_agreement(eps, m, 10)


def test_closed_formula_at_a_single_monomial():
    # delta^1(c4) from the closed sum: -2^2 (a[0,1] + a[1,0]/4) = -3 a[0,1]
    assert delta1_closed(1, 0, 0) == {(0, 1): Fraction(-3)}


def test_leading_term_predictions():
    assert leading_term_expected(0, 2, 0) == ZERO
    assert leading_term_expected(1, 13, 4) == NONZERO
    assert leading_term_expected(0, -4, 1) == (-5) // 2 + 4 + 2
    blk = build_block(0, -4, 8)
    for v in range(8):
        w = leading_term_expected(0, -4, v)
        assert blk.leading_row(v) == w and is_unit(blk.column(v)[w])


def test_negative_eps0_block_is_echelon():
    blk = build_block(0, -4, 8)
    assert blk.is_echelon()
    rep = analyze_block(0, -4, 8)
    assert rep.kernel.is_trivial
    assert rep.provenance == "exact"


def test_eps0_m_minus_2():
    rep = analyze_block(0, -2)
    assert rep.kernel.is_trivial
    cok = rep.cokernel
    assert all(s.order_exp == 1 for s in cok.summands)
    rows = build_block(0, -2).w_max
    assert sorted(next(iter(s.vector)).v for s in cok.summands) == expected_cokernel_rows(0, -2, rows)


def test_eps1_m4_kernel():
    rep = analyze_block(1, 4)
    assert [(s.label, s.order_exp) for s in rep.kernel.summands] == [("D[4,1]", 3)]


def test_u_windows():
    assert u_windows([]) == []
    assert u_windows(range(1, 13)) == []
    ((m, u1, u2, rep),) = u_windows([13], 12)
    assert m == 13
    assert [s.label for s in u1.summands] == ["-27*D[13,3]+D[13,4]"]
    assert rep.notes


def test_vanishing_examples():
    for n in (1, 2, 3, 27):
        assert not delta1_c4_power(n)
    for m in (1, 2, 12, 14, 27):
        assert not delta1_c4_power_c6(m)
    assert delta1_c4_power_c6(13).b_coeff(1, 12) != 0
    assert delta1_c4_power_c6(40).b_coeff(1, 39) != 0


@pytest.mark.parametrize("m", [1, 4, 13, 40, 121])
def test_f1_3_locally(m):
    assert (f1_residue(m) + 108) % 3 ** val3(6 * m + 3) == 0


def test_block_serialisation():
    blk = build_block(1, 2, 6)
    back = LocalMatrix.from_csv(blk.to_csv())
    assert [[int(x) for x in row] for row in back.entries] == blk.to_json()["entries"]
    assert blk.to_json()["t"] == 10


def test_leading_rows_suite():
    from anss_q2.verify import suite_leading

    res = suite_leading()
    assert res.passed, res.failures[:3]
