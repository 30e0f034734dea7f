import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from anss_q2.errors import SizeLimitExceeded
from anss_q2.linalg_snf import (
    LocalMatrix,
    brute_force_oracle,
    cokernel_invariants,
    cokernel_presentation,
    diagonal_exponents,
    format_vector,
    in_image,
    kernel_presentation,
    smith_normal_form,
)


def mat(rows, K):
    arr = np.array(rows, dtype=object)
    return LocalMatrix(arr, [K] * arr.shape[0])


def check_snf(A, K):
    D, U, V = smith_normal_form(A, K)
    mod = 3**K
    A = np.array(A, dtype=object)
    assert ((U.astype(object) @ A @ V.astype(object) - D.astype(object)) % mod == 0).all()
    off = D.astype(object).copy()
    np.fill_diagonal(off, 0)
    assert not (off % mod).any()
    exps = [3**K if e is None else e for e in diagonal_exponents(D, K)]
    assert exps == sorted(exps)
    return D


def test_snf_diagonal_input():
    D = check_snf([[3, 0], [0, 1]], 2)
    assert diagonal_exponents(D, 2) == [0, 1]


def test_snf_zero():
    D = check_snf([[0]], 2)
    assert diagonal_exponents(D, 2) == [None]


def test_snf_of_the_printed_2x2():
    D = check_snf([[8, 78], [80, 21]], 4)
    assert diagonal_exponents(D, 4) == [0, 1]
    Dx, U, V = smith_normal_form(np.array([[8, 78], [80, 21]], dtype=object))
    assert diagonal_exponents(Dx) == [0, 1]
    assert (U @ np.array([[8, 78], [80, 21]], dtype=object) @ V == Dx).all()


def test_zero_matrix_kernel():
    ker = kernel_presentation(mat(np.zeros((3, 3), dtype=int), 3))
    assert ker.invariants == [3, 3, 3]
    assert cokernel_presentation(mat(np.zeros((3, 3), dtype=int), 3)).invariants == [3, 3, 3]


def test_small_examples():
    ker = kernel_presentation(mat([[3]], 2))
    assert ker.invariants == [1]
    assert ker.summands[0].vector == {0: 3}
    assert cokernel_presentation(mat([[3]], 2)).invariants == [1]
    assert cokernel_presentation(mat([[1, 1], [0, 3]], 2)).log3_order() == 1
    ident = mat(np.eye(3, dtype=int), 2)
    assert kernel_presentation(ident).is_trivial
    assert cokernel_presentation(ident).is_trivial


def test_cokernel_relations_and_folding():
    # columns kill x0 - 3 x1 (both Z/81) and 27 x2
    M = LocalMatrix(np.array([[1, 0], [-3, 0], [0, 27]], dtype=object), [4, 4, 4], row_labels=["x0", "x1", "x2"])
    cok = cokernel_presentation(M)
    assert sorted(cok.invariants) == [3, 4]
    orders = {s.label: s.order_exp for s in cok.summands}
    assert orders == {"x1": 4, "x2": 3}
    assert not cok.relations


def test_cokernel_keeps_non_unit_relations():
    M = LocalMatrix(np.array([[3], [9]], dtype=object), [4, 4], row_labels=["u", "w"])
    cok = cokernel_presentation(M)
    assert cok.relations == [{"u": 3, "w": 9}]
    assert {s.label for s in cok.relation_summands} == {"u", "w"}
    assert cok.log3_order() == 5


def test_in_image():
    M = mat([[1, 0], [-3, 3]], 2)
    assert in_image(M, [1, -3])
    assert in_image(M, [0, 3])
    assert not in_image(M, [0, 1])


def test_free_kernel():
    M = LocalMatrix(np.array([[1, 2, 3]], dtype=object), [None])
    ker = kernel_presentation(M)
    assert ker.invariants == [None, None]
    for s in ker.summands:
        assert sum(int(i + 1) * c for i, c in s.vector.items()) == 0


def test_free_cokernel():
    M = LocalMatrix(np.array([[3], [0]], dtype=object), [None, None])
    assert cokernel_invariants(M) == [1, None]


def test_format_vector():
    assert format_vector({"D[13,3]": -27, "D[13,4]": 1}) == "-27*D[13,3]+D[13,4]"
    assert format_vector({"x": 80}, 81) == "-x"
    assert format_vector({}) == "0"


def test_csv_round_trip():
    M = LocalMatrix(np.array([[1, 5], [0, 3]], dtype=object), [2, 1], [2, 2], ["a", "b"], ["c", "d"])
    back = LocalMatrix.from_csv(M.to_csv())
    assert back.row_orders == M.row_orders and back.col_orders == M.col_orders
    assert back.row_labels == M.row_labels and back.col_labels == M.col_labels
    assert (back.entries == M.entries).all()


def test_shape_validation():
    with pytest.raises(ValueError):
        LocalMatrix(np.zeros((2, 2), dtype=int), [1])
    with pytest.raises(ValueError):
        LocalMatrix(np.zeros((2, 2), dtype=int), [1, 1], row_labels=["a", "a"])


def test_oracle_limit():
    with pytest.raises(SizeLimitExceeded):
        brute_force_oracle(np.zeros((5, 5), dtype=int), 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_against_exhaustive_oracle(K, data):
    nmax = {1: 4, 2: 3, 3: 2}[K]
    nr = data.draw(st.integers(1, nmax))
    nc = data.draw(st.integers(1, nmax))
    A = data.draw(arrays(np.int64, (nr, nc), elements=st.integers(0, 3**K - 1)))
    kernel, coker = brute_force_oracle(A, K)
    M = mat(A, K)
    assert 3 ** kernel_presentation(M).log3_order() == len(kernel)
    assert 3 ** cokernel_presentation(M).log3_order() == coker
    check_snf(A, K)


@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, (3, 3), elements=st.integers(0, 26)))
def test_random_3x3_mod_27(A):
    kernel, coker = brute_force_oracle(A, 3)
    M = mat(A, 3)
    assert 3 ** kernel_presentation(M).log3_order() == len(kernel)
    assert 3 ** cokernel_presentation(M).log3_order() == coker


@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, (3, 4), elements=st.integers(0, 80)))
def test_kernel_generators_are_in_the_kernel(A):
    M = mat(A, 4)
    for s in kernel_presentation(M).summands:
        x = np.array([s.vector.get(c, 0) for c in range(4)], dtype=object)
        assert not ((np.array(A, dtype=object) @ x) % 81).any()
