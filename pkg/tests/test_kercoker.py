from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anss_q2.hopf_maps import g, h
from anss_q2.kercoker import (
    a_order_exp,
    b_order_exp,
    ker_g_element,
    ker_h_element,
    mf_order_exp,
    project_coker_g,
    project_coker_h,
)
from anss_q2.rings import (
    BElement,
    MFElement,
    a_elem,
    abar_elem,
    b_elem,
    b_monomial,
    c4_gen,
    c6_gen,
    j_mf,
    mf_to_b,
    s_gen,
    t_gen,
)


def test_project_coker_h_examples():
    cls = project_coker_h(s_gen() * t_gen() ** 2)
    assert cls.a_coeff(1, 2) == 5 and cls.a_torsion[(1, 2)].modulus == 9
    assert not project_coker_h(abar_elem(1, 2))
    free = project_coker_h(a_elem(-1, 1))
    assert free.free_part == {1: Fraction(1)}
    assert not free.a_torsion and not free.b_torsion


def test_project_coker_h_b_family():
    cls = project_coker_h(b_elem(6, 7))
    assert cls.b_coeff(6, 7) == 1
    assert cls.b_torsion[(6, 7)].modulus == 81
    assert cls.b_coeff(7, 6) == 80


def test_diagonal_monomials_die():
    assert not project_coker_h(b_monomial(3, 3, 1) + b_monomial(-2, -2))


def test_project_coker_g_examples():
    assert not project_coker_g(c4_gen().scale(15))
    cls = project_coker_g(c6_gen())
    assert cls.torsion[(0, 1, 0)].value == 1 and cls.torsion[(0, 1, 0)].modulus == 9
    assert project_coker_g(j_mf(2)).free_part == {2: Fraction(1)}


def test_order_exponents():
    assert a_order_exp(-3, 3) is None
    assert a_order_exp(1, 2) == 2
    assert b_order_exp(6, 7) == 4
    assert mf_order_exp((1, 0, 0)) == 1
    assert mf_order_exp((0, 1, 0)) == 2
    assert mf_order_exp((3, 0, -1)) is None


def test_kernel_bases():
    assert ker_g_element(0) == MFElement.one()
    assert ker_g_element(1) == j_mf(1)
    assert ker_h_element(2) == b_monomial(-2, 2) - b_monomial(2, -2)
    with pytest.raises(ValueError):
        ker_h_element(0)


@given(st.integers(0, 4))
def test_kernel_elements_are_killed(k):
    assert g(ker_g_element(k)) == MFElement.zero()
    if k:
        assert h(ker_h_element(k)) == BElement.zero()


small = st.integers(-5, 5)


@given(small, small, st.integers(0, 1))
def test_image_of_h_projects_to_zero(i, j, e):
    x = b_monomial(i, j, e)
    assert not project_coker_h(h(x))


@given(st.integers(0, 5), st.integers(0, 1), st.integers(-2, 2))
def test_image_of_g_projects_to_zero(n, e, l):
    assert not project_coker_g(g(MFElement({(n, e, l): 1})))


@given(small, small)
def test_projection_is_additive(i, j):
    x, y = b_monomial(i, j, 1), b_monomial(j + 1, i, 0)
    assert project_coker_h(x + y) == project_coker_h(x) + project_coker_h(y)


def test_projection_of_mixed_degree():
    x = mf_to_b(c4_gen()) + b_elem(0, 1)
    cls = project_coker_h(x)
    assert cls.b_coeff(0, 1) == 1
    # c4 = 2s + 8t gives -a[0,1] + 4a[0,1] = 3a[0,1], and a[0,1] has order 3
    assert cls.a_coeff(0, 1) == 0
