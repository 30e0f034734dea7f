from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anss_q2.errors import InvalidIndex, NonInvertibleDenominator
from anss_q2.rings import (
    NON_HOMOGENEOUS,
    BElement,
    GammaElement,
    GeneratorIndex,
    MFElement,
    a_elem,
    b_elem,
    b_monomial,
    c4_gen,
    c6_gen,
    delta_gen,
    ell0,
    ell1,
    generator_to_monomials,
    homogeneous_parts,
    j_mf,
    mf_monomial,
    mf_to_b,
    mu_gen,
    q2_gen,
    q4_gen,
    r_gen,
    row_index_for,
    s_gen,
    t_degree,
    t_gen,
)

small = st.integers(-3, 3)
coeffs = st.builds(Fraction, st.integers(-20, 20), st.sampled_from([1, 2, 4, 8]))
b_elements = st.dictionaries(st.tuples(small, small, st.integers(0, 1)), coeffs, max_size=4).map(BElement)
mf_elements = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 1), st.integers(-2, 2)), coeffs, max_size=3
).map(MFElement)


def test_q_coordinates():
    assert q4_gen() == s_gen().scale(Fraction(1, 8))
    assert q2_gen() ** 2 == (s_gen() + t_gen()).scale(Fraction(1, 2))
    assert q4_gen() ** 2 * mu_gen() == b_monomial(2, 1, 0, Fraction(1, 8))
    # q2^2 = (mu + 64 q4) / 16 re-expands to the same thing
    assert (mu_gen() + q4_gen().scale(64)).scale(Fraction(1, 16)) == q2_gen() ** 2


def test_mf_to_b_generators():
    assert mf_to_b(c4_gen()) == s_gen().scale(2) + t_gen().scale(8)
    assert mf_to_b(delta_gen()) == b_monomial(2, 1, 0, Fraction(1, 8))
    assert mf_to_b(MFElement.one()) == BElement.one()
    assert mf_to_b(c6_gen()) == (q2_gen() * (s_gen() - t_gen().scale(8))).scale(4)


def test_mf_relation_holds_in_b():
    c4, c6, d = (mf_to_b(x) for x in (c4_gen(), c6_gen(), delta_gen()))
    assert c6 * c6 == c4 ** 3 - d.scale(1728)
    assert c6_gen() * c6_gen() == c4_gen() ** 3 - delta_gen().scale(1728)


def test_j_mf_expansion():
    assert j_mf(0) == MFElement.one()
    want = (s_gen().scale(2) + t_gen().scale(8)) ** 3 * b_monomial(-2, -1, 0, 8)
    assert mf_to_b(j_mf(1)) == want
    with pytest.raises(ValueError):
        j_mf(-1)


def test_degrees():
    assert t_degree(b_elem(6, 7)) == 4 * 13 + 2
    assert t_degree(BElement.one()) == 0
    assert t_degree(c4_gen() ** 3 * delta_gen().inverse()) == 0
    assert t_degree(BElement.zero()) == 0
    assert t_degree(s_gen() + q2_gen()) is NON_HOMOGENEOUS
    assert set(homogeneous_parts(s_gen() + q2_gen())) == {4, 2}
    assert t_degree(r_gen()) == 2


def test_gamma_relation():
    r, q2, q4 = r_gen(), GammaElement.from_b(q2_gen()), GammaElement.from_b(q4_gen())
    assert r ** 3 + q2 * r ** 2 + q4 * r == GammaElement.zero()
    assert (r ** 2).r_component(2) == BElement.one()


def test_inverses():
    assert s_gen() * s_gen().inverse() == BElement.one()
    assert delta_gen() * delta_gen().inverse() == MFElement.one()
    with pytest.raises(NonInvertibleDenominator):
        (s_gen() + t_gen()).inverse()
    with pytest.raises(NonInvertibleDenominator):
        c4_gen().inverse()
    with pytest.raises(NonInvertibleDenominator):
        r_gen().inverse()


def test_generator_index_examples():
    g = GeneratorIndex("B", 13, 0)
    assert g.ab_indices() == (6, 7)
    assert generator_to_monomials(g) == b_monomial(6, 7, 1) - b_monomial(7, 6, 1)
    assert GeneratorIndex("D", 13, 3).mf_exponents() == (9, 1, 1)
    assert GeneratorIndex("C", 1, 0).mf_exponents() == (1, 0, 0)
    assert generator_to_monomials(GeneratorIndex("C", 1, 0)) == c4_gen()
    assert GeneratorIndex.parse("D[-4,2]") == GeneratorIndex("D", -4, 2)
    assert str(GeneratorIndex("A", -7, 3)) == "A[-7,3]"
    assert row_index_for(1, 6, 7) == (13, 0)


@pytest.mark.parametrize("fam", ["B", "D"])
@pytest.mark.parametrize("m", [-9, -1, 0, 4, 13])
def test_b_d_degrees(fam, m):
    assert t_degree(generator_to_monomials(GeneratorIndex(fam, m, 2))) == 4 * m + 2


def test_invalid_indices():
    with pytest.raises(InvalidIndex):
        GeneratorIndex("E", 1, 0)
    with pytest.raises(InvalidIndex):
        GeneratorIndex("C", 1, -1)
    with pytest.raises(InvalidIndex):
        GeneratorIndex("A", 3, 0).mf_exponents()
    with pytest.raises(ValueError):
        MFElement({(-1, 0, 0): 1})


def test_ell():
    assert ell0(13) == 4 and ell1(13) == 4
    assert ell0(-4) == -2 and ell1(-4) == -2


def test_json_round_trip():
    x = b_elem(6, 7).scale(Fraction(3, 4)) + s_gen()
    assert BElement.from_json(x.to_json()) == x
    y = c4_gen() * c6_gen() + delta_gen().inverse()
    assert MFElement.from_json(y.to_json()) == y


@given(b_elements, b_elements, b_elements)
def test_b_ring_axioms(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(mf_elements, mf_elements)
def test_mf_to_b_is_multiplicative(x, y):
    assert mf_to_b(x * y) == mf_to_b(x) * mf_to_b(y)
    assert mf_to_b(x + y) == mf_to_b(x) + mf_to_b(y)


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_antisymmetric_generators(i, j):
    assert a_elem(i, j) == -a_elem(j, i)
    assert b_elem(i, j) == -b_elem(j, i)


@given(st.integers(0, 6), st.integers(0, 1), st.integers(-3, 3))
def test_mf_monomial_degree_preserved(n, e, l):
    x = mf_monomial(n, e, l)
    assert t_degree(mf_to_b(x)) == t_degree(x) == 4 * n + 6 * e + 12 * l
