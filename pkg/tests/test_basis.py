from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import Oracle, basis_factors, value_at
from knlab.basis import (
    AdmissibilityError,
    Section,
    SurfaceError,
    basis_element,
    basis_function,
    classical_surface,
    expand,
    kn_pairing,
    make_surface,
    prescribe_orders,
    verify_duality,
    window_labels,
)
from knlab.exact import INF, ONE_FUNCTION, RationalFunction, Z

SURFACES = {
    "classical": ([0], ["inf"]),
    "two": ([0, 1], ["inf"]),
    "three": ([0, 1, 2], ["inf"]),
    "two-two": ([0, 1], [2, "inf"]),
}


def surf(key):
    return make_surface(*SURFACES[key])


def finite_out(key):
    return [x for x in SURFACES[key][1] if x != "inf"]


def test_classical_basis_is_monomial():
    s = classical_surface()
    for n in range(-4, 5):
        assert basis_function(s, 0, n) == RationalFunction.monomial(n)
        assert basis_function(s, -1, n) == RationalFunction.monomial(n + 1)
        assert basis_function(s, 1, n) == RationalFunction.monomial(n - 1)


def test_two_point_degree_zero():
    s = surf("two")
    assert basis_function(s, 0, 0, 1) == ONE_FUNCTION - Z
    assert basis_function(s, 0, 0, 2) == Z


@pytest.mark.parametrize("key", sorted(SURFACES))
@pytest.mark.parametrize("lam", [-1, 0, 1, 2])
def test_orders_are_prescribed(key, lam):
    s = surf(key)
    for n, p in window_labels(s, 4):
        b = basis_element(s, lam, n, p)
        assert tuple(b.section.order_at(P) for P in s.points) == prescribe_orders(s, lam, n, p)
        # a lam-form has total order -2 lam on the sphere
        assert sum(prescribe_orders(s, lam, n, p)) == -2 * lam


@pytest.mark.parametrize("key", sorted(SURFACES))
def test_basis_matches_independent_recipe(key):
    s = surf(key)
    I, O = SURFACES[key][0], finite_out(key)
    for lam in (-1, 0, 2):
        for n, p in window_labels(s, 3):
            const, factors = basis_factors(I, O, lam, n, p)
            f = basis_function(s, lam, n, p)
            for x in (Fraction(7, 3), Fraction(-5, 2)):
                assert f(x) == value_at(const, factors, x)


@pytest.mark.parametrize("key", sorted(SURFACES))
@pytest.mark.parametrize("lam", [-1, 0, 1, 2])
def test_duality(key, lam):
    rep = verify_duality(surf(key), lam, 4)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize("key", ["two", "two-two"])
def test_pairing_against_oracle(key):
    s = surf(key)
    o = Oracle(SURFACES[key][0], finite_out(key))
    for n, p in window_labels(s, 2):
        for m, r in window_labels(s, 2):
            f = basis_element(s, 0, n, p).section
            g = basis_element(s, 1, m, r).section
            assert kn_pairing(f, g) == o.pairing(0, n, p, m, r)


@pytest.mark.parametrize("key", sorted(SURFACES))
def test_partition_of_unity(key):
    s = surf(key)
    e = expand(s, ONE_FUNCTION, 0)
    assert e.coeffs == {(0, p): 1 for p in range(1, s.K + 1)}
    assert e.to_function() == ONE_FUNCTION


@st.composite
def admissible_functions(draw, key="three"):
    s = surf(key)
    finite = [P for P in s.points if P is not INF]
    exps = {P: draw(st.integers(-3, 3)) for P in finite}
    c = draw(st.integers(1, 5))
    return s, RationalFunction.from_factors(exps, c)


@given(admissible_functions(), st.sampled_from([-1, 0, 1, 2]))
def test_expansion_reassembles(data, lam):
    s, f = data
    e = expand(s, f, lam)
    assert e.to_function() == f


@given(st.sampled_from(sorted(SURFACES)), st.integers(-4, 4), st.sampled_from([-1, 0, 1]))
def test_basis_element_expands_to_itself(key, n, lam):
    s = surf(key)
    for p in range(1, s.K + 1):
        e = expand(s, basis_element(s, lam, n, p).section)
        assert e.coeffs == {(n, p): 1}


@pytest.mark.parametrize(
    "I,O,message",
    [
        ([], ["inf"], "empty"),
        ([0], [], "empty"),
        ([0], [1], "infinity"),
        (["inf"], ["inf"], "finite"),
        ([0, 0], ["inf"], "duplicate"),
        ([0], [1, "inf"], "out-points"),
        ([0], ["inf", 1], "infinity"),
    ],
)
def test_surface_validation(I, O, message):
    with pytest.raises(SurfaceError, match=message):
        make_surface(I, O)


def test_sections_reject_foreign_poles():
    s = surf("two")
    with pytest.raises(AdmissibilityError):
        Section(0, RationalFunction.from_factors({3: -1}), s)
    with pytest.raises(ValueError):
        kn_pairing(basis_element(s, 0, 0, 1).section, basis_element(s, 0, 0, 1).section)


def test_point_index_checked():
    with pytest.raises(ValueError):
        basis_element(surf("two"), 0, 0, 3)
