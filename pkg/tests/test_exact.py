from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import factored, nonzero_rationals, small_rationals
from oracles import factored_series
from knlab.exact import (
    INF,
    ONE_FUNCTION,
    Z,
    ZERO_FUNCTION,
    Polynomial,
    RationalFunction,
    expand_at,
    order_at,
    parse_rational_function,
    residue_form,
    residue_of_products,
    residue_theorem_defect,
    scalar_str,
    to_scalar,
)
from knlab.exact.linalg import (
    InconsistentSystem,
    check_farkas,
    dense_rank,
    nullspace,
    rank,
    solve_sparse,
)

z = sympy.Symbol("z")


def rf(spec):
    const, exps = spec
    return RationalFunction.from_factors(exps, const)


def to_sympy(f):
    return sympy.parse_expr(str(f).replace("^", "**"), local_dict={"z": z})


# -- scalars ---------------------------------------------------------------


def test_scalar_coercion():
    assert to_scalar("3/6") == Fraction(1, 2)
    assert to_scalar(Fraction(-2, 4)) == Fraction(-1, 2)
    assert scalar_str(to_scalar("-4/6")) == "-2/3"


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", True, None])
def test_scalar_rejects_inexact(bad):
    with pytest.raises((TypeError, ValueError)):
        to_scalar(bad)


# -- polynomials and rational functions ----------------------------------------


def test_polynomial_division():
    a = Polynomial([1, 0, 0, 1])
    q, r = divmod(a, Polynomial([1, 1]))
    assert q * Polynomial([1, 1]) + r == a
    assert r.degree < 1


@given(factored(), factored())
def test_field_operations_match_sympy(a, b):
    f, g = rf(a), rf(b)
    for ours, theirs in (
        (f + g, to_sympy(f) + to_sympy(g)),
        (f * g, to_sympy(f) * to_sympy(g)),
        (f - g, to_sympy(f) - to_sympy(g)),
    ):
        assert sympy.simplify(to_sympy(ours) - theirs) == 0


@given(factored())
def test_quotient_inverts_product(a):
    f = rf(a)
    assert (f * f) / f == f
    assert f.inverse() * f == ONE_FUNCTION


@given(factored(), factored())
def test_derivation_rule(a, b):
    f, g = rf(a), rf(b)
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(factored())
def test_derivative_matches_sympy(a):
    f = rf(a)
    assert sympy.simplify(to_sympy(f.derivative(2)) - sympy.diff(to_sympy(f), z, 2)) == 0


@given(factored(), small_rationals)
def test_evaluation(a, x):
    f = rf(a)
    const, exps = a
    if x in exps and exps[x] < 0:
        return
    expected = Fraction(const)
    for p, k in exps.items():
        expected *= (x - p) ** k
    assert f(x) == expected


def test_orders_and_degree_principle():
    f = RationalFunction.from_factors({0: 2, 1: -3})
    assert order_at(f, 0) == 2
    assert order_at(f, 1) == -3
    assert order_at(f, INF) == 1


@given(factored())
def test_degree_principle(a):
    f = rf(a)
    pts = set(a[1]) | {Fraction(5)}
    total = sum(order_at(f, p) for p in pts) + order_at(f, INF)
    assert total == 0


def test_immutable():
    with pytest.raises(AttributeError):
        Z.num = ()


# -- parsing -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [
        ("z^2 - 1", Z * Z - ONE_FUNCTION),
        ("1/(z*(z-1))", (Z * (Z - ONE_FUNCTION)).inverse()),
        ("z**-2 + 3/2", RationalFunction.monomial(-2) + RationalFunction.constant(Fraction(3, 2))),
        ("-(z+1)^2", -((Z + ONE_FUNCTION) * (Z + ONE_FUNCTION))),
        ("0", ZERO_FUNCTION),
    ],
)
def test_parse(text, expected):
    assert parse_rational_function(text) == expected


@given(factored())
def test_parse_round_trip(a):
    f = rf(a)
    assert parse_rational_function(str(f)) == f


@pytest.mark.parametrize("text", ["", "z +", "1/0", "2.5*z", "x", "(z"])
def test_parse_errors(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational_function(text)


# -- Laurent series and residues ----------------------------------------------------


@given(factored(), st.sampled_from([Fraction(0), Fraction(1), Fraction(-1, 2)]))
def test_expansion_matches_oracle(a, p):
    f = rf(a)
    ours = expand_at(f, p, 3)
    theirs = factored_series(a[0], a[1], p, 3)
    for k in range(ours.order, 4):
        assert ours.coefficient(k) == theirs.coefficient(k)


@given(factored())
def test_residues_match_sympy(a):
    f = rf(a)
    for p in f.finite_poles():
        assert residue_form(f, p) == sympy.residue(to_sympy(f), z, sympy.Rational(p.numerator, p.denominator))


@given(factored(), factored())
def test_residue_theorem(a, b):
    assert residue_theorem_defect(rf(a) + rf(b)) == 0


def test_residue_at_infinity():
    # res_inf dz/z = -1
    assert residue_form(RationalFunction.monomial(-1), INF) == -1
    assert residue_form(RationalFunction.monomial(-1), 0) == 1


@given(factored(), factored(), st.integers(0, 2), st.integers(0, 2))
def test_residue_of_products_agrees_with_direct_form(a, b, d1, d2):
    f, g = rf(a), rf(b)
    form = f.derivative(d1) * g.derivative(d2)
    for p in sorted(set(a[1]) | set(b[1]) | {Fraction(0)}):
        direct = residue_form(form, p) if not form.is_zero() else 0
        assert residue_of_products(p, [(1, [(f, d1), (g, d2)])]) == direct


# -- linear algebra -------------------------------------------------------------


matrices = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5)


@given(matrices)
def test_rank_matches_sympy(m):
    assert dense_rank(m) == sympy.Matrix(m).rank()


@given(matrices)
def test_nullspace(m):
    basis = nullspace(m, 4)
    assert len(basis) == 4 - sympy.Matrix(m).rank()
    for vec in basis:
        assert all(sum(r[j] * vec[j] for j in range(4)) == 0 for r in m)


@given(matrices, st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_solve_or_certificate(m, b):
    rows = [{j: v for j, v in enumerate(r) if v} for r in m]
    rhs = b[: len(m)]
    try:
        sol = solve_sparse(rows, rhs)
    except InconsistentSystem as exc:
        assert check_farkas(rows, rhs, exc.certificate)
        aug = sympy.Matrix([r + [rhs[i]] for i, r in enumerate(m)])
        assert aug.rank() == sympy.Matrix(m).rank() + 1
    else:
        for row, v in zip(rows, rhs):
            assert sum(c * sol.get(k, 0) for k, c in row.items()) == v


def test_farkas_rejects_bad_multipliers():
    rows = [{0: 1}, {0: 1}]
    assert check_farkas(rows, [0, 1], {0: -1, 1: 1})
    assert not check_farkas(rows, [0, 1], {0: 1, 1: 1})


def test_rank_of_sparse_rows():
    assert rank([{0: 1, 1: 1}, {0: 2, 1: 2}, {2: Fraction(1, 3)}]) == 2


@given(nonzero_rationals)
def test_constant_function(c):
    f = RationalFunction.constant(c)
    assert f.is_constant()
    assert f.derivative().is_zero()
