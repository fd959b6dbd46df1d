from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import Oracle
from knlab.algebras import OperatorAlgebra
from knlab.basis import basis_element, make_surface
from knlab.cocycles import (
    SEPARATING,
    Affine,
    Cycle,
    VectorField,
    check_antisymmetry,
    check_cocycle_identity,
    check_L_invariant,
    check_multiplicative,
    cocycle_D1,
    cocycle_f,
    cocycle_lambda,
    cocycle_m,
    cocycle_v,
    function_cocycle,
    lambda_coefficients,
    level_support,
    locality_bounds,
    mixing_cocycle,
    vector_cocycle,
)
from knlab.exact import RationalFunction

CLASSICAL = make_surface([0], ["inf"])
TWO = make_surface([0, 1], ["inf"])
THREE = make_surface([0, 1, 2], ["inf"])
TWO_TWO = make_surface([0, 1], [2, "inf"])


def sec(s, lam, n, p=1):
    return basis_element(s, lam, n, p).section


@pytest.mark.parametrize("n", range(-6, 7))
def test_classical_values(n):
    S = SEPARATING
    assert cocycle_f(S, sec(CLASSICAL, 0, n), sec(CLASSICAL, 0, -n)) == -n
    assert cocycle_v(S, None, sec(CLASSICAL, -1, n), sec(CLASSICAL, -1, -n)) == n ** 3 - n
    assert cocycle_m(S, None, sec(CLASSICAL, -1, n), sec(CLASSICAL, 0, -n)) == n * (n + 1)
    assert cocycle_m(S, None, sec(CLASSICAL, 0, -n), sec(CLASSICAL, -1, n)) == -n * (n + 1)


def test_classical_values_vanish_off_level_zero():
    S = SEPARATING
    for n in range(-4, 5):
        for m in range(-4, 5):
            if n + m:
                assert cocycle_f(S, sec(CLASSICAL, 0, n), sec(CLASSICAL, 0, m)) == 0
                assert cocycle_v(S, None, sec(CLASSICAL, -1, n), sec(CLASSICAL, -1, m)) == 0


@pytest.mark.parametrize(
    "surface,I,O",
    [(TWO, [0, 1], []), (THREE, [0, 1, 2], []), (TWO_TWO, [0, 1], [2])],
    ids=["two", "three", "two-two"],
)
def test_values_match_oracle(surface, I, O):
    o = Oracle(I, O)
    S = SEPARATING
    K = surface.K
    for n in range(-3, 4):
        for m in range(-3, 4):
            for p in range(1, K + 1):
                for r in range(1, K + 1):
                    assert cocycle_f(S, sec(surface, 0, n, p), sec(surface, 0, m, r)) == o.gamma_f(n, p, m, r)
                    assert cocycle_v(S, None, sec(surface, -1, n, p), sec(surface, -1, m, r)) == o.gamma_v(n, p, m, r)
                    assert cocycle_m(S, None, sec(surface, -1, n, p), sec(surface, 0, m, r)) == o.gamma_m(n, p, m, r)


def test_flipped_vector_cocycle_is_caught_by_the_oracle():
    # the flipped integrand is exact, so identities alone cannot see the fault
    L = OperatorAlgebra(CLASSICAL, "L")
    bad = VectorField(flip=True)
    assert check_cocycle_identity(L, bad, 3).ok
    o = Oracle([0])
    mismatches = [n for n in range(-3, 4) if bad.value(L, ("e", n, 1), ("e", -n, 1)) != o.gamma_v(n, 1, -n, 1)]
    assert mismatches == [-3, -2, 2, 3]


labels3 = st.tuples(st.integers(-3, 3), st.integers(1, 3))


@given(labels3, labels3)
def test_separating_cycle_is_sum_of_point_cycles(a, b):
    A = OperatorAlgebra(THREE, "A")
    L = OperatorAlgebra(THREE, "L")
    D1 = OperatorAlgebra(THREE, "D1")
    cases = [
        (A, function_cocycle, ("x", 0, *a), ("x", 0, *b)),
        (L, lambda c: vector_cocycle(None, c), ("e", *a), ("e", *b)),
        (D1, lambda c: mixing_cocycle(None, c), ("e", *a), ("x", 0, *b)),
    ]
    for alg, make, la, lb in cases:
        whole = make(SEPARATING).value(alg, la, lb)
        parts = sum(make(Cycle.around(i)).value(alg, la, lb) for i in (1, 2, 3))
        assert whole == parts


@pytest.mark.parametrize("surface", [CLASSICAL, TWO], ids=["classical", "two"])
def test_identities(surface):
    A = OperatorAlgebra(surface, "A")
    L = OperatorAlgebra(surface, "L")
    D1 = OperatorAlgebra(surface, "D1")
    assert check_cocycle_identity(A, function_cocycle(), 3).ok
    assert check_cocycle_identity(L, vector_cocycle(), 3).ok
    assert check_cocycle_identity(D1, mixing_cocycle(), 2).ok
    for lam in (-1, 0, 1, 2):
        assert check_cocycle_identity(D1, cocycle_lambda(lam), 2).ok


def test_identity_with_connections():
    R = RationalFunction.from_factors({0: -2}) + RationalFunction.from_factors({1: -1})
    T = RationalFunction.from_factors({0: -1}, 3)
    D1 = OperatorAlgebra(TWO, "D1")
    assert check_cocycle_identity(D1, cocycle_D1(1, "1/2", -2, R=R, T=T), 2).ok


@pytest.mark.parametrize(
    "lam,expected",
    [(0, (-1, Fraction(-1, 2), -2)), (1, (-1, Fraction(1, 2), -2)), (2, (-1, Fraction(3, 2), -26))],
)
def test_lambda_coefficients(lam, expected):
    assert lambda_coefficients(lam) == expected


def test_antisymmetry_violation_located():
    class Skewed(VectorField):
        def evaluate(self, algebra, a, b):
            return 1

    L = OperatorAlgebra(CLASSICAL, "L")
    rep = check_antisymmetry(L, Skewed(), 1)
    assert not rep.ok and rep.failure["pair"] == ["e_-1", "e_-1"]


@pytest.mark.parametrize("surface", [CLASSICAL, TWO, THREE, TWO_TWO], ids=["1", "2", "3", "2+2"])
def test_locality_of_separating_cycle(surface):
    for kind, spec in (("A", function_cocycle()), ("L", vector_cocycle()), ("D1", mixing_cocycle())):
        bounds = locality_bounds(OperatorAlgebra(surface, kind), spec, 4)
        assert bounds is not None and bounds[1] <= 0


def test_point_cycle_is_not_local():
    A = OperatorAlgebra(TWO, "A")
    support = level_support(A, function_cocycle(Cycle.around(1)), 4)
    assert min(support) <= -2


@pytest.mark.parametrize("cycle", [SEPARATING, Cycle.around(1), Cycle.around(2)], ids=str)
def test_function_cocycle_invariance_and_multiplicativity(cycle):
    A = OperatorAlgebra(TWO, "A")
    assert check_L_invariant(A, function_cocycle(cycle), 2).ok
    assert check_multiplicative(A, function_cocycle(cycle), 2).ok


def test_affine_with_unit_form_is_function_cocycle():
    A = OperatorAlgebra(TWO, "A")
    for la in A.basis(2):
        for lb in A.basis(2):
            assert Affine().value(A, la, lb) == function_cocycle().value(A, la, lb)


def test_combination_arithmetic():
    L = OperatorAlgebra(CLASSICAL, "L")
    twice = vector_cocycle().scaled(2)
    diff = twice - vector_cocycle()
    assert diff.value(L, ("e", 3, 1), ("e", -3, 1)) == 24


def test_section_weights_checked():
    with pytest.raises(ValueError):
        cocycle_f(SEPARATING, sec(CLASSICAL, -1, 0), sec(CLASSICAL, 0, 0))
    with pytest.raises(ValueError):
        cocycle_m(SEPARATING, None, sec(CLASSICAL, 0, 0), sec(CLASSICAL, 0, 1))


def test_cycle_points():
    assert SEPARATING.points(THREE) == tuple(THREE.in_points)
    assert Cycle.around(2).points(THREE) == (THREE.in_points[1],)
    assert str(SEPARATING) == "S" and str(Cycle.around(2)) == "C2"
