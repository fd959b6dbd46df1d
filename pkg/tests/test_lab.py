import pytest
from hypothesis import given, settings, strategies as st

from knlab.algebras import OperatorAlgebra
from knlab.basis import make_surface
from knlab.cocycles import Affine, Mixing, function_cocycle, mixing_cocycle, vector_cocycle
from knlab.current import Coboundary
from knlab.exact import RationalFunction
from knlab.exact.linalg import check_farkas
from knlab.lab import (
    coboundary_feasible,
    coboundary_system,
    cocycle_matrix,
    family_rank,
    kahler_rank,
    l_invariant_uniqueness_probe,
)
from knlab.lie import build_abelian, build_gl, build_sl, invariant_form_space, trace_form

CLASSICAL = make_surface([0], ["inf"])
TWO = make_surface([0, 1], ["inf"])


def test_cocycle_matrix_of_virasoro_cocycle():
    L = OperatorAlgebra(CLASSICAL, "L")
    m = cocycle_matrix(vector_cocycle(), L, 3)
    assert m.is_antisymmetric()
    assert m.level_support() == {0: 2}
    i, j = m.names.index("e_3"), m.names.index("e_-3")
    assert m[i, j] == 24


def test_coboundary_system_only_uses_closed_pairs():
    L = OperatorAlgebra(CLASSICAL, "L")
    sys_ = coboundary_system(L, 2)
    index = set(sys_.labels)
    for la, lb in sys_.pairs:
        assert set(L.coordinates(L.bracket_labels(la, lb))) <= index
    # only (e_1, e_2) and (e_-2, e_-1) leave the window
    assert sys_.skipped == 2


def test_virasoro_cocycle_is_not_a_coboundary():
    L = OperatorAlgebra(CLASSICAL, "L")
    cert = coboundary_feasible(vector_cocycle(), L, 5)
    assert cert.verdict == "not-a-coboundary"
    assert cert.verified and cert.reverified_by_rank
    rec = cert.to_record()
    assert rec["infeasible_subsystem"]


def test_coboundary_is_recognized():
    cur = OperatorAlgebra(CLASSICAL, "current", build_sl(2))
    cob = Coboundary(cur, {("x", 2, 0, 1): 1, ("x", 0, 1, 1): 3}, 20)
    cert = coboundary_feasible(cob, cur, 3)
    assert cert.is_coboundary_on_window and cert.verified


def test_farkas_certificate_rechecks():
    cur = OperatorAlgebra(CLASSICAL, "current", build_sl(2))
    spec = Affine(trace_form(build_sl(2)))
    cert = coboundary_feasible(spec, cur, 3)
    assert cert.verdict == "not-a-coboundary"
    sys_ = coboundary_system(cur, 3)
    rhs = [spec.value(cur, a, b) for a, b in sys_.pairs]
    names = {f"({cur.label_name(a)}, {cur.label_name(b)})": i for i, (a, b) in enumerate(sys_.pairs)}
    mult = {names[k]: v for k, v in cert.multipliers.items()}
    assert check_farkas(sys_.rows, rhs, mult)


def test_family_ranks():
    D1 = OperatorAlgebra(CLASSICAL, "D1")
    assert family_rank([function_cocycle(), mixing_cocycle(), vector_cocycle()], D1, 4).rank == 3
    cur = OperatorAlgebra(CLASSICAL, "current", build_abelian(2))
    forms = invariant_form_space(build_abelian(2))
    assert family_rank([Affine(f) for f in forms], cur, 3).rank == 3


def test_dependent_family_reports_dependency():
    D1 = OperatorAlgebra(CLASSICAL, "D1")
    fam = [function_cocycle(), vector_cocycle(), function_cocycle().scaled(2) - vector_cocycle()]
    r = family_rank(fam, D1, 3)
    assert r.rank == 2 and not r.full and r.dependency


@settings(max_examples=8)
@given(st.lists(st.integers(1, 5) | st.integers(-5, -1), min_size=3, max_size=3))
def test_rank_invariant_under_rescaling(scales):
    D1 = OperatorAlgebra(CLASSICAL, "D1")
    fam = [function_cocycle(), mixing_cocycle(), vector_cocycle()]
    scaled = [s.scaled(c) for s, c in zip(fam, scales)]
    assert family_rank(scaled, D1, 3).rank == 3


def test_gl2_d1_rank_on_two_points():
    g = build_gl(2)
    alg = OperatorAlgebra(TWO, "D1g", g)
    forms = invariant_form_space(g)
    fam = [Affine(f) for f in forms] + [Mixing([1, 0, 0, 1]), vector_cocycle()]
    assert family_rank(fam, alg, 2).rank == 4


def test_connection_change_is_a_window_coboundary():
    L = OperatorAlgebra(CLASSICAL, "L")
    R = RationalFunction.from_factors({0: -1}) + RationalFunction.monomial(2)
    diff = vector_cocycle(R) - vector_cocycle()
    cert = coboundary_feasible(diff, L, 4)
    assert cert.is_coboundary_on_window and cert.verified


@pytest.mark.parametrize("in_points,N", [([0], 2), ([0, 1], 3), ([0, 1, 2], 4)])
def test_kahler_rank(in_points, N):
    s = make_surface(in_points, ["inf"])
    assert kahler_rank(s) == N - 1
    assert kahler_rank(s, N + 2) == N - 1


def test_probe_finds_no_invariant_coboundary():
    g = build_sl(2)
    cur = OperatorAlgebra(CLASSICAL, "current", g)
    rep = l_invariant_uniqueness_probe(Affine(trace_form(g)), cur, 4, samples=20)
    assert rep.ok and rep.exact_space_dimension == 0
    assert rep.to_record()["ok"]
