"""Verification and dimension tasks behind the command line.

Each task takes a RunConfig and returns a Report.  Tasks are independent
of one another, so the CLI may run them in separate processes and merge
the reports in task order.
"""
from .algebras import OPERATIONS, OperatorAlgebra, grading_analysis
from .basis import basis_function, expand_function, verify_duality, window_labels
from .cocycles import (
    SEPARATING,
    Affine,
    Combination,
    Cycle,
    Mixing,
    VectorField,
    check_cocycle_identity,
    check_L_invariant,
    check_multiplicative,
    cocycle_lambda,
    function_cocycle,
    locality_bounds,
    mixing_cocycle,
)
from .current import (
    Coboundary,
    ExtendByZero,
    UserMatrix,
    check_cocycle_conditions,
    check_L_invariance_current,
)
from .exact.laurent import residue_form
from .exact.rational import ONE_FUNCTION
from .exact.scalar import ONE, ZERO, mpq, scalar_str
from .lab import coboundary_feasible, family_rank, l_invariant_uniqueness_probe
from .lie import (
    BilinearForm,
    LinearForm,
    expected_invariant_dimension,
    invariant_form_space,
    is_invariant,
    linear_forms_vanishing_on_derived,
    vanishes_on_derived,
)
from .report import Report

HALF = mpq(1, 2)


def _vector(cfg, cycle=SEPARATING, name=None):
    return VectorField(
        cfg.R, cycle, name=name or f"gamma_v[{cycle}]", flip=cfg.fault == "vector_sign"
    )


def _lambda_spec(cfg, lam, cycle=SEPARATING):
    spec = cocycle_lambda(lam, R=cfg.R, T=cfg.T, cycle=cycle)
    if cfg.fault:
        # rebuild with the faulty vector part so every code path sees it
        (r1, f), (r2, m), (r3, _) = spec.parts
        spec = Combination([(r1, f), (r2, m), (r3, _vector(cfg, cycle))], name=spec.name)
    return spec


def _named_forms(lie):
    forms = invariant_form_space(lie)
    for i, f in enumerate(forms, 1):
        f.name = f"alpha{i}"
    return forms


def _named_linear(lie):
    forms = linear_forms_vanishing_on_derived(lie)
    for i, f in enumerate(forms, 1):
        f.name = f"phi{i}"
    return forms


def _detail(r):
    return r.summary().removeprefix(f"{r.name}: ")


def _record(report, task, rep):
    report.add(task, rep.name, rep.ok, _detail(rep))


# -- individual tasks --------------------------------------------------------------


def task_duality(cfg):
    rep = Report("duality")
    for lam in cfg.lambdas:
        d = verify_duality(cfg.surface, lam, cfg.window)
        rep.add("duality", f"pairing identity lam={lam}", d.ok, d.summary())
    return rep


def task_partition(cfg):
    rep = Report("partition")
    coeffs = expand_function(cfg.surface, ONE_FUNCTION, 0)
    want = {(0, p): ONE for p in range(1, cfg.surface.K + 1)}
    ok = coeffs == want
    detail = ", ".join(f"A_{n},{p}: {scalar_str(c)}" for (n, p), c in sorted(coeffs.items()))
    rep.add("partition", "1 = sum of A_0,p", ok, detail)
    return rep


def task_grading(cfg):
    rep = Report("grading")
    surface = cfg.surface
    for op in OPERATIONS:
        lams = cfg.lambdas if op == "lie_action" else [0]
        for lam in lams:
            g = grading_analysis(surface, op, lam, cfg.window)
            ok = g.ok and (not surface.is_classical or g.upper_shift == 0)
            label = f"{op} lam={lam}" if op == "lie_action" else op
            extra = {} if not g.leading_failures else {"first_failure": g.leading_failures[0]}
            rep.add("grading", f"almost-grading of {label}", ok, g.summary(), **extra)
    return rep


def _direct_vector(points, e, f, R):
    form = (e.derivative(3) * f - e * f.derivative(3)).scale(HALF) - R * (e.derivative() * f - e * f.derivative())
    return _direct_sum(points, form)


def _direct_sum(points, form):
    if form.is_zero():
        return ZERO
    return sum((residue_form(form, P) for P in points), ZERO)


def task_regression(cfg):
    """Cocycle values against residues of the explicitly formed integrands.

    The integrand is multiplied out as one rational function and expanded
    at each in-point; the cocycle code instead sums products of truncated
    series.  On the classical surface the closed forms are checked too.
    """
    rep = Report("regression")
    surface, W = cfg.surface, cfg.window
    points = SEPARATING.points(surface)
    labels = window_labels(surface, W)
    A = OperatorAlgebra(surface, "A")
    L = OperatorAlgebra(surface, "L")
    D1 = OperatorAlgebra(surface, "D1")
    gf, gv, gm = function_cocycle(), _vector(cfg), mixing_cocycle(cfg.T)
    checks = {
        "function cocycle": (A, gf, lambda F, G: _direct_sum(points, F * G.derivative()), 0, 0),
        "vector-field cocycle": (L, gv, lambda e, f: _direct_vector(points, e, f, cfg.R), -1, -1),
        "mixing cocycle": (
            D1, gm, lambda e, g: _direct_sum(points, e * g.derivative(2) + cfg.T * e * g.derivative()), -1, 0,
        ),
    }
    for name, (alg, spec, direct, wa, wb) in checks.items():
        bad, count = None, 0
        for n, p in labels:
            for m, r in labels:
                a = ("e", n, p) if wa == -1 else ("x", 0, n, p)
                b = ("e", m, r) if wb == -1 else ("x", 0, m, r)
                got = spec.value(alg, a, b)
                want = direct(basis_function(surface, wa, n, p), basis_function(surface, wb, m, r))
                count += 1
                if got != want and bad is None:
                    bad = {"pair": [alg.label_name(a), alg.label_name(b)],
                           "computed": scalar_str(got), "direct": scalar_str(want)}
        rep.add("regression", f"{name} values vs direct residues", bad is None,
                f"{count} pairs agree" if bad is None else bad)
    if surface.is_classical:
        closed = {
            "function cocycle": (A, gf, lambda n: -n, "x", "x"),
            "vector-field cocycle": (L, gv, lambda n: n ** 3 - n, "e", "e"),
            "mixing cocycle": (D1, gm, lambda n: n * (n + 1), "e", "x"),
        }

        def label(kind, n):
            return ("e", n, 1) if kind == "e" else ("x", 0, n, 1)

        for name, (alg, spec, formula, ka, kb) in closed.items():
            bad = None
            for n in range(-W, W + 1):
                got = spec.value(alg, label(ka, n), label(kb, -n))
                if got != formula(n) and bad is None:
                    bad = {"n": n, "computed": scalar_str(got), "expected": str(formula(n))}
            rep.add("regression", f"{name} closed form on the classical surface", bad is None,
                    f"|n| <= {W}" if bad is None else bad)
    return rep


def _identity(rep, alg, spec, W):
    if alg.kind in ("current", "D1g"):
        anti, families = check_cocycle_conditions(alg, spec, W)
        for r in [anti] + families:
            rep.add("identities", f"{alg.name}: {r.name}", r.ok, _detail(r))
    else:
        r = check_cocycle_identity(alg, spec, W)
        rep.add("identities", f"{alg.name}: {r.name}", r.ok, _detail(r))


def _expect_failure(rep, alg, spec, W, label):
    anti, families = check_cocycle_conditions(alg, spec, W)
    failed = [r for r in [anti] + families if not r.ok]
    detail = failed[0].summary() if failed else "no cocycle condition failed"
    rep.add("identities", f"negative control: {label}", bool(failed), detail)


def _non_invariant_form(lie):
    for i in range(lie.dim):
        mat = [[ONE if a == b == i else ZERO for b in range(lie.dim)] for a in range(lie.dim)]
        form = BilinearForm(mat, f"unit[{lie.labels[i]}]")
        if not is_invariant(lie, form):
            return form
    return None


def _bad_linear_form(lie):
    for i in range(lie.dim):
        phi = LinearForm(lie.unit(i), f"unit[{lie.labels[i]}]")
        if not vanishes_on_derived(lie, phi):
            return phi
    return None


def task_identities(cfg):
    rep = Report("identities")
    surface, W = cfg.surface, cfg.window
    A = OperatorAlgebra(surface, "A")
    L = OperatorAlgebra(surface, "L")
    D1 = OperatorAlgebra(surface, "D1")
    _identity(rep, A, function_cocycle(), W)
    _identity(rep, L, _vector(cfg), W)
    _identity(rep, D1, mixing_cocycle(cfg.T), W)
    for lam in cfg.lambdas:
        _identity(rep, D1, _lambda_spec(cfg, lam), W)
    lie = cfg.lie
    if lie is not None:
        cur = OperatorAlgebra(surface, "current", lie)
        d1g = OperatorAlgebra(surface, "D1g", lie)
        forms, phis = _named_forms(lie), _named_linear(lie)
        for alpha in forms:
            _identity(rep, cur, Affine(alpha, name=f"gamma_{alpha.name}"), W)
        parts = [(ONE, Affine(a)) for a in forms] + [(ONE, Mixing(p, cfg.T)) for p in phis]
        parts.append((ONE, _vector(cfg)))
        _identity(rep, d1g, Combination(parts, name="assembled"), W)
        bad_alpha = _non_invariant_form(lie)
        if bad_alpha is not None:
            _expect_failure(rep, cur, Affine(bad_alpha), W, f"non-invariant form {bad_alpha.name}")
        bad_phi = _bad_linear_form(lie)
        if bad_phi is not None:
            _expect_failure(rep, d1g, Mixing(bad_phi, cfg.T), W, f"mixing with {bad_phi.name} nonzero on [g,g]")
    for entry in cfg.cocycles:
        _identity(rep, _algebra_for(cfg, entry.algebra), entry.spec, W)
    return rep


def _algebra_for(cfg, kind):
    return OperatorAlgebra(cfg.surface, kind, cfg.lie if kind in ("current", "D1g") else None)


def task_locality(cfg):
    rep = Report("locality")
    surface, W = cfg.surface, cfg.window
    specs = [
        (OperatorAlgebra(surface, "A"), function_cocycle),
        (OperatorAlgebra(surface, "L"), lambda c: _vector(cfg, c)),
        (OperatorAlgebra(surface, "D1"), lambda c: mixing_cocycle(cfg.T, c)),
    ]
    if cfg.lie is not None:
        cur = OperatorAlgebra(surface, "current", cfg.lie)
        for alpha in _named_forms(cfg.lie):
            specs.append((cur, lambda c, a=alpha: Affine(a, c, name=f"gamma_{a.name}[{c}]")))
    cycles = [Cycle.around(i) for i in range(1, surface.K + 1)] if surface.K > 1 else []
    for alg, make in specs:
        spec = make(SEPARATING)
        bounds = locality_bounds(alg, spec, W)
        ok = bounds is None or bounds[1] <= 0
        rep.add("locality", f"{alg.name}: {spec.name} max level <= 0", ok,
                "vanishes on the window" if bounds is None else f"levels {bounds[0]}..{bounds[1]}")
        for c in cycles:
            s = make(c)
            b = locality_bounds(alg, s, W)
            rep.add("locality", f"{alg.name}: {s.name} level range", None,
                    "vanishes on the window" if b is None else f"levels {b[0]}..{b[1]}")
    return rep


def task_invariance(cfg):
    rep = Report("invariance")
    surface, W = cfg.surface, cfg.window
    A = OperatorAlgebra(surface, "A")
    cycles = [SEPARATING] + [Cycle.around(i) for i in range(1, surface.K + 1)]
    for c in cycles:
        spec = function_cocycle(c)
        _record(rep, "invariance", check_L_invariant(A, spec, W))
        _record(rep, "invariance", check_multiplicative(A, spec, W))
    if cfg.lie is not None:
        cur = OperatorAlgebra(surface, "current", cfg.lie)
        forms = _named_forms(cfg.lie)
        for alpha in forms:
            _record(rep, "invariance", check_L_invariance_current(cur, Affine(alpha, name=f"gamma_{alpha.name}"), W))
        if forms:
            probe = l_invariant_uniqueness_probe(Affine(forms[0], name=f"gamma_{forms[0].name}"), cur, W)
            rep.add("invariance", f"{cur.name}: no invariant local coboundary", probe.ok,
                    f"{probe.samples} samples, {len(probe.violations)} violations, "
                    f"invariant coboundary dimension {probe.exact_space_dimension}")
    return rep


def _extension_negative(cfg, cur, W):
    """A cocycle on currents that is not invariant under vector fields."""
    lie = cfg.lie
    far = 4 * W + 8
    if any(lie.c[i][j] for i in range(lie.dim) for j in range(lie.dim)):
        for i in range(lie.dim):
            for j in range(lie.dim):
                if lie.c[i][j]:
                    k = next(iter(lie.c[i][j]))
                    return Coboundary(cur, {("x", k, 0, 1): ONE}, far, name=f"delta[{lie.labels[k]}(A_0)]")
    table = {(("x", 0, 1, 1), ("x", 0, 2, 1)): ONE}
    return UserMatrix(cur, table, far, name="user[x(A_1),x(A_2)]")


def task_extension(cfg):
    """Extension by zero works for invariant cocycles and not otherwise."""
    rep = Report("extension")
    if cfg.lie is None:
        rep.add("extension", "extension by zero", None, "no Lie algebra configured")
        return rep
    surface, W = cfg.surface, cfg.window
    cur = OperatorAlgebra(surface, "current", cfg.lie)
    d1g = OperatorAlgebra(surface, "D1g", cfg.lie)
    for alpha in _named_forms(cfg.lie):
        spec = ExtendByZero(Affine(alpha, name=f"gamma_{alpha.name}"))
        anti, families = check_cocycle_conditions(d1g, spec, W)
        failed = [r for r in [anti] + families if not r.ok]
        rep.add("extension", f"{spec.name} is a cocycle", not failed,
                "all families pass" if not failed else failed[0].summary())
    inner = _extension_negative(cfg, cur, W)
    anti, families = check_cocycle_conditions(cur, inner, W)
    base_ok = anti.ok and all(r.ok for r in families)
    rep.add("extension", f"{inner.name} is a cocycle on currents", base_ok,
            "currents family passes" if base_ok else families[0].summary())
    _, families = check_cocycle_conditions(d1g, ExtendByZero(inner), W)
    failed = [r for r in families if not r.ok]
    rep.add("extension", f"{inner.name} extended by zero is rejected", bool(failed),
            failed[0].summary() if failed else "unexpectedly a cocycle")
    return rep


TASK_FUNCTIONS = {
    "duality": task_duality,
    "partition": task_partition,
    "grading": task_grading,
    "regression": task_regression,
    "identities": task_identities,
    "locality": task_locality,
    "invariance": task_invariance,
    "extension": task_extension,
}


# -- dimension targets -------------------------------------------------------------------


def target_family(cfg, target):
    """(algebra, family of cocycle specs, expected dimension or None)."""
    surface = cfg.surface
    if target.kind == "L":
        return OperatorAlgebra(surface, "L"), [_vector(cfg)], 1
    if target.kind == "D1":
        alg = OperatorAlgebra(surface, "D1")
        return alg, [function_cocycle(), mixing_cocycle(cfg.T), _vector(cfg)], 3
    lie = target.lie
    alg = OperatorAlgebra(surface, target.kind, lie)
    family = [Affine(a, name=f"gamma_{a.name}") for a in _named_forms(lie)]
    expected = expected_invariant_dimension(lie)
    if target.kind == "D1g":
        phis = _named_linear(lie)
        family += [Mixing(p, cfg.T, name=f"gamma_{p.name}") for p in phis]
        family.append(_vector(cfg))
        if expected is not None:
            expected += len(phis) + 1
    return alg, family, expected


def task_target(cfg, target):
    rep = Report("h2loc")
    alg, family, expected = target_family(cfg, target)
    W = cfg.window
    fr = family_rank(family, alg, W)
    ok = None if expected is None else fr.rank == expected
    rec = fr.to_record()
    rec["expected"] = expected
    rep.add("h2loc", f"{target.text}: rank modulo window coboundaries", ok,
            f"expected {expected}, certified lower bound {fr.rank}", record=rec)
    for spec in family:
        cert = coboundary_feasible(spec, alg, W)
        good = cert.verdict == "not-a-coboundary" and cert.verified and cert.reverified_by_rank
        rep.add("h2loc", f"{target.text}: {spec.name} is not a coboundary", good,
                cert.verdict, certificate=cert.to_record())
    return rep, (target.text, alg.name, expected, fr.rank, len(family))
