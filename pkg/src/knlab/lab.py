"""Window-truncated cohomology experiments.

Everything here works on a finite window |degree| <= W of an algebra's
basis.  A coboundary delta phi is only known on pairs whose bracket stays
inside the window, so every system below is built from those pairs alone.
That makes infeasibility a sound global statement (a global identity
restricts to every such pair) while feasibility is only a window-level
witness.
"""
import random
from dataclasses import dataclass, field

from .algebras import OperatorAlgebra, op_bracket
from .basis import basis_function, window_labels
from .cocycles import level_support
from .exact.laurent import residue_form
from .exact.linalg import (
    InconsistentSystem,
    RowReducer,
    check_farkas,
    solve_sparse,
    sparse_kernel,
)
from .exact.scalar import ONE, ZERO, scalar_str


@dataclass
class WindowMatrix:
    algebra: str
    window: int
    labels: list
    names: list
    entries: list
    levels: list

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_antisymmetric(self):
        n = len(self.labels)
        return all(
            self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i, n)
        )

    def level_support(self):
        out = {}
        n = len(self.labels)
        for i in range(n):
            for j in range(i + 1, n):
                if self.entries[i][j]:
                    out[self.levels[i][j]] = out.get(self.levels[i][j], 0) + 1
        return out

    def is_zero(self):
        return not any(any(r) for r in self.entries)

    def rows_as_strings(self):
        return [[scalar_str(v) for v in r] for r in self.entries]


def cocycle_matrix(spec, algebra, W):
    """All basis-pair values of ``spec`` on the window, both orders evaluated."""
    labels = algebra.basis(W)
    n = len(labels)
    entries = [[ZERO] * n for _ in range(n)]
    for i, la in enumerate(labels):
        for j, lb in enumerate(labels):
            entries[i][j] = spec.value(algebra, la, lb)
    degrees = [algebra.degree(x) for x in labels]
    levels = [[a + b for b in degrees] for a in degrees]
    return WindowMatrix(
        algebra.name, W, labels, [algebra.label_name(x) for x in labels], entries, levels
    )


# -- coboundary systems ---------------------------------------------------------


@dataclass
class CoboundarySystem:
    """Rows of delta phi on the window pairs whose bracket stays in the window."""

    algebra: OperatorAlgebra
    window: int
    labels: list
    pairs: list
    rows: list
    skipped: int

    @property
    def index(self):
        return {lab: k for k, lab in enumerate(self.labels)}


def coboundary_system(algebra, W):
    labels = algebra.basis(W)
    index = {lab: k for k, lab in enumerate(labels)}
    pairs, rows, skipped = [], [], 0
    for i, la in enumerate(labels):
        for lb in labels[i + 1:]:
            coords = algebra.coordinates(algebra.bracket_labels(la, lb))
            if any(lab not in index for lab in coords):
                skipped += 1
                continue
            pairs.append((la, lb))
            rows.append({index[lab]: c for lab, c in coords.items()})
    return CoboundarySystem(algebra, W, labels, pairs, rows, skipped)


@dataclass
class FeasibilityCertificate:
    verdict: str
    window: int
    constraints: int
    skipped: int
    witness: dict = None
    multipliers: dict = None
    verified: bool = False
    reverified_by_rank: bool = None
    note: str = ""

    @property
    def is_coboundary_on_window(self):
        return self.verdict == "coboundary-on-window"

    def to_record(self, names=None):
        rec = {
            "verdict": self.verdict,
            "window": self.window,
            "constraints": self.constraints,
            "skipped_pairs": self.skipped,
            "verified": self.verified,
            "note": self.note,
        }
        if self.witness is not None:
            rec["witness"] = {str(k): scalar_str(v) for k, v in sorted(self.witness.items(), key=str)}
        if self.multipliers is not None:
            rec["infeasible_subsystem"] = [
                {"pair": str(k), "multiplier": scalar_str(v)}
                for k, v in sorted(self.multipliers.items(), key=str)
            ]
        if self.reverified_by_rank is not None:
            rec["rank_reverified"] = self.reverified_by_rank
        return rec


def _rank_gap(rows, rhs, seed):
    """rank([A|b]) - rank(A) with rows and columns shuffled."""
    rng = random.Random(seed)
    order = list(range(len(rows)))
    rng.shuffle(order)
    cols = sorted({k for r in rows for k in r})
    perm = list(range(len(cols)))
    rng.shuffle(perm)
    relabel = {c: perm[i] for i, c in enumerate(cols)}
    extra = len(cols)
    plain, augmented = RowReducer(), RowReducer()
    for i in order:
        row = {relabel[k]: v for k, v in rows[i].items()}
        plain.add(row)
        aug = dict(row)
        if rhs[i]:
            aug[extra] = rhs[i]
        augmented.add(aug)
    return augmented.rank - plain.rank


def coboundary_feasible(spec, algebra, W, seed=0):
    """Decide whether spec equals some delta phi on the window pairs.

    Infeasible systems come with Farkas multipliers (re-checked exactly)
    and a second, independent rank computation on a shuffled copy.
    """
    system = coboundary_system(algebra, W)
    if not system.rows:
        raise ValueError(f"window W={W} of {algebra.name} contains no bracket-closed pairs")
    rhs = [spec.value(algebra, la, lb) for la, lb in system.pairs]
    try:
        solution = solve_sparse(system.rows, rhs)
    except InconsistentSystem as exc:
        mult = exc.certificate
        ok = check_farkas(system.rows, rhs, mult)
        gap = _rank_gap(system.rows, rhs, seed)
        names = algebra.label_name
        return FeasibilityCertificate(
            "not-a-coboundary",
            W,
            len(system.rows),
            system.skipped,
            multipliers={
                f"({names(system.pairs[i][0])}, {names(system.pairs[i][1])})": y
                for i, y in mult.items()
            },
            verified=ok,
            reverified_by_rank=gap == 1,
            note="sound: the restricted system has no solution",
        )
    witness = {system.labels[k]: v for k, v in solution.items()}
    ok = all(
        sum((c * solution.get(k, ZERO) for k, c in row.items()), ZERO) == b
        for row, b in zip(system.rows, rhs)
    )
    return FeasibilityCertificate(
        "coboundary-on-window",
        W,
        len(system.rows),
        system.skipped,
        witness={algebra.label_name(k): v for k, v in witness.items()},
        verified=ok,
        note="inconclusive for global triviality",
    )


# -- ranks modulo coboundaries ----------------------------------------------------------


@dataclass
class FamilyRank:
    algebra: str
    window: int
    names: list
    rank: int
    coboundary_rank: int
    constraints: int
    dependency: dict = None

    @property
    def full(self):
        return self.rank == len(self.names)

    def to_record(self):
        rec = {
            "algebra": self.algebra,
            "window": self.window,
            "family": self.names,
            "rank_mod_coboundaries": self.rank,
            "coboundary_rank": self.coboundary_rank,
            "pairs_used": self.constraints,
            "kind": "certified lower bound",
        }
        if self.dependency:
            rec["dependency"] = {k: scalar_str(v) for k, v in self.dependency.items()}
        return rec


def family_rank(specs, algebra, W, system=None):
    """Rank of the family in the quotient by window coboundaries.

    Vectors live on the bracket-closed window pairs.  The coboundary space
    is spanned by delta of the dual basis, i.e. by the columns of the
    coboundary system.
    """
    system = system or coboundary_system(algebra, W)
    columns = {}
    for r, row in enumerate(system.rows):
        for k, c in row.items():
            columns.setdefault(k, {})[r] = c
    red = RowReducer(track=True)
    for k in sorted(columns):
        red.add(columns[k], tag=("cob", k))
    base = red.rank
    dependency = None
    for idx, spec in enumerate(specs):
        vec = {}
        for r, (la, lb) in enumerate(system.pairs):
            v = spec.value(algebra, la, lb)
            if v:
                vec[r] = v
        independent, combo = red.add(vec, tag=("fam", idx))
        if not independent and dependency is None:
            dependency = {
                specs[t[1]].name: c for t, c in combo.items() if t[0] == "fam"
            }
    return FamilyRank(
        algebra.name,
        W,
        [s.name for s in specs],
        red.rank - base,
        base,
        len(system.rows),
        dependency,
    )


# -- uniqueness of the invariant representative -----------------------------------


@dataclass
class ProbeReport:
    representative: str
    window: int
    samples: int
    representative_l_invariant: bool
    representative_levels: tuple
    violations: list = field(default_factory=list)
    zero_coboundaries: int = 0
    exact_space_dimension: int = None

    @property
    def representative_local(self):
        lo_hi = self.representative_levels
        return lo_hi is None or lo_hi[1] <= 0

    @property
    def ok(self):
        exact_ok = self.exact_space_dimension in (None, 0)
        return (
            self.representative_l_invariant
            and self.representative_local
            and not self.violations
            and exact_ok
        )

    def to_record(self):
        return {
            "representative": self.representative,
            "window": self.window,
            "samples": self.samples,
            "representative_l_invariant": self.representative_l_invariant,
            "representative_levels": list(self.representative_levels) if self.representative_levels else None,
            "violations": self.violations,
            "zero_coboundaries": self.zero_coboundaries,
            "invariant_nonzero_coboundary_dimension": self.exact_space_dimension,
            "ok": self.ok,
        }


def _invariance_terms(algebra, W_inner):
    """(moved_a, b, a, moved_b) quadruples for gamma(e.a, b) + gamma(a, e.b)."""
    vec_alg = OperatorAlgebra(algebra.surface, "L")
    currents = [lab for lab in algebra.basis(W_inner) if lab[0] == "x"]
    out = []
    for le in vec_alg.basis(W_inner):
        e = vec_alg.element(le)
        moved = {lab: op_bracket(algebra.lie, e, algebra.element(lab)) for lab in currents}
        for i, la in enumerate(currents):
            for lb in currents[i:]:
                out.append((moved[la], algebra.element(lb), algebra.element(la), moved[lb]))
    return out


def _coboundary_value(algebra, phi, a, b, index):
    """phi([a, b]) or None when the bracket leaves the window."""
    total = ZERO
    for lab, c in algebra.coordinates(algebra.bracket(a, b)).items():
        k = index.get(lab)
        if k is None:
            return None
        v = phi.get(k)
        if v:
            total += c * v
    return total


def l_invariant_uniqueness_probe(spec, algebra, W, samples=100, seed=0, exact=True):
    """No nonzero coboundary on the window is invariant under vector fields.

    Samples random window linear forms phi and checks that delta phi is
    either zero or fails invariance; with ``exact`` it also solves for
    the whole space of phi whose coboundary is invariant and checks that
    every such coboundary vanishes on the window pairs.
    """
    W_inner = max(1, W // 2)
    terms = _invariance_terms(algebra, W_inner)
    rep_inv = all(
        not (spec.evaluate(algebra, ma, b) + spec.evaluate(algebra, a, mb)) for ma, b, a, mb in terms
    )
    rep_levels = None
    support = level_support(algebra, spec, W_inner)
    if support:
        rep_levels = (min(support), max(support))

    system = coboundary_system(algebra, W)
    index = system.index
    inv_rows = []
    for ma, b, a, mb in terms:
        row = {}
        for x, y, sign in ((ma, b, ONE), (a, mb, ONE)):
            coords = algebra.coordinates(algebra.bracket(x, y))
            if any(lab not in index for lab in coords):
                row = None
                break
            for lab, c in coords.items():
                k = index[lab]
                row[k] = row.get(k, ZERO) + sign * c
        if row is not None and any(row.values()):
            inv_rows.append(row)

    rng = random.Random(seed)
    report = ProbeReport(spec.name, W, samples, rep_inv, rep_levels)
    nlab = len(system.labels)
    for s in range(samples):
        phi = {k: ONE * rng.randint(-5, 5) for k in range(nlab)} if s else {}
        invariant = all(
            not sum((c * phi.get(k, ZERO) for k, c in row.items()), ZERO) for row in inv_rows
        )
        nonzero = any(
            sum((c * phi.get(k, ZERO) for k, c in row.items()), ZERO) for row in system.rows
        )
        if not nonzero:
            report.zero_coboundaries += 1
        if invariant and nonzero:
            report.violations.append({"sample": s})
    if exact:
        # phi with invariant coboundary, modulo phi with zero coboundary
        cob = RowReducer()
        for k in range(nlab):
            col = {r: row[k] for r, row in enumerate(system.rows) if row.get(k)}
            cob.add(col)
        inv = RowReducer()
        for row in inv_rows:
            inv.add(row)
        # dimension of {phi : inv_rows phi = 0} mapped through delta
        kernel = sparse_kernel(inv, nlab)
        images = RowReducer()
        for vec in kernel:
            img = {}
            for r, row in enumerate(system.rows):
                v = sum((c * vec.get(k, ZERO) for k, c in row.items()), ZERO)
                if v:
                    img[r] = v
            images.add(img)
        report.exact_space_dimension = images.rank
    return report


# -- Kahler differentials ----------------------------------------------------------------


def residue_vector(surface, f, g):
    """(res_P f dg) over every marked point."""
    form = f * g.derivative()
    if form.is_zero():
        return tuple(ZERO for _ in surface.points)
    return tuple(residue_form(form, P) for P in surface.points)


def kahler_rank(surface, W=None):
    """Rank of the residue vectors of f dg over window pairs of functions."""
    W = surface.N if W is None else W
    funcs = [basis_function(surface, 0, n, p) for n, p in window_labels(surface, W)]
    red = RowReducer()
    for f in funcs:
        for g in funcs:
            vec = residue_vector(surface, f, g)
            if any(vec):
                if sum(vec, ZERO):
                    raise ArithmeticError("residue theorem violated")
                red.add({k: v for k, v in enumerate(vec) if v})
    return red.rank


__all__ = [
    "CoboundarySystem",
    "FamilyRank",
    "FeasibilityCertificate",
    "ProbeReport",
    "WindowMatrix",
    "coboundary_feasible",
    "coboundary_system",
    "cocycle_matrix",
    "family_rank",
    "kahler_rank",
    "l_invariant_uniqueness_probe",
    "residue_vector",
]
