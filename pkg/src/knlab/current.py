"""Current algebras g (x) A and the operator algebras g (x) A + L.

Elements in the public API are :class:`CurrentElement` (one function per
Lie basis index) and :class:`D1gElement`; internally everything is an
:class:`~knlab.algebras.OpElement` so the geometric cocycle specs of
:mod:`knlab.cocycles` apply unchanged.  This module adds window-table
cocycles, coboundaries, the split cocycle conditions and invariance checks.
"""
from dataclasses import dataclass
from itertools import combinations

from .algebras import OpElement, OperatorAlgebra, op_bracket
from .basis import as_section
from .cocycles import (
    Affine,
    CheckReport,
    CocycleSpec,
    Combination,
    Mixing,
    VectorField,
    _names,
    check_antisymmetry,
    cocycle_identity_value,
)
from .exact.linalg import RowReducer
from .exact.rational import ZERO_FUNCTION
from .exact.scalar import ONE, ZERO, scalar_str, to_scalar


class WindowError(ValueError):
    """A window-supported object was asked about something outside its window."""

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


def current_algebra(surface, lie):
    return OperatorAlgebra(surface, "current", lie)


def d1g_algebra(surface, lie):
    return OperatorAlgebra(surface, "D1g", lie)


# -- public element types -------------------------------------------------------


@dataclass(frozen=True)
class CurrentElement:
    """sum_a x_a (x) parts[a] for the Lie basis x_a."""

    algebra: OperatorAlgebra
    parts: tuple

    @classmethod
    def from_op(cls, algebra, el):
        parts, vec = el.canonical(algebra.lie.dim)
        if not vec.is_zero():
            raise ValueError("element has a vector field part")
        return cls(algebra, parts)

    @classmethod
    def of(cls, algebra, table):
        """From {lie index: function or Section}."""
        parts = [ZERO_FUNCTION] * algebra.lie.dim
        for a, f in table.items():
            parts[a] = as_section(algebra.surface, 0, f).func
        return cls(algebra, tuple(parts))

    def to_op(self):
        return OpElement(tuple((self.algebra.lie.unit(a), F) for a, F in enumerate(self.parts)))

    def __eq__(self, other):
        return isinstance(other, CurrentElement) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)


@dataclass(frozen=True)
class D1gElement:
    current: CurrentElement
    vec: object

    @classmethod
    def from_op(cls, algebra, el):
        parts, vec = el.canonical(algebra.lie.dim)
        return cls(CurrentElement(algebra, parts), vec)

    def to_op(self):
        return OpElement(self.current.to_op().terms, self.vec)


@dataclass(frozen=True)
class ExtendedElement:
    """central * t + base, with t central of degree 0."""

    central: object
    base: object


def _same_algebra(u, v):
    if u.algebra.surface != v.algebra.surface:
        raise ValueError("elements live on different surfaces")
    if u.algebra.lie is not v.algebra.lie:
        raise ValueError("elements use different Lie algebras")


def bracket_current(u, v):
    """[x (x) f, y (x) g] = [x, y] (x) fg, extended bilinearly."""
    _same_algebra(u, v)
    alg = u.algebra
    return CurrentElement.from_op(alg, op_bracket(alg.lie, u.to_op(), v.to_op()))


def bracket_D1g(a, b):
    """Bracket of the semidirect sum of currents and vector fields.

    [(x(g), e), (y(h), f)] = ([x,y](gh) + y(e.h) - x(f.g), [e, f])
    """
    _same_algebra(a.current, b.current)
    alg = a.current.algebra
    return D1gElement.from_op(alg, op_bracket(alg.lie, a.to_op(), b.to_op()))


def eval_cocycle(spec, algebra, a, b):
    return spec.evaluate(algebra, _op(a), _op(b))


def extended_bracket(spec, algebra, a_hat, b_hat):
    """[a^, b^] = [a, b]^ + gamma(a, b) t; the central coefficients do not enter."""
    a, b = _op(a_hat.base), _op(b_hat.base)
    return ExtendedElement(spec.evaluate(algebra, a, b), algebra.bracket(a, b))


def _op(x):
    if isinstance(x, OpElement):
        return x
    return x.to_op()


# -- window-supported specs ---------------------------------------------------------


class UserMatrix(CocycleSpec):
    """A bilinear form given by its values on window basis pairs.

    Missing pairs are zero inside the window, and the value at (b, a)
    defaults to minus the value at (a, b).  Any basis component outside the
    window raises :class:`WindowError`.
    """

    def __init__(self, algebra, table, W, name="user"):
        self.algebra = algebra
        self.W = W
        self.name = name
        full = {}
        for (la, lb), v in table.items():
            v = to_scalar(v)
            full[(la, lb)] = v
        for (la, lb), v in list(full.items()):
            full.setdefault((lb, la), -v)
        self.table = {k: v for k, v in full.items() if v}

    def _coords(self, el):
        coords = self.algebra.coordinates(el)
        for label in coords:
            d = abs(self.algebra.degree(label))
            if d > self.W:
                raise WindowError(
                    f"{self.name} is only known on |degree| <= {self.W}, needs {d}", d
                )
        return coords

    def evaluate(self, algebra, a, b):
        ca, cb = self._coords(a), self._coords(b)
        total = ZERO
        for la, x in ca.items():
            for lb, y in cb.items():
                v = self.table.get((la, lb))
                if v:
                    total += x * y * v
        return total

    def value(self, algebra, la, lb):
        if abs(algebra.degree(la)) <= self.W and abs(algebra.degree(lb)) <= self.W:
            return self.table.get((la, lb), ZERO)
        return super().value(algebra, la, lb)


class Coboundary(CocycleSpec):
    """(a, b) -> phi([a, b]) for phi given on window basis labels."""

    def __init__(self, algebra, phi, W, name="coboundary"):
        self.algebra = algebra
        self.phi = {k: to_scalar(v) for k, v in phi.items() if to_scalar(v)}
        self.W = W
        self.name = name

    def evaluate(self, algebra, a, b):
        return self._value_of(self.algebra.bracket(a, b))

    def value(self, algebra, la, lb):
        return self._value_of(self.algebra.bracket_labels(la, lb))

    def _value_of(self, br):
        total = ZERO
        for label, c in self.algebra.coordinates(br).items():
            d = abs(self.algebra.degree(label))
            if d > self.W:
                raise WindowError(
                    f"bracket reaches degree {self.algebra.degree(label)}, outside the "
                    f"window |n| <= {self.W}; a window of {d} is required",
                    d,
                )
            v = self.phi.get(label)
            if v:
                total += c * v
        return total


def coboundary_of(algebra, phi, W, name="coboundary"):
    return Coboundary(algebra, phi, W, name)


class ExtendByZero(CocycleSpec):
    """A cocycle on currents, extended to the operator algebra by zero on L."""

    def __init__(self, inner, name=None):
        self.inner = inner
        self.name = name or f"{inner.name} extended by zero"

    def evaluate(self, algebra, a, b):
        if not a.terms or not b.terms:
            return ZERO
        return self.inner.evaluate(algebra, OpElement(a.terms), OpElement(b.terms))


def affine_spec(alpha, cycle=None, name=None):
    kw = {} if cycle is None else {"cycle": cycle}
    return Affine(alpha, name=name, **kw)


def mixing_spec(phi, T=None, cycle=None, name=None):
    kw = {} if cycle is None else {"cycle": cycle}
    return Mixing(phi, T, name=name, **kw)


def assembled_spec(alpha, phi, r1, r2, r3, R=None, T=None, name=None):
    """r1 gamma_alpha + r2 gamma_phi + r3 gamma_v on the operator algebra."""
    parts = [(r1, Affine(alpha)), (r3, VectorField(R))]
    if phi is not None:
        parts.insert(1, (r2, Mixing(phi, T)))
    return Combination(parts, name=name or "assembled")


# -- checks -----------------------------------------------------------------------


def _family(labels):
    kinds = "".join(sorted("e" if x[0] == "e" else "x" for x in labels))
    return {"eee": "L", "xxx": "currents", "eex": "L,L,current", "exx": "L,current,current"}[kinds]


FAMILIES = ("L", "currents", "L,L,current", "L,current,current")


def check_cocycle_conditions(algebra, spec, W):
    """Split cocycle conditions on the operator algebra, one report per family.

    The four families are the triples of vector fields, of currents, two
    vector fields with a current and one vector field with two currents.
    Each condition is the cyclic cocycle identity restricted to that type
    of triple; antisymmetry is checked first.
    """
    reports = {f: CheckReport(f"cocycle condition [{f}] for {spec.name}") for f in FAMILIES}
    anti = check_antisymmetry(algebra, spec, W)
    labels = algebra.basis(W)
    for triple in combinations(labels, 3):
        fam = _family(triple)
        if fam not in reports:
            continue
        rep = reports[fam]
        if not rep.ok:
            continue
        rep.checked += 1
        v = cocycle_identity_value(algebra, spec, *triple)
        if v:
            rep.failure = {"triple": _names(algebra, triple), "value": scalar_str(v)}
    return anti, [reports[f] for f in FAMILIES if algebra.has_vectors or f == "currents"]


def conditions_ok(result):
    anti, reports = result
    return anti.ok and all(r.ok for r in reports)


def check_L_invariance_current(algebra, spec, W):
    """gamma(x(e.g), y(h)) + gamma(x(g), y(e.h)) = 0 on window samples."""
    surface = algebra.surface
    report = CheckReport(f"L-invariance of {spec.name}")
    vec_alg = OperatorAlgebra(surface, "L")
    currents = [lab for lab in algebra.basis(W) if lab[0] == "x"]
    vectors = vec_alg.basis(W)
    lie = algebra.lie
    for le in vectors:
        e = vec_alg.element(le)
        moved = {lab: op_bracket(lie, e, algebra.element(lab)) for lab in currents}
        for i, la in enumerate(currents):
            for lb in currents[i:]:
                report.checked += 1
                v = spec.evaluate(algebra, moved[la], algebra.element(lb)) + spec.evaluate(
                    algebra, algebra.element(la), moved[lb]
                )
                if v:
                    report.failure = {
                        "vector": vec_alg.label_name(le),
                        "pair": _names(algebra, (la, lb)),
                        "value": scalar_str(v),
                    }
                    return report
    return report


def check_constant_vanishing(algebra, spec, W):
    """gamma(x (x) 1, y (x) g) = 0 for every Lie basis x, y and window g."""
    report = CheckReport(f"constant-argument vanishing of {spec.name}")
    lie = algebra.lie
    one = algebra.from_sections
    currents = [lab for lab in algebra.basis(W) if lab[0] == "x"]
    for a in range(lie.dim):
        c = one([(lie.unit(a), ONE)])
        for lb in currents:
            report.checked += 1
            v = spec.evaluate(algebra, c, algebra.element(lb))
            if v:
                report.failure = {"x": lie.labels[a], "other": algebra.label_name(lb), "value": scalar_str(v)}
                return report
    return report


def check_block_orthogonality(algebra, spec, W):
    """Zero values between currents from different direct summands."""
    report = CheckReport(f"block orthogonality of {spec.name}")
    blocks = algebra.lie.blocks
    owner = {i: b for b, idx in enumerate(blocks) for i in idx}
    currents = [lab for lab in algebra.basis(W) if lab[0] == "x"]
    for la in currents:
        for lb in currents:
            if owner[la[1]] == owner[lb[1]]:
                continue
            report.checked += 1
            v = spec.value(algebra, la, lb)
            if v:
                report.failure = {"pair": _names(algebra, (la, lb)), "value": scalar_str(v)}
                return report
    return report


def perfectness_witness(algebra, W):
    """Write every window current x_a (x) A as a sum of brackets [z (x) A, y (x) 1].

    Solves x_a = sum c_ij [x_i, x_j] in the Lie algebra and then checks the
    identity in the current algebra.  Returns a CheckReport; it fails for
    Lie algebras that are not perfect.
    """
    lie = algebra.lie
    report = CheckReport(f"perfectness of {algebra.name}")
    red = RowReducer(track=True)
    for i in range(lie.dim):
        for j in range(i + 1, lie.dim):
            if lie.c[i][j]:
                red.add(dict(lie.c[i][j]), tag=(i, j))
    combos = {}
    for a in range(lie.dim):
        row, combo = red.reduce({a: ONE}, {})
        if row:
            report.failure = {"element": lie.labels[a], "reason": "not in the derived algebra"}
            return report
        # the unit row reduced to zero: combo holds -sum of used pivot combos
        combos[a] = {k: -v for k, v in combo.items()}
    one = algebra.from_sections
    for lab in algebra.basis(W):
        if lab[0] != "x":
            continue
        _, a, n, p = lab
        target = algebra.element(lab)
        F = target.terms[0][1]
        total = OpElement()
        for (i, j), c in combos[a].items():
            br = algebra.bracket(one([(lie.unit(i), F)]), one([(lie.unit(j), ONE)]))
            total = total + br.scale(c)
        report.checked += 1
        if not algebra.equal(total, target):
            report.failure = {"element": algebra.label_name(lab)}
            return report
    return report


__all__ = [
    "Coboundary",
    "CurrentElement",
    "D1gElement",
    "ExtendByZero",
    "ExtendedElement",
    "FAMILIES",
    "UserMatrix",
    "WindowError",
    "affine_spec",
    "assembled_spec",
    "bracket_D1g",
    "bracket_current",
    "check_L_invariance_current",
    "check_block_orthogonality",
    "check_cocycle_conditions",
    "check_constant_vanishing",
    "coboundary_of",
    "conditions_ok",
    "current_algebra",
    "d1g_algebra",
    "eval_cocycle",
    "extended_bracket",
    "mixing_spec",
    "perfectness_witness",
]
