"""Products, brackets and the vector-field action on sections, plus
window algebras and almost-grading analysis.

All algebras share one element type, :class:`OpElement`: a finite sum of
terms ``X (x) F`` with X a coefficient vector in a finite-dimensional Lie
algebra and F a function, together with a vector field part.  Functions
are the case of the one-dimensional abelian Lie algebra, vector fields the
case of no current part, and the differential operator algebras combine
both.
"""
from dataclasses import dataclass, field

from .basis import (
    Section,
    as_section,
    basis_function,
    basis_name,
    expand_function,
    window_labels,
)
from .exact.rational import ZERO_FUNCTION
from .exact.scalar import ONE, ZERO, scalar_str, to_scalar
from .lie import build_abelian

# -- chart formulas ---------------------------------------------------------


def mul_funcs(g, h):
    return g * h


def bracket_funcs(e, f):
    """[e, f] = e f' - f e' for vector fields e d/dz, f d/dz."""
    if e.is_zero() or f.is_zero():
        return ZERO_FUNCTION
    return e * f.derivative() - f * e.derivative()


def action_funcs(e, g, lam):
    """e . g = e g' + lam g e' on a lam-form g."""
    if e.is_zero() or g.is_zero():
        return ZERO_FUNCTION
    out = e * g.derivative()
    if lam:
        out = out + (g * e.derivative()).scale(lam)
    return out


def _check_pair(a, b, wa, wb):
    if a.surface != b.surface:
        raise ValueError("sections live on different surfaces")
    if a.weight != wa or b.weight != wb:
        raise ValueError(f"expected weights ({wa}, {wb}), got ({a.weight}, {b.weight})")


def mul_A(g, h):
    """Product of two functions."""
    _check_pair(g, h, 0, 0)
    return Section(0, g.func * h.func, g.surface, check=False)


def bracket_L(e, f):
    """Lie bracket of two vector fields."""
    _check_pair(e, f, -1, -1)
    return Section(-1, bracket_funcs(e.func, f.func), e.surface, check=False)


def lie_action(e, g):
    """Lie derivative of the form g along the vector field e."""
    if e.weight != -1:
        raise ValueError(f"the acting section must be a vector field, got weight {e.weight}")
    if e.surface != g.surface:
        raise ValueError("sections live on different surfaces")
    return Section(g.weight, action_funcs(e.func, g.func, g.weight), g.surface, check=False)


@dataclass(frozen=True)
class D1Element:
    """A pair (function, vector field) in the algebra of first order operators."""

    g: Section
    e: Section

    @classmethod
    def of(cls, surface, g=0, e=0):
        return cls(as_section(surface, 0, g), as_section(surface, -1, e))


def bracket_D1(a, b):
    """[(g,e),(h,f)] = (e.h - f.g, [e,f])."""
    if a.g.surface != b.g.surface:
        raise ValueError("elements live on different surfaces")
    surface = a.g.surface
    g, e, h, f = a.g.func, a.e.func, b.g.func, b.e.func
    func = action_funcs(e, h, 0) - action_funcs(f, g, 0)
    return D1Element(Section(0, func, surface, check=False), Section(-1, bracket_funcs(e, f), surface, check=False))


# -- unified elements --------------------------------------------------------


class OpElement:
    """sum_t X_t (x) F_t plus a vector field ``vec``.

    ``terms`` is a tuple of (lie coefficient tuple, RationalFunction).  The
    representation is not canonical; :meth:`canonical` sums terms per Lie
    basis index.
    """

    __slots__ = ("terms", "vec")

    def __init__(self, terms=(), vec=ZERO_FUNCTION):
        self.terms = tuple((X, F) for X, F in terms if any(X) and not F.is_zero())
        self.vec = vec

    def canonical(self, dim):
        parts = [ZERO_FUNCTION] * dim
        for X, F in self.terms:
            for a, c in enumerate(X):
                if c:
                    parts[a] = parts[a] + F.scale(c)
        return tuple(parts), self.vec

    def is_zero(self, dim):
        parts, vec = self.canonical(dim)
        return vec.is_zero() and all(p.is_zero() for p in parts)

    def __add__(self, other):
        return OpElement(self.terms + other.terms, self.vec + other.vec)

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_scalar(c)
        return OpElement(tuple((X, F.scale(c)) for X, F in self.terms), self.vec.scale(c))

    def __repr__(self):
        body = [f"{list(map(scalar_str, X))}*({F})" for X, F in self.terms]
        if not self.vec.is_zero():
            body.append(f"({self.vec}) d/dz")
        return "OpElement(" + " + ".join(body or ["0"]) + ")"


def op_bracket(lie, a, b):
    """Bracket in the operator algebra over ``lie``.

    [(X(x)F, e), (Y(x)G, f)] = ([X,Y](x)FG + Y(x)(e.G) - X(x)(f.F), [e,f]).
    """
    terms = []
    for X, F in a.terms:
        for Y, G in b.terms:
            XY = lie.bracket(X, Y)
            if any(XY):
                terms.append((XY, F * G))
    if not a.vec.is_zero():
        for Y, G in b.terms:
            terms.append((Y, action_funcs(a.vec, G, 0)))
    if not b.vec.is_zero():
        for X, F in a.terms:
            terms.append((tuple(-c for c in X), action_funcs(b.vec, F, 0)))
    return OpElement(terms, bracket_funcs(a.vec, b.vec))


# -- window algebras ---------------------------------------------------------

ONE_DIM = build_abelian(1)


class OperatorAlgebra:
    """A KN-type algebra with explicit window bases.

    Labels are ('x', a, n, p) for x_a (x) A_{n,p} and ('e', n, p) for
    e_{n,p}.  ``kind`` is one of 'A', 'L', 'D1', 'current', 'D1g'.
    """

    def __init__(self, surface, kind, lie=None):
        if kind not in ("A", "L", "D1", "current", "D1g"):
            raise ValueError(f"unknown algebra kind {kind!r}")
        if kind in ("current", "D1g") and lie is None:
            raise ValueError(f"{kind} needs a Lie algebra")
        self.surface = surface
        self.kind = kind
        self.lie = lie if kind in ("current", "D1g") else ONE_DIM
        self.has_currents = kind != "L"
        self.has_vectors = kind in ("L", "D1", "D1g")
        self._bracket_cache = {}
        self._elements = {}

    @property
    def name(self):
        if self.kind in ("current", "D1g"):
            tag = "current" if self.kind == "current" else "D1"
            return f"{self.lie.name}-{tag}"
        return self.kind

    def __repr__(self):
        return f"OperatorAlgebra({self.name}, {self.surface!r})"

    # -- basis -----------------------------------------------------------
    def basis(self, W):
        out = []
        for n, p in window_labels(self.surface, W):
            if self.has_currents:
                out += [("x", a, n, p) for a in range(self.lie.dim)]
            if self.has_vectors:
                out.append(("e", n, p))
        return out

    @staticmethod
    def degree(label):
        return label[-2]

    def label_name(self, label):
        K = self.surface.K
        if label[0] == "e":
            return basis_name(-1, label[1], label[2], K)
        _, a, n, p = label
        base = basis_name(0, n, p, K)
        if self.lie is ONE_DIM:
            return base
        return f"{self.lie.labels[a]}({base})"

    def element(self, label):
        hit = self._elements.get(label)
        if hit is not None:
            return hit
        if label[0] == "e":
            _, n, p = label
            if not self.has_vectors:
                raise ValueError(f"{self.name} has no vector fields")
            el = OpElement((), basis_function(self.surface, -1, n, p))
        else:
            _, a, n, p = label
            if not self.has_currents:
                raise ValueError(f"{self.name} has no current part")
            el = OpElement(((self.lie.unit(a), basis_function(self.surface, 0, n, p)),))
        self._elements[label] = el
        return el

    def from_sections(self, currents=(), vec=None):
        """Element from [(lie vector, weight-0 Section or function)] and a vector field."""
        terms = []
        for X, F in currents:
            F = as_section(self.surface, 0, F).func
            terms.append((tuple(to_scalar(c) for c in X), F))
        v = ZERO_FUNCTION if vec is None else as_section(self.surface, -1, vec).func
        return OpElement(terms, v)

    # -- operations -------------------------------------------------------
    def bracket(self, a, b):
        return op_bracket(self.lie, a, b)

    def bracket_labels(self, la, lb):
        key = (la, lb)
        hit = self._bracket_cache.get(key)
        if hit is None:
            hit = self.bracket(self.element(la), self.element(lb))
            self._bracket_cache[key] = hit
        return hit

    def coordinates(self, el):
        """Expansion {label: coefficient} of an element in the basis."""
        out = {}
        if self.has_currents:
            parts, vec = el.canonical(self.lie.dim)
            for a, F in enumerate(parts):
                for (n, p), c in expand_function(self.surface, F, 0).items():
                    out[("x", a, n, p)] = c
        else:
            vec = el.vec
        if self.has_vectors:
            for (n, p), c in expand_function(self.surface, vec, -1).items():
                out[("e", n, p)] = c
        elif not vec.is_zero():
            raise ValueError(f"{self.name} has no vector fields")
        return out

    def from_coordinates(self, coords):
        terms, vec = [], ZERO_FUNCTION
        for label, c in sorted(coords.items()):
            el = self.element(label).scale(c)
            terms += el.terms
            vec = vec + el.vec
        return OpElement(terms, vec)

    def equal(self, a, b):
        return (a - b).is_zero(self.lie.dim)


def algebra_A(surface):
    return OperatorAlgebra(surface, "A")


def algebra_L(surface):
    return OperatorAlgebra(surface, "L")


def algebra_D1(surface):
    return OperatorAlgebra(surface, "D1")


def jacobi_defect(algebra, la, lb, lc):
    """[[a,b],c] + [[b,c],a] + [[c,a],b] for three basis labels (an OpElement)."""
    el = algebra.element
    total = algebra.bracket(algebra.bracket_labels(la, lb), el(lc))
    total = total + algebra.bracket(algebra.bracket_labels(lb, lc), el(la))
    total = total + algebra.bracket(algebra.bracket_labels(lc, la), el(lb))
    return total


# -- almost-grading ------------------------------------------------------------

OPERATIONS = ("mul_A", "bracket_L", "lie_action", "bracket_D1")


@dataclass
class GradingReport:
    operation: str
    lam: int
    window: int
    lower_shift: int
    upper_shift: int
    upper_shift_previous: int
    pairs: int
    leading_failures: list = field(default_factory=list)

    @property
    def window_stable(self):
        return self.upper_shift == self.upper_shift_previous

    @property
    def ok(self):
        return self.lower_shift == 0 and not self.leading_failures and self.window_stable

    def summary(self):
        status = "ok" if self.ok else "FAIL"
        lam = f" lam={self.lam}" if self.operation == "lie_action" else ""
        return (
            f"{self.operation}{lam} W={self.window}: R={self.lower_shift} S={self.upper_shift} "
            f"(W-1: {self.upper_shift_previous}) pairs={self.pairs} "
            f"leading failures={len(self.leading_failures)} {status}"
        )


def _product_table(surface, operation, lam, n, p, m, r):
    """Expansions of the product of two basis elements, keyed by part.

    Returns (parts, expected) where parts maps a part name to its expansion
    and expected maps (part, p') to the predicted leading coefficient at
    degree n+m.
    """
    d = 1 if p == r else 0
    if operation == "mul_A":
        F = basis_function(surface, 0, n, p) * basis_function(surface, 0, m, r)
        return {"A": expand_function(surface, F, 0)}, {("A", r): ONE * d}
    if operation == "bracket_L":
        F = bracket_funcs(basis_function(surface, -1, n, p), basis_function(surface, -1, m, r))
        return {"e": expand_function(surface, F, -1)}, {("e", r): to_scalar(m - n) * d}
    if operation == "lie_action":
        F = action_funcs(basis_function(surface, -1, n, p), basis_function(surface, lam, m, r), lam)
        return {"f": expand_function(surface, F, lam)}, {("f", r): to_scalar(m + lam * n) * d}
    raise ValueError(f"unknown operation {operation!r}")


def _d1_products(surface, n, p, m, r):
    """The three kinds of basis pairs of D1 with their predicted leading terms."""
    d = 1 if p == r else 0
    A = lambda k, q: basis_function(surface, 0, k, q)  # noqa: E731
    e = lambda k, q: basis_function(surface, -1, k, q)  # noqa: E731
    out = []
    # (A, A) brackets vanish identically
    out.append(({"A": {}, "e": {}}, {}))
    # (e, A): (e.A, 0)
    F = action_funcs(e(n, p), A(m, r), 0)
    out.append(({"A": expand_function(surface, F, 0), "e": {}}, {("A", r): to_scalar(m) * d}))
    # (e, e): (0, [e, f])
    F = bracket_funcs(e(n, p), e(m, r))
    out.append(({"A": {}, "e": expand_function(surface, F, -1)}, {("e", r): to_scalar(m - n) * d}))
    return out


def grading_analysis(surface, operation, lam=0, W=5):
    """Expand every window product and record degree shifts.

    The lower shift R is the least (degree - n - m) over all nonzero
    products, the upper shift S the greatest.  Leading coefficients at
    degree n+m are compared with delta_p^r times 1, (m-n) or (m+lam n).
    """
    if operation not in OPERATIONS:
        raise ValueError(f"unknown operation {operation!r}")
    K = surface.K
    lower = upper = upper_prev = None
    failures = []
    pairs = 0
    labels = window_labels(surface, W)
    for n, p in labels:
        for m, r in labels:
            if operation == "bracket_D1":
                cases = _d1_products(surface, n, p, m, r)
            else:
                cases = [_product_table(surface, operation, lam, n, p, m, r)]
            inner = abs(n) < W and abs(m) < W
            for parts, expected in cases:
                pairs += 1
                degrees = [k for table in parts.values() for (k, _) in table]
                if not degrees:
                    continue
                lo, hi = min(degrees) - n - m, max(degrees) - n - m
                lower = lo if lower is None else min(lower, lo)
                upper = hi if upper is None else max(upper, hi)
                if inner:
                    upper_prev = hi if upper_prev is None else max(upper_prev, hi)
                for part, table in parts.items():
                    for q in range(1, K + 1):
                        want = expected.get((part, q), ZERO)
                        got = table.get((n + m, q), ZERO)
                        if got != want:
                            failures.append(
                                {"n": n, "p": p, "m": m, "r": r, "part": part, "q": q,
                                 "expected": scalar_str(want), "got": scalar_str(got)}
                            )
    return GradingReport(
        operation, lam, W,
        lower if lower is not None else 0,
        upper if upper is not None else 0,
        upper_prev if upper_prev is not None else 0,
        pairs, failures,
    )

