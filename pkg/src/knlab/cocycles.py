"""Geometric 2-cocycles evaluated by residue calculus.

The integral over a cycle around the in-points is taken to be the sum of
residues at those points, so every value is an exact rational.  The basic
integrands are

    function cocycle      g h'
    vector field cocycle  1/2 (e''' f - e f''') - R (e' f - e f')
    mixing cocycle        e g'' + T e g'

with connections R and T given in the z-chart (zero by default).

Specs act on :class:`~knlab.algebras.OpElement` values, so the same spec
object serves functions, vector fields, first order operators and their
current versions.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .algebras import OpElement, action_funcs
from .basis import Section, basis_function
from .exact.laurent import residue_of_products
from .exact.rational import ZERO_FUNCTION, RationalFunction
from .exact.scalar import ONE, ZERO, mpq, scalar_str, to_scalar
from .lie import BilinearForm, LinearForm

HALF = mpq(1, 2)


# -- cycles and connections ---------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """Separating cycle (index None) or the small circle around P_index."""

    index: object = None

    @classmethod
    def separating(cls):
        return cls(None)

    @classmethod
    def around(cls, i):
        return cls(int(i))

    def points(self, surface):
        if self.index is None:
            return surface.in_points
        if not 1 <= self.index <= surface.K:
            raise ValueError(f"cycle index {self.index} outside 1..{surface.K}")
        return (surface.in_points[self.index - 1],)

    def __str__(self):
        return "S" if self.index is None else f"C{self.index}"


SEPARATING = Cycle.separating()


@dataclass(frozen=True)
class ConnectionChoice:
    R: RationalFunction = ZERO_FUNCTION
    T: RationalFunction = ZERO_FUNCTION

    def validate(self, surface):
        for name, f in (("R", self.R), ("T", self.T)):
            if not surface.admits(f):
                raise ValueError(f"connection {name} = {f} has poles off the marked points")
        return self


def _function(value):
    if value is None:
        return ZERO_FUNCTION
    if isinstance(value, Section):
        return value.func
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(value)


# -- residue kernels on chart functions -------------------------------------


def _residue_sum(points, terms):
    total = ZERO
    for P in points:
        total += residue_of_products(P, terms)
    return total


@lru_cache(maxsize=1 << 18)
def gamma_f_funcs(points, g, h):
    """sum over points of res g h' dz."""
    if g.is_zero() or h.is_zero():
        return ZERO
    return _residue_sum(points, [(ONE, [(g, 0), (h, 1)])])


@lru_cache(maxsize=1 << 18)
def gamma_v_funcs(points, e, f, R=ZERO_FUNCTION, flip=False):
    """sum of res (1/2 (e''' f - e f''') - R (e' f - e f')) dz.

    ``flip`` reverses the sign of the e''' f term; it exists only to give
    the verification suite a deliberately broken cocycle to reject.
    """
    if e.is_zero() or f.is_zero():
        return ZERO
    first = -HALF if flip else HALF
    terms = [(first, [(e, 3), (f, 0)]), (-HALF, [(e, 0), (f, 3)])]
    if not R.is_zero():
        terms += [(-ONE, [(R, 0), (e, 1), (f, 0)]), (ONE, [(R, 0), (e, 0), (f, 1)])]
    return _residue_sum(points, terms)


@lru_cache(maxsize=1 << 18)
def gamma_m_funcs(points, e, g, T=ZERO_FUNCTION):
    """sum of res (e g'' + T e g') dz."""
    if e.is_zero() or g.is_zero():
        return ZERO
    terms = [(ONE, [(e, 0), (g, 2)])]
    if not T.is_zero():
        terms.append((ONE, [(T, 0), (e, 0), (g, 1)]))
    return _residue_sum(points, terms)


def clear_caches():
    gamma_f_funcs.cache_clear()
    gamma_v_funcs.cache_clear()
    gamma_m_funcs.cache_clear()


# -- section-level operations -----------------------------------------------


def cocycle_f(C, g, h):
    """Function cocycle of two functions over the cycle C."""
    if g.weight != 0 or h.weight != 0:
        raise ValueError("the function cocycle takes two functions")
    return gamma_f_funcs(C.points(g.surface), g.func, h.func)


def cocycle_v(C, R, e, f):
    """Vector field cocycle with projective connection R (None for zero)."""
    if e.weight != -1 or f.weight != -1:
        raise ValueError("the vector field cocycle takes two vector fields")
    return gamma_v_funcs(C.points(e.surface), e.func, f.func, _function(R))


def cocycle_m(C, T, a, b):
    """Mixing cocycle; (vector field, function) or the reverse order with a sign."""
    if a.weight == -1 and b.weight == 0:
        return gamma_m_funcs(C.points(a.surface), a.func, b.func, _function(T))
    if a.weight == 0 and b.weight == -1:
        return -gamma_m_funcs(C.points(a.surface), b.func, a.func, _function(T))
    raise ValueError("the mixing cocycle takes a vector field and a function")


# -- specs on operator elements -----------------------------------------------


class CocycleSpec:
    """A bilinear functional on OpElements of a given algebra."""

    name = "cocycle"

    def evaluate(self, algebra, a, b):
        raise NotImplementedError

    def value(self, algebra, la, lb):
        return self.evaluate(algebra, algebra.element(la), algebra.element(lb))

    def scaled(self, c):
        return Combination([(to_scalar(c), self)], name=f"{scalar_str(to_scalar(c))}*{self.name}")

    def __add__(self, other):
        return Combination([(ONE, self), (ONE, other)], name=f"{self.name}+{other.name}")

    def __sub__(self, other):
        return Combination([(ONE, self), (-ONE, other)], name=f"{self.name}-{other.name}")


def _lie_dim_check(algebra, size, what):
    if size != algebra.lie.dim:
        raise ValueError(f"{what} has size {size} but {algebra.lie.name} has dimension {algebra.lie.dim}")


class Affine(CocycleSpec):
    """alpha(x, y) times the function cocycle, on current parts."""

    def __init__(self, alpha=None, cycle=SEPARATING, name=None):
        if alpha is not None and not isinstance(alpha, BilinearForm):
            alpha = BilinearForm(alpha)
        self.alpha = alpha
        self.cycle = cycle
        self.name = name or f"affine[{alpha.name if alpha is not None and alpha.name else 'alpha'},{cycle}]"

    def _form(self, algebra):
        if self.alpha is None:
            return BilinearForm([[ONE]])
        return self.alpha

    def evaluate(self, algebra, a, b):
        if not a.terms or not b.terms:
            return ZERO
        alpha = self._form(algebra)
        _lie_dim_check(algebra, len(alpha.matrix), "alpha")
        points = self.cycle.points(algebra.surface)
        total = ZERO
        for X, F in a.terms:
            for Y, G in b.terms:
                c = alpha(X, Y)
                if c:
                    total += c * gamma_f_funcs(points, F, G)
        return total


class Mixing(CocycleSpec):
    """phi(x) times the mixing cocycle, extended antisymmetrically."""

    def __init__(self, phi=None, T=None, cycle=SEPARATING, name=None):
        if phi is not None and not isinstance(phi, LinearForm):
            phi = LinearForm(phi)
        self.phi = phi
        self.T = _function(T)
        self.cycle = cycle
        self.name = name or f"mixing[{phi.name if phi is not None and phi.name else 'phi'},{cycle}]"

    def evaluate(self, algebra, a, b):
        phi = self.phi or LinearForm([ONE])
        _lie_dim_check(algebra, len(phi.coeffs), "phi")
        points = self.cycle.points(algebra.surface)
        total = ZERO
        if not a.vec.is_zero():
            for Y, G in b.terms:
                c = phi(Y)
                if c:
                    total += c * gamma_m_funcs(points, a.vec, G, self.T)
        if not b.vec.is_zero():
            for X, F in a.terms:
                c = phi(X)
                if c:
                    total -= c * gamma_m_funcs(points, b.vec, F, self.T)
        return total


class VectorField(CocycleSpec):
    """The vector field cocycle on vector parts."""

    def __init__(self, R=None, cycle=SEPARATING, name=None, flip=False):
        self.R = _function(R)
        self.cycle = cycle
        self.flip = bool(flip)
        self.name = name or f"vector[{cycle}]"

    def evaluate(self, algebra, a, b):
        if a.vec.is_zero() or b.vec.is_zero():
            return ZERO
        return gamma_v_funcs(self.cycle.points(algebra.surface), a.vec, b.vec, self.R, self.flip)


class Combination(CocycleSpec):
    def __init__(self, parts, name=None):
        self.parts = [(to_scalar(c), s) for c, s in parts]
        self.name = name or "+".join(s.name for _, s in self.parts)

    def evaluate(self, algebra, a, b):
        total = ZERO
        for c, spec in self.parts:
            if c:
                total += c * spec.evaluate(algebra, a, b)
        return total


class ZeroCocycle(CocycleSpec):
    name = "zero"

    def evaluate(self, algebra, a, b):
        return ZERO


def function_cocycle(cycle=SEPARATING):
    return Affine(None, cycle, name=f"gamma_f[{cycle}]")


def vector_cocycle(R=None, cycle=SEPARATING):
    return VectorField(R, cycle, name=f"gamma_v[{cycle}]")


def mixing_cocycle(T=None, cycle=SEPARATING):
    return Mixing(None, T, cycle, name=f"gamma_m[{cycle}]")


def lambda_coefficients(lam):
    """(r1, r2, r3) of the weight-lam combination -(f + (1-2lam)/2 m + 2(6lam^2-6lam+1) v)."""
    lam = to_scalar(lam)
    return (-ONE, -(1 - 2 * lam) / 2, -2 * (6 * lam * lam - 6 * lam + 1))


def cocycle_D1(r1, r2, r3, R=None, T=None, cycle=SEPARATING):
    """r1 gamma_f + r2 gamma_m + r3 gamma_v on first order operators."""
    r1, r2, r3 = to_scalar(r1), to_scalar(r2), to_scalar(r3)
    name = f"D1[{scalar_str(r1)},{scalar_str(r2)},{scalar_str(r3)}]"
    return Combination(
        [(r1, function_cocycle(cycle)), (r2, mixing_cocycle(T, cycle)), (r3, vector_cocycle(R, cycle))],
        name=name,
    )


def cocycle_lambda(lam, R=None, T=None, cycle=SEPARATING):
    return cocycle_D1(*lambda_coefficients(lam), R=R, T=T, cycle=cycle)


# -- checks -------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failure: object = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.failure is None

    def summary(self):
        if self.ok:
            return f"{self.name}: pass ({self.checked} checked)"
        return f"{self.name}: FAIL at {self.failure}"


def _names(algebra, labels):
    return [algebra.label_name(x) for x in labels]


def check_antisymmetry(algebra, spec, W, name=None):
    report = CheckReport(name or f"antisymmetry of {spec.name}")
    labels = algebra.basis(W)
    for i, la in enumerate(labels):
        for lb in labels[i:]:
            report.checked += 1
            ab = spec.value(algebra, la, lb)
            ba = spec.value(algebra, lb, la)
            if ab + ba:
                report.failure = {"pair": _names(algebra, (la, lb)), "sum": scalar_str(ab + ba)}
                return report
    return report


def cocycle_identity_value(algebra, spec, la, lb, lc):
    el = algebra.element
    return (
        spec.evaluate(algebra, algebra.bracket_labels(la, lb), el(lc))
        + spec.evaluate(algebra, algebra.bracket_labels(lb, lc), el(la))
        + spec.evaluate(algebra, algebra.bracket_labels(lc, la), el(lb))
    )


def check_cocycle_identity(algebra, spec, W, name=None, labels=None):
    """Antisymmetry plus the cyclic identity on every window triple."""
    report = check_antisymmetry(algebra, spec, W, name=name or f"cocycle identity of {spec.name}")
    if not report.ok:
        return report
    labels = labels or algebra.basis(W)
    for triple in combinations(labels, 3):
        report.checked += 1
        v = cocycle_identity_value(algebra, spec, *triple)
        if v:
            report.failure = {"triple": _names(algebra, triple), "value": scalar_str(v)}
            return report
    return report


def level_support(algebra, spec, W):
    """{level: number of nonzero entries} over window pairs."""
    out = {}
    labels = algebra.basis(W)
    for i, la in enumerate(labels):
        for lb in labels[i + 1:]:
            if spec.value(algebra, la, lb):
                lev = algebra.degree(la) + algebra.degree(lb)
                out[lev] = out.get(lev, 0) + 1
    return out


def locality_bounds(algebra, spec, W):
    """(min level, max level) of nonzero window values, or None when all vanish."""
    support = level_support(algebra, spec, W)
    if not support:
        return None
    return min(support), max(support)


def _fn(F):
    return OpElement((((ONE,), F),))


def check_multiplicative(algebra, spec, W, name=None):
    """gamma(fg,h) + gamma(gh,f) + gamma(hf,g) = 0 on window triples of functions."""
    if algebra.kind != "A":
        raise ValueError("multiplicativity is a property of cocycles on functions")
    report = CheckReport(name or f"multiplicativity of {spec.name}")
    labels = algebra.basis(W)
    funcs = {lab: basis_function(algebra.surface, 0, lab[2], lab[3]) for lab in labels}
    for la, lb, lc in combinations_with_replacement(labels, 3):
        f, g, h = funcs[la], funcs[lb], funcs[lc]
        report.checked += 1
        v = (
            spec.evaluate(algebra, _fn(f * g), _fn(h))
            + spec.evaluate(algebra, _fn(g * h), _fn(f))
            + spec.evaluate(algebra, _fn(h * f), _fn(g))
        )
        if v:
            report.failure = {"triple": _names(algebra, (la, lb, lc)), "value": scalar_str(v)}
            return report
    return report


def check_L_invariant(algebra, spec, W, name=None):
    """gamma(e.g, h) + gamma(g, e.h) = 0 for window vector fields e and functions g, h."""
    if algebra.kind != "A":
        raise ValueError("this check takes cocycles on functions")
    report = CheckReport(name or f"L-invariance of {spec.name}")
    surface = algebra.surface
    labels = algebra.basis(W)
    funcs = {lab: basis_function(surface, 0, lab[2], lab[3]) for lab in labels}
    vecs = [(n, p, basis_function(surface, -1, n, p)) for n in range(-W, W + 1) for p in range(1, surface.K + 1)]
    for n, p, e in vecs:
        for i, la in enumerate(labels):
            for lb in labels[i:]:
                g, h = funcs[la], funcs[lb]
                report.checked += 1
                v = spec.evaluate(algebra, _fn(action_funcs(e, g, 0)), _fn(h)) + spec.evaluate(
                    algebra, _fn(g), _fn(action_funcs(e, h, 0))
                )
                if v:
                    report.failure = {
                        "vector": f"e_{n},{p}",
                        "pair": _names(algebra, (la, lb)),
                        "value": scalar_str(v),
                    }
                    return report
    return report

