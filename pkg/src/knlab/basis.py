"""Marked spheres, the almost-graded basis f^lam_{n,p}, the residue pairing
and expansion of sections in the basis.

Points are exact rationals or ``INF``.  The last out-point is always
infinity, so every basis element is a constant times a product of powers of
(z - x) over the finite marked points.
"""
from dataclasses import dataclass, field

from .exact.laurent import residue_of_products
from .exact.linalg import rank
from .exact.rational import INF, RationalFunction, ZERO_FUNCTION, point_str, sphere_point
from .exact.scalar import ONE, ZERO, scalar_str, to_scalar


class SurfaceError(ValueError):
    pass


class AdmissibilityError(ValueError):
    pass


class MarkedSurface:
    """The sphere with in-points I and out-points O (O ends with infinity)."""

    def __init__(self, in_points, out_points):
        self.in_points = tuple(in_points)
        self.out_points = tuple(out_points)
        self.points = self.in_points + self.out_points
        self.K = len(self.in_points)
        self.N = len(self.points)
        self.finite_points = tuple(p for p in self.points if p is not INF)
        self._finite_set = frozenset(self.finite_points)
        self._basis = {}

    def __eq__(self, other):
        return (
            isinstance(other, MarkedSurface)
            and self.in_points == other.in_points
            and self.out_points == other.out_points
        )

    def __hash__(self):
        return hash((self.in_points, self.out_points))

    def __repr__(self):
        ins = ", ".join(point_str(p) for p in self.in_points)
        outs = ", ".join(point_str(p) for p in self.out_points)
        return f"MarkedSurface(I=[{ins}], O=[{outs}])"

    @property
    def is_classical(self):
        return self.K == 1 and self.N == 2 and self.in_points[0] == 0

    def admits(self, func):
        """True when every pole of ``func`` is a finite marked point."""
        if func.has_irrational_poles():
            return False
        return all(a in self._finite_set for a in func.finite_poles())

    def describe(self):
        return {
            "in_points": [point_str(p) for p in self.in_points],
            "out_points": [point_str(p) for p in self.out_points],
        }


def make_surface(in_points, out_points):
    """Validate and build a marked sphere.

    Points may be given as ints, Fractions, mpq or strings ("3/2", "inf").
    The basis recipe only spans the section spaces when there are at most
    as many out-points as in-points, so larger O is rejected.
    """
    I = [sphere_point(p) for p in in_points]
    O = [sphere_point(p) for p in out_points]
    if not I:
        raise SurfaceError("the in-point list I is empty")
    if not O:
        raise SurfaceError("the out-point list O is empty")
    if O[-1] is not INF:
        raise SurfaceError("the last out-point must be infinity")
    for p in I:
        if p is INF:
            raise SurfaceError("in-points must be finite")
    if any(p is INF for p in O[:-1]):
        raise SurfaceError("infinity may only appear as the last out-point")
    seen = set()
    for p in I + O:
        if p in seen:
            raise SurfaceError(f"duplicate point {point_str(p)}")
        seen.add(p)
    if len(O) > len(I):
        raise SurfaceError(
            f"{len(O)} out-points but only {len(I)} in-points; "
            "the basis recipe needs |O| <= |I|"
        )
    return MarkedSurface(I, O)


def classical_surface():
    return make_surface([0], [INF])


# -- sections -------------------------------------------------------------


class Section:
    """A lam-form f(z) dz^lam on a marked sphere."""

    __slots__ = ("weight", "func", "surface")

    def __init__(self, weight, func, surface, check=True):
        if not isinstance(func, RationalFunction):
            func = RationalFunction.constant(func) if not hasattr(func, "num") else func
        if check and not surface.admits(func):
            raise AdmissibilityError(
                f"{func} has poles outside the marked points of {surface!r}"
            )
        self.weight = int(weight)
        self.func = func
        self.surface = surface

    def __eq__(self, other):
        return (
            isinstance(other, Section)
            and self.weight == other.weight
            and self.func == other.func
            and self.surface == other.surface
        )

    def __hash__(self):
        return hash((self.weight, self.func))

    def __repr__(self):
        return f"Section(weight={self.weight}, {self.func})"

    def is_zero(self):
        return self.func.is_zero()

    def order_at(self, p):
        """Order of the section at p; at infinity the chart factor is included."""
        return section_order(self.func, self.weight, p)

    def __add__(self, other):
        _same(self, other)
        return Section(self.weight, self.func + other.func, self.surface, check=False)

    def __sub__(self, other):
        _same(self, other)
        return Section(self.weight, self.func - other.func, self.surface, check=False)

    def __neg__(self):
        return Section(self.weight, -self.func, self.surface, check=False)

    def scale(self, c):
        return Section(self.weight, self.func.scale(c), self.surface, check=False)


def _same(a, b):
    if a.surface != b.surface:
        raise ValueError("sections live on different surfaces")
    if a.weight != b.weight:
        raise ValueError(f"weight mismatch {a.weight} vs {b.weight}")


def section_order(func, weight, p):
    if p is INF:
        return func.order_at(INF) - 2 * weight
    return func.order_at(p)


def as_section(surface, weight, value):
    """Accept a Section, RationalFunction or scalar and return a Section."""
    if isinstance(value, Section):
        if value.surface != surface:
            raise ValueError("section belongs to another surface")
        if value.weight != weight:
            raise ValueError(f"expected weight {weight}, got {value.weight}")
        return value
    if not isinstance(value, RationalFunction):
        value = RationalFunction.constant(value)
    return Section(weight, value, surface)


# -- basis ----------------------------------------------------------------


def prescribe_orders(surface, lam, n, p):
    """Orders of f^lam_{n,p} at I followed by O.

    At P_i the order is (n+1-lam) - delta_i^p.  Every finite out-point gets
    -(n+1-lam) and infinity takes the balance so the total is -2 lam.
    """
    if not 1 <= p <= surface.K:
        raise ValueError(f"point index p={p} outside 1..{surface.K}")
    m = n + 1 - lam
    orders = [m - (1 if i == p else 0) for i in range(1, surface.K + 1)]
    orders += [-m] * (len(surface.out_points) - 1)
    orders.append(-2 * lam - sum(orders))
    return tuple(orders)


@dataclass(frozen=True)
class BasisElement:
    lam: int
    n: int
    p: int
    section: Section = field(compare=False)

    @property
    def func(self):
        return self.section.func

    @property
    def name(self):
        return basis_name(self.lam, self.n, self.p, self.section.surface.K)

    def __str__(self):
        return f"{self.name} = {self.func}"


def basis_name(lam, n, p, K=1):
    stem = {0: "A", -1: "e"}.get(lam, f"f^{lam}")
    return f"{stem}_{n}" if K == 1 else f"{stem}_{n},{p}"


def basis_element(surface, lam, n, p=1):
    """The normalized basis element f^lam_{n,p} (memoized per surface)."""
    key = (lam, n, p)
    hit = surface._basis.get(key)
    if hit is not None:
        return hit
    orders = prescribe_orders(surface, lam, n, p)
    factors = {x: k for x, k in zip(surface.points, orders) if x is not INF}
    anchor = surface.in_points[p - 1]
    lead = ONE
    for x, k in factors.items():
        if x != anchor and k:
            lead *= (anchor - x) ** k
    func = RationalFunction.from_factors(factors, ONE / lead)
    got = tuple(section_order(func, lam, x) for x in surface.points)
    if got != orders:
        raise ArithmeticError(f"order prescription {orders} realized as {got}")
    element = BasisElement(lam, n, p, Section(lam, func, surface, check=False))
    surface._basis[key] = element
    return element


def basis_function(surface, lam, n, p=1):
    return basis_element(surface, lam, n, p).section.func


def window_labels(surface, W):
    """(n, p) pairs with |n| <= W in degree-major order."""
    return [(n, p) for n in range(-W, W + 1) for p in range(1, surface.K + 1)]


# -- pairing and expansion ------------------------------------------------


def pairing_functions(surface, f, g):
    """Residue sum over I of f g dz for chart representatives f, g."""
    total = ZERO
    for P in surface.in_points:
        total += residue_of_products(P, [(ONE, [(f, 0), (g, 0)])])
    return total


def kn_pairing(f, g):
    """The residue pairing of a lam-form with a (1-lam)-form."""
    if f.weight + g.weight != 1:
        raise ValueError(f"weights {f.weight} and {g.weight} are not complementary")
    if f.surface != g.surface:
        raise ValueError("sections live on different surfaces")
    return pairing_functions(f.surface, f.func, g.func)


@dataclass
class GradedExpansion:
    """Finite table (n, p) -> coefficient of f^lam_{n,p}."""

    lam: int
    surface: MarkedSurface
    coeffs: dict

    def degrees(self):
        return sorted({n for n, _ in self.coeffs})

    def min_degree(self):
        return min(n for n, _ in self.coeffs) if self.coeffs else None

    def max_degree(self):
        return max(n for n, _ in self.coeffs) if self.coeffs else None

    def get(self, n, p):
        return self.coeffs.get((n, p), ZERO)

    def to_function(self):
        total = ZERO_FUNCTION
        for (n, p), c in sorted(self.coeffs.items()):
            total = total + basis_function(self.surface, self.lam, n, p).scale(c)
        return total

    def to_section(self):
        return Section(self.lam, self.to_function(), self.surface, check=False)

    def as_strings(self):
        return {f"{n},{p}": scalar_str(c) for (n, p), c in sorted(self.coeffs.items())}


def degree_range(surface, func, lam):
    """Inclusive (low, high) bounds on the degrees present in ``func``.

    Below ``low`` the pairing with every dual element is regular at I; above
    ``high`` it is regular at O, so those coefficients vanish.
    """
    low = min(func.order_at(P) for P in surface.in_points) + lam
    outs = [(Q, section_order(func, lam, Q)) for Q in surface.out_points]
    high = low
    while True:
        ok = True
        for Q, o in outs:
            dual_order = section_order(basis_function(surface, 1 - lam, -high, 1), 1 - lam, Q)
            if o + dual_order < 0:
                ok = False
                break
        if ok:
            break
        high += 1
    # a pole at an out-point can push the upper end below the lower one
    return low, max(low, high - 1)


def expand_function(surface, func, lam):
    """Coefficients of a chart representative in the weight-lam basis."""
    if func.is_zero():
        return {}
    low, high = degree_range(surface, func, lam)
    out = {}
    for n in range(low, high + 1):
        for p in range(1, surface.K + 1):
            c = pairing_functions(surface, func, basis_function(surface, 1 - lam, -n, p))
            if c:
                out[(n, p)] = c
    return out


def expand(surface, sec, lam=None):
    """Expand a Section (or a RationalFunction with explicit lam)."""
    if isinstance(sec, Section):
        if sec.surface != surface:
            raise ValueError("section belongs to another surface")
        lam, func = sec.weight, sec.func
    else:
        if lam is None:
            raise ValueError("a weight is needed for a bare rational function")
        func = sec if isinstance(sec, RationalFunction) else RationalFunction.constant(sec)
    if not surface.admits(func):
        raise AdmissibilityError(f"{func} has poles outside the marked points")
    return GradedExpansion(lam, surface, expand_function(surface, func, lam))


@dataclass
class DualityReport:
    lam: int
    window: int
    size: int
    rank: int
    checked: int
    violation: object = None

    @property
    def ok(self):
        return self.violation is None and self.rank == self.size

    def summary(self):
        if self.ok:
            return f"lam={self.lam} W={self.window}: {self.checked} pairings, identity pattern, rank {self.rank}"
        return f"lam={self.lam} W={self.window}: violation {self.violation}, rank {self.rank}/{self.size}"


def verify_duality(surface, lam, W):
    """Check <f^lam_{n,p}, f^{1-lam}_{m,r}> = delta_{-n}^m delta_p^r on |n|,|m| <= W."""
    labels = window_labels(surface, W)
    rows = []
    violation = None
    for n, p in labels:
        f = basis_function(surface, lam, n, p)
        row = {}
        for j, (m, r) in enumerate(labels):
            value = pairing_functions(surface, f, basis_function(surface, 1 - lam, m, r))
            expected = ONE if (m == -n and r == p) else ZERO
            if value != expected and violation is None:
                violation = {"n": n, "p": p, "m": m, "r": r, "value": scalar_str(value)}
            if value:
                row[j] = value
        rows.append(row)
    return DualityReport(lam, W, len(labels), rank(rows), len(labels) ** 2, violation)
