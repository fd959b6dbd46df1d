"""Brute-force residue oracle, written without the package under test.

Functions are kept in factored form c * prod (z - x)**k.  Local series at
a finite point are built from generalized binomial expansions with
fractions.Fraction, multiplied term by term, and the residue is read off
as the coefficient of t**-1.  Each series carries the highest exponent it
knows, so truncation errors cannot go unnoticed.
"""
from fractions import Fraction


class Series:
    def __init__(self, coeffs, top):
        self.c = {k: v for k, v in coeffs.items() if v and k <= top}
        self.top = top

    @property
    def low(self):
        return min(self.c) if self.c else self.top + 1

    def __add__(self, other):
        top = min(self.top, other.top)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return Series(out, top)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return Series({k: v * s for k, v in self.c.items()}, self.top)

    def __mul__(self, other):
        top = min(self.top + other.low, other.top + self.low)
        out = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                if i + j <= top:
                    out[i + j] = out.get(i + j, 0) + a * b
        return Series(out, top)

    def d(self, times=1):
        s = self
        for _ in range(times):
            s = Series({k - 1: k * v for k, v in s.c.items() if k}, s.top - 1)
        return s

    def coefficient(self, k):
        if k > self.top:
            raise ValueError(f"series only known up to t^{self.top}")
        return self.c.get(k, Fraction(0))


def binomial_series(base, k, terms):
    """(base + t)**k for base != 0, exponents 0..terms."""
    base = Fraction(base)
    out, coeff = {}, Fraction(1)
    for j in range(terms + 1):
        out[j] = coeff * base ** (k - j)
        coeff = coeff * (k - j) / (j + 1)
    return out


def factored_series(const, factors, a, top):
    """Laurent series of const * prod (z - x)**k at z = a, valid through t**top."""
    a = Fraction(a)
    order = factors.get(a, 0)
    s = Series({order: Fraction(const)}, top)
    for x, k in factors.items():
        x = Fraction(x)
        if x == a or k == 0:
            continue
        s = s * Series(binomial_series(a - x, k, top - order + 1), top - order + 1)
    return Series(s.c, top)


def basis_factors(in_points, out_points, lam, n, p):
    """(const, {point: order}) of the basis element, normalized at in-point p.

    out_points lists finite points only; infinity absorbs the balance.
    """
    m = n + 1 - lam
    orders = {}
    for i, x in enumerate(in_points, 1):
        orders[Fraction(x)] = m - (1 if i == p else 0)
    for x in out_points:
        orders[Fraction(x)] = -m
    anchor = Fraction(in_points[p - 1])
    lead = Fraction(1)
    for x, k in orders.items():
        if x != anchor:
            lead *= (anchor - x) ** k
    return 1 / lead, orders


def value_at(const, factors, z):
    z = Fraction(z)
    out = Fraction(const)
    for x, k in factors.items():
        out *= (z - x) ** k
    return out


class Oracle:
    """Cocycle and pairing values summed over the in-points."""

    def __init__(self, in_points, out_points=(), depth=30):
        self.I = [Fraction(x) for x in in_points]
        self.O = [Fraction(x) for x in out_points]
        self.depth = depth

    def series(self, lam, n, p, a):
        const, factors = basis_factors(self.I, self.O, lam, n, p)
        return factored_series(const, factors, a, self.depth)

    def _sum(self, build):
        return sum((build(a).coefficient(-1) for a in self.I), Fraction(0))

    def pairing(self, lam, n, p, m, r):
        return self._sum(lambda a: self.series(lam, n, p, a) * self.series(1 - lam, m, r, a))

    def gamma_f(self, n, p, m, r):
        return self._sum(lambda a: self.series(0, n, p, a) * self.series(0, m, r, a).d())

    def gamma_v(self, n, p, m, r):
        def build(a):
            e, f = self.series(-1, n, p, a), self.series(-1, m, r, a)
            return (e.d(3) * f - e * f.d(3)).scale(Fraction(1, 2))
        return self._sum(build)

    def gamma_m(self, n, p, m, r):
        return self._sum(lambda a: self.series(-1, n, p, a) * self.series(0, m, r, a).d(2))

    def residue(self, const, factors, a):
        return factored_series(const, factors, a, self.depth).coefficient(-1)
