"""Local expansions, orders and residues on the Riemann sphere.

At a finite point a the local coordinate is t = z - a; at infinity it is
w = 1/z.  Residues are residues of the 1-form f dz, so at infinity the
chart change dz = -w**-2 dw is applied and the residue theorem holds
exactly.
"""
from dataclasses import dataclass
from math import comb

from .polynomial import taylor, order_at as poly_order_at
from .rational import INF, RationalFunction, point_str
from .scalar import ONE, ZERO, mpq


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series sum_k coeffs[k - order] * t**k, k <= upto."""

    point: object
    order: int
    coeffs: tuple
    upto: int

    def coefficient(self, k):
        if k > self.upto:
            raise ValueError(f"coefficient {k} beyond truncation {self.upto}")
        if k < self.order:
            return ZERO
        return self.coeffs[k - self.order]

    def is_zero(self):
        return not any(self.coeffs)

    def evaluate(self, t):
        """Value of the truncated sum at a nonzero local coordinate t."""
        t = mpq(t)
        return sum((c * t ** (self.order + i) for i, c in enumerate(self.coeffs)), ZERO)

    def __str__(self):
        var = "w" if self.point is INF else "t"
        terms = [f"{c}*{var}^{self.order + i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({var}^{self.upto + 1}) at {point_str(self.point)}"


def order_at(f, p):
    """Order of f at p; positive for zeros, negative for poles."""
    return f.order_at(p)


def derivative(f, k=1):
    return f.derivative(k)


def expand_at(f, p, upto):
    """Laurent expansion of f at p through the power ``upto``."""
    if f.is_zero():
        return LaurentSeries(p, upto, (ZERO,), upto)
    order, coeffs = local_coefficients(f, p, upto)
    if upto < order:
        return LaurentSeries(p, upto, (ZERO,), upto)
    return LaurentSeries(p, order, tuple(coeffs), upto)


def residue_form(f, p):
    """Residue of the 1-form f dz at p."""
    if f.is_zero():
        return ZERO
    if p is INF:
        order, coeffs = local_coefficients(f, INF, 1)
        return -coeffs[1 - order] if order <= 1 else ZERO
    order, coeffs = local_coefficients(f, p, -1)
    return coeffs[-1 - order] if order <= -1 else ZERO


def residue_theorem_defect(f):
    """Sum of residues of f dz over every pole including infinity."""
    total = residue_form(f, INF)
    for a in f.finite_poles():
        total += residue_form(f, a)
    return total


def local_coefficients(f, p, upto):
    """(order, [c_order .. c_upto]) for a nonzero f, cached on f."""
    cache = f._cache
    key = ("ser", p)
    hit = cache.get(key)
    if hit is not None and hit[2] >= upto:
        order, coeffs, known = hit
        return order, coeffs[: max(0, upto - order + 1)]
    order = f.order_at(p)
    target = upto
    if hit is not None:
        target = max(upto, hit[2] + (hit[2] - order + 1))
    count = target - order + 1
    if count <= 0:
        return order, []
    coeffs = _expand_infinity(f, count) if p is INF else _expand_finite(f, p, count)
    cache[key] = (order, coeffs, target)
    return order, coeffs[: max(0, upto - order + 1)]


def _expand_finite(f, a, count):
    poles = dict(f.poles)
    k_a = poles.pop(a, 0)
    skip = 0 if k_a else poly_order_at(f.num, a)
    series = taylor(f.num, a, count, skip=skip)
    for b, k in poles.items():
        series = _smul(series, _inverse_linear_power(a - b, k, count), count)
    if len(f.cof) > 1:
        series = _smul(series, _sinv(taylor(f.cof, a, count), count), count)
    return series


def _expand_infinity(f, count):
    num_rev = list(reversed(f.num))[:count]
    num_rev += [ZERO] * (count - len(num_rev))
    series = num_rev
    for b, k in f.poles:
        # 1 / (1 - b w)**k
        series = _smul(series, [mpq(comb(k + j - 1, j)) * b ** j for j in range(count)], count)
    if len(f.cof) > 1:
        rev = list(reversed(f.cof))[:count]
        rev += [ZERO] * (count - len(rev))
        series = _smul(series, _sinv(rev, count), count)
    return series


def _inverse_linear_power(d, k, count):
    """Series of (d + t)**-k in t."""
    inv = ONE / d
    base = inv ** k
    out = []
    step = -inv
    power = ONE
    for j in range(count):
        out.append(mpq(comb(k + j - 1, j)) * base * power)
        power *= step
    return out


def _smul(a, b, count):
    out = [ZERO] * count
    for i, x in enumerate(a[:count]):
        if not x:
            continue
        for j in range(min(len(b), count - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _sinv(a, count):
    a0 = a[0]
    if not a0:
        raise ZeroDivisionError("series with zero constant term")
    inv0 = ONE / a0
    out = [inv0]
    for n in range(1, count):
        acc = ZERO
        for i in range(1, min(n, len(a) - 1) + 1):
            if a[i]:
                acc += a[i] * out[n - i]
        out.append(-acc * inv0)
    return out


def residue_of_products(p, terms):
    """Residue at a finite point p of sum c * prod_i f_i^(d_i) dz.

    ``terms`` is an iterable of (c, [(f_i, d_i), ...]).  Each factor is
    expanded only as far as the orders of the other factors require, so
    forms that are regular at p cost nothing beyond the order lookups.
    """
    if p is INF:
        raise ValueError("residue_of_products works at finite points only")
    total = ZERO
    for c, factors in terms:
        if not c:
            continue
        if any(f.is_zero() for f, _ in factors):
            continue
        lows = [f.order_at(p) - d for f, d in factors]
        low_sum = sum(lows)
        if low_sum >= 0:
            continue
        start, series, upto = 0, [ONE], None
        for (f, d), low in zip(factors, lows):
            need = -1 + d - (low_sum - low)
            order, coeffs = local_coefficients(f, p, need)
            s_start, s_coeffs = order, list(coeffs)
            for _ in range(d):
                s_coeffs = [(s_start + i) * x for i, x in enumerate(s_coeffs)]
                s_start -= 1
            s_upto = need - d
            if upto is None:
                start, series, upto = s_start, s_coeffs, s_upto
                continue
            new_upto = min(upto + s_start, s_upto + start)
            new_start = start + s_start
            count = new_upto - new_start + 1
            if count <= 0:
                series, start, upto = [], new_start, new_upto
                continue
            series = _smul(series, s_coeffs, count)
            start, upto = new_start, new_upto
        idx = -1 - start
        if 0 <= idx < len(series):
            total += c * series[idx]
    return total
