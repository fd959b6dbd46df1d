"""Rational functions on the Riemann sphere.

A rational function is stored as ``num / (prod (z - a)**k * cof)`` where the
poles ``a`` are all the rational roots of the reduced denominator and
``cof`` is a monic cofactor without rational roots (almost always 1).
The representation is canonical, so equality and hashing are structural.
"""
from .polynomial import (
    linear_power,
    monic,
    order_at as poly_order_at,
    padd,
    pderiv,
    pdivmod,
    peval,
    pgcd,
    pmul,
    ppow,
    pscale,
    pstr,
    rational_roots,
    synthetic_division,
    trim,
    Polynomial,
)
from .scalar import ONE, ZERO, mpq, to_scalar


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return "INF"


INF = _Infinity()


def sphere_point(value):
    """Parse a point of the Riemann sphere: a rational or infinity."""
    if value is INF:
        return INF
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return INF
    return to_scalar(value)


def point_str(p):
    return "inf" if p is INF else str(p)


class RationalFunction:
    """Immutable rational function of the affine coordinate z."""

    __slots__ = ("num", "poles", "cof", "_hash", "_cache")

    def __init__(self, num=(), den=(1,)):
        num = trim(to_scalar(c) for c in _coeffs(num))
        den = trim(to_scalar(c) for c in _coeffs(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        lead = den[-1]
        num = pscale(num, ONE / lead)
        den = pscale(den, ONE / lead)
        poles = {}
        for r in rational_roots(den):
            k = poly_order_at(den, r)
            poles[r] = k
            for _ in range(k):
                den = synthetic_division(den, r)[0]
        self._set(*_reduce(num, poles, den))

    def _set(self, num, poles, cof):
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "cof", cof)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def _make(cls, num, poles, cof=(ONE,), reduced=False):
        obj = object.__new__(cls)
        if reduced:
            obj._set(num, tuple(sorted(poles.items())) if isinstance(poles, dict) else poles, cof)
        else:
            obj._set(*_reduce(num, dict(poles), cof))
        return obj

    @classmethod
    def constant(cls, c):
        c = to_scalar(c)
        return cls._make((c,) if c else (), (), reduced=True)

    @classmethod
    def monomial(cls, k, c=1):
        """c * z**k for any integer k."""
        c = to_scalar(c)
        if not c:
            return cls._make((), (), reduced=True)
        if k >= 0:
            return cls._make((ZERO,) * k + (c,), (), reduced=True)
        return cls._make((c,), ((ZERO, -k),), reduced=True)

    @classmethod
    def from_factors(cls, factors, c=1):
        """c * prod (z - a)**k over a mapping {a: k} with integer k."""
        c = to_scalar(c)
        if not c:
            return ZERO_FUNCTION
        num = (c,)
        poles = {}
        for a, k in factors.items():
            a = to_scalar(a)
            if k > 0:
                num = pmul(num, linear_power(a, k))
            elif k < 0:
                poles[a] = -k
        return cls._make(num, tuple(sorted(poles.items())), reduced=True)

    # -- structure -------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return (self.num == other.num and self.poles == other.poles
                    and self.cof == other.cof)
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self == RationalFunction.constant(other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.poles, self.cof))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def numerator(self):
        return Polynomial._raw(self.num)

    @property
    def denominator(self):
        return Polynomial._raw(self._den())

    def _den(self):
        den = self.cof
        for a, k in self.poles:
            den = pmul(den, linear_power(a, k))
        return den

    def finite_poles(self):
        """Pole locations with multiplicities, rational poles only."""
        return dict(self.poles)

    def has_irrational_poles(self):
        return len(self.cof) > 1

    def den_degree(self):
        return sum(k for _, k in self.poles) + len(self.cof) - 1

    def is_constant(self):
        return not self.poles and len(self.cof) == 1 and len(self.num) <= 1

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        target = dict(self.poles)
        for a, k in other.poles:
            if target.get(a, 0) < k:
                target[a] = k
        if self.cof == other.cof:
            cof, mul_self, mul_other = self.cof, (ONE,), (ONE,)
        else:
            g = pgcd(self.cof, other.cof)
            mul_self = pdivmod(other.cof, g)[0]
            mul_other = pdivmod(self.cof, g)[0]
            cof = pmul(self.cof, mul_self)
        a_part = pmul(self.num, mul_self)
        mine = dict(self.poles)
        for a, k in target.items():
            extra = k - mine.get(a, 0)
            if extra:
                a_part = pmul(a_part, linear_power(a, extra))
        b_part = pmul(other.num, mul_other)
        theirs = dict(other.poles)
        for a, k in target.items():
            extra = k - theirs.get(a, 0)
            if extra:
                b_part = pmul(b_part, linear_power(a, extra))
        return RationalFunction._make(padd(a_part, b_part), target, cof)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._make(pscale(self.num, -ONE), self.poles, self.cof, reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = to_scalar(c)
        if not c:
            return ZERO_FUNCTION
        if c == 1:
            return self
        return RationalFunction._make(pscale(self.num, c), self.poles, self.cof, reduced=True)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            if not self.num or not other.num:
                return ZERO_FUNCTION
            poles = dict(self.poles)
            for a, k in other.poles:
                poles[a] = poles.get(a, 0) + k
            cof = self.cof if len(other.cof) == 1 else pmul(self.cof, other.cof)
            return RationalFunction._make(pmul(self.num, other.num), poles, cof)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(Polynomial._raw(self._den()), Polynomial._raw(self.num))

    def __truediv__(self, other):
        if isinstance(other, RationalFunction):
            return self * other.inverse()
        c = to_scalar(other)
        if not c:
            raise ZeroDivisionError("division by zero scalar")
        return self.scale(ONE / c)

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if not self.poles and len(self.cof) == 1:
            return RationalFunction._make(ppow(self.num, k), (), reduced=True)
        out = ONE_FUNCTION
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, k=1):
        """k-th derivative with respect to z."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        out = self
        for _ in range(k):
            out = out._derivative1()
        return out

    def _derivative1(self):
        cache = self._cache
        hit = cache.get("d1")
        if hit is not None:
            return hit
        num, cof = self.num, self.cof
        if not num:
            return self
        if not self.poles and len(cof) == 1:
            res = RationalFunction._make(pderiv(num), (), reduced=True)
        else:
            rad = (ONE,)
            for a, _ in self.poles:
                rad = pmul(rad, (-a, ONE))
            # sum_a k_a * rad / (z - a)
            logd = ()
            for a, k in self.poles:
                part = synthetic_division(rad, a)[0]
                logd = padd(logd, pscale(part, mpq(k)))
            top = padd(pmul(pderiv(num), rad), pscale(pmul(num, logd), -ONE))
            poles = {a: k + 1 for a, k in self.poles}
            if len(cof) == 1:
                res = RationalFunction._make(top, poles)
            else:
                top = padd(pmul(top, cof), pscale(pmul(pmul(num, rad), pderiv(cof)), -ONE))
                res = RationalFunction._make(top, poles, pmul(cof, cof))
        cache["d1"] = res
        return res

    def __call__(self, x):
        x = to_scalar(x)
        den = peval(self.cof, x)
        for a, k in self.poles:
            den *= (x - a) ** k
        if not den:
            raise ZeroDivisionError(f"pole at {x}")
        return peval(self.num, x) / den

    # -- local data ------------------------------------------------------
    def order_at(self, p):
        """Vanishing (positive) or pole (negative) order at a point."""
        if not self.num:
            raise ValueError("the zero function has no order anywhere")
        cache = self._cache
        key = ("ord", p)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if p is INF:
            res = self.den_degree() - (len(self.num) - 1)
        else:
            res = -dict(self.poles).get(p, 0)
            if not res:
                res = poly_order_at(self.num, p)
        cache[key] = res
        return res

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        num = pstr(self.num)
        parts = []
        for a, k in self.poles:
            base = "z" if not a else f"z {'-' if a > 0 else '+'} {abs(a)}"
            if k == 1:
                parts.append(base if not a else f"({base})")
            else:
                parts.append(f"({base})^{k}" if a else f"z^{k}")
        if len(self.cof) > 1:
            parts.append(f"({pstr(self.cof)})")
        if not parts:
            return num
        if len(self.num) > 1 and sum(1 for c in self.num if c) > 1:
            num = f"({num})"
        return f"{num}/{'*'.join(parts) if len(parts) == 1 else '(' + '*'.join(parts) + ')'}"


def _coeffs(value):
    if isinstance(value, Polynomial):
        return value.coeffs
    if isinstance(value, (list, tuple)):
        return value
    return (value,)


def _coerce(value):
    if isinstance(value, RationalFunction):
        return value
    try:
        return RationalFunction.constant(value)
    except (TypeError, ValueError):
        return NotImplemented


def _reduce(num, poles, cof):
    """Cancel common factors; returns canonical (num, poles, cof)."""
    num = trim(num)
    if not num:
        return (), (), (ONE,)
    out = []
    for a, k in sorted(poles.items()):
        while k > 0:
            q, r = synthetic_division(num, a)
            if r:
                break
            num = q
            k -= 1
        if k > 0:
            out.append((a, k))
    cof = monic(trim(cof))
    if len(cof) > 1:
        g = pgcd(num, cof)
        if len(g) > 1:
            num = pdivmod(num, g)[0]
            cof = pdivmod(cof, g)[0]
        lead = cof[-1]
        if lead != 1:
            num = pscale(num, ONE / lead)
            cof = pscale(cof, ONE / lead)
    return num, tuple(out), cof


ZERO_FUNCTION = RationalFunction._make((), (), reduced=True)
ONE_FUNCTION = RationalFunction._make((ONE,), (), reduced=True)
Z = RationalFunction._make((ZERO, ONE), (), reduced=True)
