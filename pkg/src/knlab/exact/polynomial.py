"""Dense univariate polynomials over the rationals.

Coefficients are stored low degree first in a tuple with no trailing
zeros; the zero polynomial is the empty tuple.  The module-level helpers
work on raw tuples and are what the rational-function layer uses; the
:class:`Polynomial` class is a thin immutable wrapper for callers.
"""
from .scalar import ONE, ZERO, mpq, scalar_str, to_scalar


def trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def psub(a, b):
    return padd(a, pscale(b, -ONE))


def pscale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def pmul(a, b):
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def ppow(a, k):
    out = (ONE,)
    base = a
    while k:
        if k & 1:
            out = pmul(out, base)
        k >>= 1
        if k:
            base = pmul(base, base)
    return out


def linear_power(root, k):
    """Coefficients of (z - root)**k, by the binomial theorem."""
    out = [ZERO] * (k + 1)
    binom = 1
    neg = -root
    for j in range(k + 1):
        # coefficient of z**j is C(k, j) * (-root)**(k - j)
        out[j] = mpq(binom) * neg ** (k - j)
        binom = binom * (k - j) // (j + 1)
    return tuple(out)


def peval(a, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pderiv(a):
    return trim(c * i for i, c in enumerate(a) if i)


def pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    lead = b[-1]
    db = len(b) - 1
    if len(rem) <= db:
        return (), trim(rem)
    quot = [ZERO] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        q = c / lead
        quot[i - db] = q
        for j in range(db + 1):
            rem[i - db + j] -= q * b[j]
    return trim(quot), trim(rem[:db])


def synthetic_division(a, x):
    """Divide by (z - x); returns (quotient, remainder value)."""
    if not a:
        return (), ZERO
    n = len(a) - 1
    out = [ZERO] * n
    acc = a[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = acc * x + a[i]
    return tuple(out), acc


def order_at(a, x):
    """Multiplicity of the root x of a (a must be nonzero)."""
    k = 0
    while True:
        q, r = synthetic_division(a, x)
        if r:
            return k
        a = q
        k += 1


def taylor(a, x, count, skip=0):
    """Taylor coefficients of a at x, indices skip .. skip+count-1."""
    out = []
    for i in range(skip + count):
        if not a:
            out.append(ZERO)
            continue
        a, r = synthetic_division(a, x)
        if i >= skip:
            out.append(r)
    return out


def monic(a):
    if not a:
        return a
    return pscale(a, ONE / a[-1])


def pgcd(a, b):
    while b:
        a, b = b, pdivmod(a, b)[1]
    return monic(a)


def rational_roots(a):
    """All distinct rational roots of a nonzero polynomial."""
    a = trim(a)
    roots = []
    k = 0
    while a and not a[0]:
        a = a[1:]
        k += 1
    if k:
        roots.append(ZERO)
    if len(a) <= 1:
        return roots
    den = 1
    for c in a:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    for q in _divisors(abs(ints[-1])):
        for p in _divisors(abs(ints[0])):
            for cand in (mpq(p, q), mpq(-p, q)):
                if cand not in roots and not peval(a, cand):
                    roots.append(cand)
    return sorted(roots)


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return abs(x)


def _divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def pstr(a, var="z"):
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if i == 0:
            body = scalar_str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{scalar_str(mag)}*{mono}"
            else:
                body = f"({scalar_str(mag)})*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


class Polynomial:
    """Immutable polynomial in z with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", trim(to_scalar(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        return Polynomial._raw(padd(self.coeffs, _as_poly(other).coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial._raw(psub(self.coeffs, _as_poly(other).coeffs))

    def __rsub__(self, other):
        return Polynomial._raw(psub(_as_poly(other).coeffs, self.coeffs))

    def __mul__(self, other):
        return Polynomial._raw(pmul(self.coeffs, _as_poly(other).coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial._raw(pscale(self.coeffs, -ONE))

    def __divmod__(self, other):
        q, r = pdivmod(self.coeffs, _as_poly(other).coeffs)
        return Polynomial._raw(q), Polynomial._raw(r)

    def __call__(self, x):
        return peval(self.coeffs, to_scalar(x))

    def derivative(self):
        return Polynomial._raw(pderiv(self.coeffs))

    def __repr__(self):
        return f"Polynomial({pstr(self.coeffs)})"

    def __str__(self):
        return pstr(self.coeffs)


def _as_poly(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial((value,))
