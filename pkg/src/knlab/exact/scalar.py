"""Exact scalars.

All arithmetic runs over arbitrary-precision rationals (``gmpy2.mpq``).
Floats are refused at every entry point so nothing inexact leaks in.
"""
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["mpq", "to_scalar", "scalar_str", "ZERO", "ONE"]

ZERO = mpq(0)
ONE = mpq(1)


def to_scalar(value):
    """Coerce ints, Fractions, mpq and "p/q" strings to mpq."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return mpq(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        try:
            return mpq(text)
        except ValueError:
            raise ValueError(f"not an exact rational: {value!r}") from None
    if isinstance(value, float):
        raise TypeError(f"float {value!r} refused; write it as 'p/q'")
    raise TypeError(f"cannot make a scalar from {type(value).__name__}")


def scalar_str(value):
    """Exact text form, "p/q" or "p"."""
    return str(mpq(value))
