"""Exact rationals, their parity categories, and real powers with rational exponents.

A rational ``p/q`` in lowest terms falls into one of three categories that
decide where ``x ** (p/q)`` is real-valued:

* ``RE``  -- even numerator, odd denominator (``2k/(2l+1)``): even function of x
* ``RO``  -- odd numerator, odd denominator (``(2k+1)/(2l+1)``): odd function of x
* ``RXE`` -- odd numerator, even denominator (``(2k+1)/(2l)``): only x >= 0

``RXX`` names the irrational remainder of the real line. It exists so the
category algebra is closed, but a rational never lands there.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

import numpy as np

from .errors import DomainError, ParseError, UnsupportedAlpha

__all__ = [
    "Rational",
    "RealCategory",
    "as_rational",
    "classify_rational",
    "reciprocal_category",
    "rational_of_string",
    "signed_pow",
    "format_rational",
]

#: exact rational carrier; canonical (lowest terms, positive denominator, 0 == 0/1)
Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class RealCategory(enum.Enum):
    RE = "Re"
    RO = "Ro"
    RXE = "Rxe"
    RXX = "Rxx"

    def __str__(self) -> str:
        return self.value


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a :class:`Fraction`, refusing floats.

    Ints, Fractions and ``"p/q"`` strings are accepted. A float cannot be
    classified by parity, so it is rejected rather than approximated.
    """
    if isinstance(value, bool):
        raise UnsupportedAlpha(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return rational_of_string(value)
    raise UnsupportedAlpha(
        f"alpha must be an exact rational (int, Fraction or 'p/q'), got {value!r}"
    )


def rational_of_string(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (decimal integers) into a canonical rational.

    >>> rational_of_string("-2/4")
    Fraction(-1, 2)
    """
    m = _RATIONAL_RE.match(s)
    if m is None:
        raise ParseError(f"not a rational of the form p/q: {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def classify_rational(q) -> RealCategory:
    q = as_rational(q)
    if q.denominator % 2 == 0:
        return RealCategory.RXE
    if q.numerator % 2 == 0:
        return RealCategory.RE
    return RealCategory.RO


_RECIPROCAL = {
    RealCategory.RO: RealCategory.RO,
    RealCategory.RE: RealCategory.RXE,
    RealCategory.RXE: RealCategory.RE,
    RealCategory.RXX: RealCategory.RXX,
}


def reciprocal_category(cat: RealCategory) -> RealCategory:
    """Category of ``1/q`` given the category of ``q`` (``q != 0``)."""
    return _RECIPROCAL[cat]


def _unwrap(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def signed_pow(x, r):
    """Real power ``x ** r`` for a rational exponent ``r = p/q``.

    With an odd denominator the root is real for negative ``x`` and the result
    is ``sign(x)**p * |x|**(p/q)``. With an even denominator ``x`` must be
    nonnegative. Works elementwise on arrays.

    >>> signed_pow(-8.0, Fraction(2, 3))
    4.0
    """
    r = as_rational(r)
    p, q = r.numerator, r.denominator
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)):
        raise DomainError("signed_pow of NaN")
    if q % 2 == 0 and np.any(xa < 0):
        raise DomainError(f"even root of a negative number (exponent {p}/{q})")
    if p < 0 and np.any(xa == 0):
        raise DomainError(f"zero raised to a negative power (exponent {p}/{q})")

    ax = np.abs(xa)
    if q == 1:
        mag = np.power(ax, float(p))
    else:
        with np.errstate(over="ignore"):
            mag = np.power(ax, p / q)
    if p % 2 == 1 and q % 2 == 1:
        mag = np.where(xa < 0, -mag, mag)
    return _unwrap(mag)
