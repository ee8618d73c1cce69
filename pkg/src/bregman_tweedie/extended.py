"""Extended exponential and logarithmic functions and their domains.

Two parameterisations are provided. The equivalence-class form

    exp_a(x) = ((1 - a) x) ** (1 / (1 - a))        (e**x at a = 1)
    ln_a(x)  = x ** (1 - a) / (1 - a)              (log x at a = 1)

and the scaled form with ``c > 0``

    exp_{a,c}(x) = (c**(1 - a) + (1 - a) x) ** (1 / (1 - a))
    ln_{a,c}(x)  = (x**(1 - a) - c**(1 - a)) / (1 - a)

related by ``exp_{a,c}(x) = exp_a(x - c_a)`` with ``c_a = c**(1-a) / (a-1)``.

The domain tables are keyed on the parity category of ``1 - a`` (raw domains)
or of ``a`` itself (reduced domains, on which ``exp_a`` and ``ln_a`` are
mutually inverse bijections).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alpha_domain import RealCategory, as_rational, classify_rational, signed_pow
from .errors import BranchRequired, DomainError, InvalidScale

__all__ = [
    "BranchChoice",
    "DomainSpec",
    "REALS",
    "NONNEG",
    "POS",
    "NONPOS",
    "NEG",
    "domain_exp",
    "domain_ln",
    "exp_alpha",
    "ln_alpha",
    "exp_alpha_c",
    "ln_alpha_c",
    "c_alpha",
]

INF = math.inf


class BranchChoice(enum.Enum):
    """Which half-line to use where a domain table offers ``R++ / R--``.

    The choice always names the sign of the domain of the function being
    asked about, never that of its inverse.
    """

    POSITIVE = "positive"
    NEGATIVE = "negative"

    def flipped(self) -> "BranchChoice":
        if self is BranchChoice.POSITIVE:
            return BranchChoice.NEGATIVE
        return BranchChoice.POSITIVE


@dataclass(frozen=True)
class DomainSpec:
    """An interval of the extended real line."""

    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval: lower > upper")
        if (math.isinf(self.lower) and self.lower_closed) or (
            math.isinf(self.upper) and self.upper_closed
        ):
            raise ValueError("infinite endpoints must be open")

    def contains(self, x, tol: float = 0.0):
        """Membership test; ``tol`` widens closed ends and shrinks open ones."""
        x = np.asarray(x, dtype=float)
        if self.lower_closed:
            lo = x >= self.lower - tol
        else:
            lo = x > self.lower + tol
        if self.upper_closed:
            hi = x <= self.upper + tol
        else:
            hi = x < self.upper - tol
        out = lo & hi & ~np.isnan(x)
        return bool(out) if out.ndim == 0 else out

    def interior(self) -> "DomainSpec":
        return DomainSpec(self.lower, self.upper, False, False)

    @property
    def name(self) -> str:
        return _NAMES.get(self, self._interval_text())

    def _interval_text(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower:g}, {self.upper:g}{right}"

    def __str__(self) -> str:
        return self.name


REALS = DomainSpec(-INF, INF)
NONNEG = DomainSpec(0.0, INF, lower_closed=True)
POS = DomainSpec(0.0, INF)
NONPOS = DomainSpec(-INF, 0.0, upper_closed=True)
NEG = DomainSpec(-INF, 0.0)

_NAMES = {REALS: "R", NONNEG: "R+", POS: "R++", NONPOS: "R-", NEG: "R--"}


def _pick(branch: BranchChoice | None, positive: DomainSpec, negative: DomainSpec, what: str):
    if branch is None:
        raise BranchRequired(
            f"{what} splits into {positive.name} / {negative.name}; pass a BranchChoice"
        )
    return positive if branch is BranchChoice.POSITIVE else negative


def _split(alpha: Fraction, reduced: bool, table: str) -> bool:
    """True where the table entry is ``R++ / R--``."""
    if alpha <= 1:
        return False
    key = classify_rational(alpha if reduced else 1 - alpha)
    if reduced:
        return key is RealCategory.RE
    if table == "exp":
        return key in (RealCategory.RXE, RealCategory.RO)
    return key in (RealCategory.RE, RealCategory.RO)


def domain_exp(alpha, reduced: bool = False, branch: BranchChoice | None = None) -> DomainSpec:
    """Domain of ``exp_alpha``: the raw table (``reduced=False``) or the reduced one.

    Raises :class:`BranchRequired` when the entry reads ``R++ / R--`` and no
    branch was given.
    """
    a = as_rational(alpha)
    if a == 1:
        return REALS
    if _split(a, reduced, "exp"):
        return _pick(branch, POS, NEG, f"dom exp_{a}")
    if reduced:
        cat = classify_rational(a)
        if a < 1:
            return REALS if cat is RealCategory.RE else NONNEG
        return NEG
    cat = classify_rational(1 - a)
    if a < 1:
        return REALS if cat in (RealCategory.RXE, RealCategory.RO) else NONNEG
    return NEG


def domain_ln(alpha, reduced: bool = False, branch: BranchChoice | None = None) -> DomainSpec:
    a = as_rational(alpha)
    if a == 1:
        return POS
    if _split(a, reduced, "ln"):
        return _pick(branch, POS, NEG, f"dom ln_{a}")
    if reduced:
        cat = classify_rational(a)
        if a < 1:
            return REALS if cat is RealCategory.RE else NONNEG
        return POS
    cat = classify_rational(1 - a)
    if a < 1:
        return REALS if cat in (RealCategory.RE, RealCategory.RO) else NONNEG
    return POS


def _check_raw(alpha: Fraction, x, table: str):
    dom = domain_exp if table == "exp" else domain_ln
    xa = np.asarray(x, dtype=float)
    if _split(alpha, False, table):
        ok = dom(alpha, False, BranchChoice.POSITIVE).contains(xa) | dom(
            alpha, False, BranchChoice.NEGATIVE
        ).contains(xa)
    else:
        ok = dom(alpha, False).contains(xa)
    if not np.all(ok):
        bad = xa[~np.asarray(ok)] if xa.ndim else xa
        raise DomainError(f"{table}_{alpha} undefined at {np.ravel(bad)[:3]}")


def exp_alpha(alpha, x):
    """Extended exponential in equivalence-class form.

    >>> exp_alpha(Fraction(2, 3), -6.0)
    -8.0
    """
    a = as_rational(alpha)
    _check_raw(a, x, "exp")
    if a == 1:
        out = np.exp(np.asarray(x, dtype=float))
        return float(out) if out.ndim == 0 else out
    return signed_pow(float(1 - a) * np.asarray(x, dtype=float), 1 / (1 - a))


def ln_alpha(alpha, x):
    """Extended logarithm in equivalence-class form.

    >>> ln_alpha(Fraction(1, 3), -8.0)
    6.0
    """
    a = as_rational(alpha)
    _check_raw(a, x, "ln")
    xa = np.asarray(x, dtype=float)
    if a == 1:
        out = np.log(xa)
        return float(out) if out.ndim == 0 else out
    return signed_pow(xa, 1 - a) / float(1 - a)


def _check_scale(c):
    if not (np.isfinite(c) and c > 0):
        raise InvalidScale(f"scale c must be a finite positive real, got {c!r}")


def c_alpha(alpha, c: float) -> float:
    """Offset ``c**(1-a) / (a-1)`` between the scaled and class forms (``a != 1``)."""
    a = as_rational(alpha)
    _check_scale(c)
    if a == 1:
        raise ValueError("c_alpha is undefined at alpha = 1")
    return c ** float(1 - a) / float(a - 1)


def exp_alpha_c(alpha, c: float, x):
    """Scaled extended exponential ``(c**(1-a) + (1-a) x) ** (1/(1-a))``; ``c e**x`` at a = 1."""
    a = as_rational(alpha)
    _check_scale(c)
    xa = np.asarray(x, dtype=float)
    if a == 1:
        out = c * np.exp(xa)
        return float(out) if out.ndim == 0 else out
    one_minus = float(1 - a)
    return signed_pow(c**one_minus + one_minus * xa, 1 / (1 - a))


def ln_alpha_c(alpha, c: float, x):
    a = as_rational(alpha)
    _check_scale(c)
    xa = np.asarray(x, dtype=float)
    if a == 1:
        if np.any(xa <= 0):
            raise DomainError("ln_{1,c} needs x > 0")
        out = np.log(xa) - math.log(c)
        return float(out) if out.ndim == 0 else out
    one_minus = float(1 - a)
    return (signed_pow(xa, 1 - a) - c**one_minus) / one_minus
