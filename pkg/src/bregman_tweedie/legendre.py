"""Legendre-type base functions, their Bregman divergences and Legendre transforms.

``psi`` integrates ``exp_alpha`` and ``phi`` integrates ``ln_alpha`` (constants
of integration dropped). They form a conjugate pair, so ``psi'`` and ``phi'``
are inverse maps between the interiors of their domains. Bregman divergences
and the regular Legendre transform only ever use this closed-form pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alpha_domain import RealCategory, as_rational, classify_rational, signed_pow
from .errors import DomainError, NotLegendreType
from .extended import (
    NEG,
    NONNEG,
    NONPOS,
    POS,
    REALS,
    BranchChoice,
    DomainSpec,
    _pick,
    exp_alpha,
    ln_alpha,
)

__all__ = [
    "Kind",
    "BaseFunction",
    "domain_psi",
    "domain_phi",
    "is_legendre_type",
    "psi",
    "psi_prime",
    "psi_second",
    "phi",
    "phi_prime",
    "phi_second",
    "bregman_div",
    "legendre_transform",
    "conjugate_check",
]


def _unwrap(out):
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def _is_even(a: Fraction) -> bool:
    return classify_rational(a) is RealCategory.RE


def is_legendre_type(alpha) -> bool:
    """Whether psi and phi are of Legendre type for this alpha.

    Below one only the even-numerator rationals qualify: elsewhere the
    derivative ``exp_alpha(0) = 0`` breaks steepness at the boundary.
    """
    a = as_rational(alpha)
    return a >= 1 or _is_even(a)


def domain_psi(alpha, branch: BranchChoice | None = None) -> DomainSpec:
    """Domain of psi.

    For ``alpha < 1`` outside the even category psi is not of Legendre type;
    the returned ``R+`` is the domain on which the integral is still defined.
    """
    a = as_rational(alpha)
    if a < 1:
        return REALS if _is_even(a) else NONNEG
    if a == 1:
        return REALS
    if a < 2:
        if _is_even(a):
            return _pick(branch, POS, NEG, f"dom psi_{a}")
        return NEG
    if a == 2:
        return NEG
    if _is_even(a):
        return _pick(branch, NONNEG, NONPOS, f"dom psi_{a}")
    return NONPOS


def domain_phi(alpha, branch: BranchChoice | None = None) -> DomainSpec:
    a = as_rational(alpha)
    if a < 1:
        return REALS if _is_even(a) else NONNEG
    if a < 2:
        if a > 1 and _is_even(a):
            return _pick(branch, NONNEG, NONPOS, f"dom phi_{a}")
        return NONNEG
    if a > 2 and _is_even(a):
        return _pick(branch, POS, NEG, f"dom phi_{a}")
    return POS


def _require(dom: DomainSpec, x, what: str):
    if not np.all(dom.contains(x)):
        raise DomainError(f"{what}: argument outside {dom.name}")


def psi(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    _require(domain_psi(a, branch), xa, f"psi_{a}")
    if a == 1:
        return _unwrap(np.exp(xa))
    if a == 2:
        return _unwrap(-np.log(-xa))
    return _unwrap(signed_pow(float(1 - a) * xa, (2 - a) / (1 - a)) / float(2 - a))


def psi_prime(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    # a closed endpoint is allowed: the one-sided derivative is exp_alpha there
    _require(domain_psi(a, branch), xa, f"psi'_{a}")
    return exp_alpha(a, xa)


def psi_second(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    _require(domain_psi(a, branch).interior(), xa, f"psi''_{a}")
    if a == 1:
        return _unwrap(np.exp(xa))
    if a == 2:
        return _unwrap(1.0 / xa**2)
    return signed_pow(float(1 - a) * xa, a / (1 - a))


def phi(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    _require(domain_phi(a, branch), xa, f"phi_{a}")
    if a == 2:
        return _unwrap(-np.log(xa))
    if a == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(xa > 0, xa * np.log(np.where(xa > 0, xa, 1.0)) - xa, 0.0)
        return _unwrap(out)
    return _unwrap(signed_pow(xa, 2 - a) / float((2 - a) * (1 - a)))


def phi_prime(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    _require(domain_phi(a, branch), xa, f"phi'_{a}")
    return ln_alpha(a, xa)


def phi_second(alpha, x, branch: BranchChoice | None = None):
    a = as_rational(alpha)
    xa = np.asarray(x, dtype=float)
    _require(domain_phi(a, branch).interior(), xa, f"phi''_{a}")
    return signed_pow(xa, -a)


class Kind(enum.Enum):
    PSI = "psi"
    PHI = "phi"


@dataclass(frozen=True)
class BaseFunction:
    """A Legendre-type base function: psi or phi at a fixed alpha and branch."""

    kind: Kind
    alpha: Fraction
    branch: BranchChoice | None = None

    def __post_init__(self):
        a = as_rational(self.alpha)
        object.__setattr__(self, "alpha", a)
        if not is_legendre_type(a):
            raise NotLegendreType(
                f"alpha={a} < 1 is not an even-numerator rational; "
                "psi/phi are not of Legendre type there"
            )
        self.domain  # resolves the branch or raises BranchRequired

    @classmethod
    def psi(cls, alpha, branch: BranchChoice | None = None) -> "BaseFunction":
        return cls(Kind.PSI, alpha, branch)

    @classmethod
    def phi(cls, alpha, branch: BranchChoice | None = None) -> "BaseFunction":
        return cls(Kind.PHI, alpha, branch)

    @property
    def domain(self) -> DomainSpec:
        if self.kind is Kind.PSI:
            return domain_psi(self.alpha, self.branch)
        return domain_phi(self.alpha, self.branch)

    def __call__(self, x):
        f = psi if self.kind is Kind.PSI else phi
        return f(self.alpha, x, self.branch)

    def prime(self, x):
        f = psi_prime if self.kind is Kind.PSI else phi_prime
        return f(self.alpha, x, self.branch)

    def second(self, x):
        f = psi_second if self.kind is Kind.PSI else phi_second
        return f(self.alpha, x, self.branch)

    def conjugate(self) -> "BaseFunction":
        """The conjugate partner; the gradient image fixes its branch."""
        other = Kind.PHI if self.kind is Kind.PSI else Kind.PSI
        branch = self.branch
        if branch is not None and self.alpha > 1:
            # for alpha > 1 the gradient maps each half-line onto the opposite one;
            # psi and phi split for exactly the same alphas
            branch = branch.flipped()
        return BaseFunction(other, self.alpha, branch)

    def conjugate_prime(self, u):
        """``(f*)'`` -- the inverse of :meth:`prime`."""
        return self.conjugate().prime(u)


def bregman_div(base: BaseFunction, x, y):
    """``D_f(x|y) = f(x) - f(y) - f'(y) (x - y)``.

    ``x`` may touch the boundary of the domain; ``y`` must be interior.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    _require(base.domain.interior(), ya, "bregman_div second argument")
    return _unwrap(base(xa) - base(ya) - base.prime(ya) * (xa - ya))


def legendre_transform(base: BaseFunction, eta, x):
    """Regular Legendre transform of the Bregman divergence, ``(f*)'(eta + f'(x))``.

    This is the maximiser over z of ``eta*z - D_f(z|x)``.
    """
    u = np.asarray(eta, dtype=float) + np.asarray(base.prime(x), dtype=float)
    conj = base.conjugate()
    if not np.all(conj.domain.interior().contains(u)):
        raise DomainError(
            f"eta + f'(x) leaves the interior of dom f* = {conj.domain.name}"
        )
    return conj.prime(u)


def conjugate_check(alpha, x, branch: BranchChoice | None = None):
    """``phi'(psi'(x))``; equals ``x`` wherever the pair is conjugate.

    Only the derivatives are composed, so this also runs for the non-Legendre
    alphas below one, on the interior of their ``R+`` domain.
    """
    a = as_rational(alpha)
    conj_branch = branch.flipped() if branch is not None and a > 1 else branch
    return phi_prime(a, psi_prime(a, x, branch), conj_branch)
