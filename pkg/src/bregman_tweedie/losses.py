"""Bregman-Tweedie margin losses, their gradients, and higher-order hinge baselines.

For a margin ``m = y * h(x)`` the Bregman-Tweedie loss is

    L(m) = ln_{a,c}(c + exp_{a,c}(-m))        (log(1 + e**-m) at a = 1)

with ``a`` in ``{0, 1}`` or an even-numerator rational in ``(0, 1)``. It is the
unhinge loss ``c - m`` at ``a = 0``. For ``a < 1`` it is unbounded below and
its derivative blows up at ``m = 2|c_a|``, so the trainer keeps margins
strictly below that point.

Two sub-models fix the scale: H-Bregman (hinge-like, ``c_a = -1``, i.e.
``c = (1-a)**(1/(1-a))``) and L-Bregman (logistic-like, ``c = 1``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import expit

from .alpha_domain import RealCategory, as_rational, classify_rational, format_rational, signed_pow
from .errors import GradDomainError, InvalidScale, UnsupportedAlpha
from .extended import exp_alpha_c, ln_alpha_c

__all__ = [
    "Mode",
    "LossSpec",
    "HingeSpec",
    "make_spec",
    "hbregman_scale",
    "bt_loss",
    "bt_loss_grad",
    "higher_order_hinge",
    "higher_order_hinge_grad",
    "objective_and_grad",
    "EPS_DOM",
]

#: relative safety margin kept between clamped margins and the gradient singularity
EPS_DOM = 1e-6


class Mode(enum.Enum):
    HBREGMAN = "h"
    LBREGMAN = "l"
    EXPLICIT = "custom"

    @classmethod
    def parse(cls, text) -> "Mode":
        if isinstance(text, Mode):
            return text
        key = str(text).strip().lower()
        aliases = {"h": cls.HBREGMAN, "hbregman": cls.HBREGMAN, "h-bregman": cls.HBREGMAN,
                   "l": cls.LBREGMAN, "lbregman": cls.LBREGMAN, "l-bregman": cls.LBREGMAN,
                   "custom": cls.EXPLICIT, "explicit": cls.EXPLICIT}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown loss mode {text!r} (expected h, l or custom)") from None


def _check_family(a: Fraction):
    if a in (0, 1):
        return
    if not (0 < a < 1) or classify_rational(a) is not RealCategory.RE:
        raise UnsupportedAlpha(
            f"alpha={format_rational(a)} is outside the Bregman-Tweedie family "
            "{0, 1} U ((0,1) with even numerator and odd denominator)"
        )


@dataclass(frozen=True)
class LossSpec:
    alpha: Fraction
    c: float
    mode: Mode
    c_alpha: float | None

    @property
    def is_logistic(self) -> bool:
        return self.alpha == 1

    @property
    def grad_lower(self) -> float | None:
        """``2 c_a``; the gradient needs ``-m > 2 c_a``."""
        return None if self.c_alpha is None else 2.0 * self.c_alpha

    @property
    def margin_bound(self) -> float:
        """Margins must stay strictly below this for the gradient to exist."""
        return math.inf if self.c_alpha is None else 2.0 * abs(self.c_alpha)

    def box_radius(self, rho: float) -> float:
        return math.inf if self.c_alpha is None else rho * abs(self.c_alpha)

    def value(self, m):
        return bt_loss(self, m)

    def grad(self, m):
        return bt_loss_grad(self, m)

    def describe(self) -> str:
        return f"BT(alpha={format_rational(self.alpha)}, c={self.c:.6g}, mode={self.mode.value})"


def hbregman_scale(alpha) -> float:
    """The ``c`` giving ``c_a = -1``, namely ``(1-a)**(1/(1-a))``, for any ``a < 1``.

    >>> hbregman_scale("1/2")
    0.25
    """
    a = as_rational(alpha)
    if a >= 1:
        raise UnsupportedAlpha("the hinge-like scale needs alpha < 1")
    return float(1 - a) ** float(1 / (1 - a))


def make_spec(alpha, mode=Mode.LBREGMAN, c: float | None = None) -> LossSpec:
    """Build a :class:`LossSpec` and derive ``c`` / ``c_alpha`` from the sub-model.

    >>> make_spec("2/3", Mode.HBREGMAN).c_alpha
    -1.0
    """
    a = as_rational(alpha)
    mode = Mode.parse(mode)
    _check_family(a)
    if mode is Mode.EXPLICIT:
        if c is None or not (math.isfinite(c) and c > 0):
            raise InvalidScale(f"explicit mode needs c > 0, got {c!r}")
        scale = float(c)
    elif mode is Mode.HBREGMAN:
        scale = hbregman_scale(a) if a != 1 else 1.0
    else:
        scale = 1.0
    if a == 1:
        return LossSpec(a, scale, mode, None)
    if mode is Mode.HBREGMAN:
        c_a = -1.0
    else:
        c_a = scale ** float(1 - a) / float(a - 1)
    return LossSpec(a, scale, mode, c_a)


def _unwrap(out):
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def bt_loss(spec: LossSpec, m):
    m = np.asarray(m, dtype=float)
    if spec.is_logistic:
        return _unwrap(np.logaddexp(0.0, -m))
    e = np.asarray(exp_alpha_c(spec.alpha, spec.c, -m))
    direct = np.asarray(ln_alpha_c(spec.alpha, spec.c, spec.c + e))
    # c**(1-a) * ((1 + E/c)**(1-a) - 1) / (1-a) avoids the cancellation when |E| << c
    r = e / spec.c
    ok = np.abs(r) < 0.5
    one_minus = float(1 - spec.alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = spec.c**one_minus * np.expm1(one_minus * np.log1p(np.where(ok, r, 0.0))) / one_minus
    return _unwrap(np.where(ok, stable, direct))


def bt_loss_grad(spec: LossSpec, m):
    """Derivative of :func:`bt_loss` in the margin, ``-(E / (c + E))**a`` with ``E = exp_{a,c}(-m)``.

    Raises :class:`GradDomainError` for margins at or beyond ``2|c_a|``.
    """
    m = np.asarray(m, dtype=float)
    if spec.is_logistic:
        return _unwrap(-expit(-m))
    if np.any(m >= spec.margin_bound):
        raise GradDomainError(
            f"margin >= 2|c_alpha| = {spec.margin_bound:.6g}; the loss gradient is singular there"
        )
    e = np.asarray(exp_alpha_c(spec.alpha, spec.c, -m))
    return _unwrap(-np.asarray(signed_pow(e / (spec.c + e), spec.alpha)))


def _check_hinge_alpha(a: Fraction):
    if not (0 <= a < 1):
        raise UnsupportedAlpha(f"higher-order hinge needs 0 <= alpha < 1, got {format_rational(a)}")


def higher_order_hinge(alpha, c: float, m):
    """``max(0, c**(1-a) - (1-a) m) ** (1/(1-a))``: hinge at (0, 1), squared hinge at (1/2, 1/4)."""
    a = as_rational(alpha)
    _check_hinge_alpha(a)
    if not c > 0:
        raise InvalidScale(f"c must be positive, got {c!r}")
    base = np.maximum(0.0, c ** float(1 - a) - float(1 - a) * np.asarray(m, dtype=float))
    return _unwrap(signed_pow(base, 1 / (1 - a)))


def higher_order_hinge_grad(alpha, c: float, m):
    """Margin derivative; at the kink of the plain hinge the zero subgradient is used."""
    a = as_rational(alpha)
    _check_hinge_alpha(a)
    base = np.maximum(0.0, c ** float(1 - a) - float(1 - a) * np.asarray(m, dtype=float))
    if a == 0:
        return _unwrap(-(base > 0).astype(float))
    return _unwrap(-np.asarray(signed_pow(base, a / (1 - a))))


@dataclass(frozen=True)
class HingeSpec:
    """Higher-order hinge loss used as an SVM-style baseline (no margin cap, no box)."""

    alpha: Fraction
    c: float = 1.0

    def __post_init__(self):
        a = as_rational(self.alpha)
        _check_hinge_alpha(a)
        object.__setattr__(self, "alpha", a)

    margin_bound = math.inf
    c_alpha = None

    @property
    def is_logistic(self) -> bool:
        return False

    def box_radius(self, rho: float) -> float:
        return math.inf

    def value(self, m):
        return higher_order_hinge(self.alpha, self.c, m)

    def grad(self, m):
        return higher_order_hinge_grad(self.alpha, self.c, m)

    def describe(self) -> str:
        return f"Hinge(alpha={format_rational(self.alpha)}, c={self.c:.6g})"


def objective_and_grad(spec, lam: float, data, w, b: float, clamp: bool = True):
    """Regularised empirical risk ``sum_i L(m_i) + lam * ||w||^2`` and its gradient.

    ``data`` is anything with ``features`` (n x d) and ``labels`` (+-1).
    Margins are ``m_i = y_i (<w, x_i> + b)``. With ``clamp`` on, margins above
    ``(1 - EPS_DOM) * 2|c_a|`` are replaced by that cap, so those samples
    contribute a constant loss and no gradient. The bias is not regularised.
    Returns ``(value, grad_w, grad_b)``.
    """
    X = np.asarray(data.features, dtype=float)
    y = np.asarray(data.labels, dtype=float)
    w = np.asarray(w, dtype=float)
    m = y * (X @ w + b)
    active = np.ones_like(m, dtype=bool)
    if clamp and math.isfinite(spec.margin_bound):
        cap = spec.margin_bound * (1.0 - EPS_DOM)
        active = m <= cap
        m = np.minimum(m, cap)
    loss = np.asarray(spec.value(m), dtype=float)
    dm = np.asarray(spec.grad(m), dtype=float) * active
    coef = dm * y
    value = float(loss.sum() + lam * (w @ w))
    grad_w = X.T @ coef + 2.0 * lam * w
    grad_b = float(coef.sum())
    return value, grad_w, grad_b
