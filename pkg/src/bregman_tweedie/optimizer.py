"""Limited-memory projected quasi-Newton minimisation over an l-infinity box.

Each iteration splits the coordinates into a binding set (at a bound with the
gradient pushing outward) and a free set. On the free set it takes an L-BFGS
step from the two-loop recursion, seeded with the Barzilai-Borwein scaling.
Binding coordinates stay put. The trial point is projected back onto the box
and accepted by backtracking under the Armijo condition along the projected
arc. If the quasi-Newton step fails the line search, a projected spectral
gradient step is tried before giving up.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["BoxConstraint", "OptimConfig", "OptimResult", "project_box", "minimize"]

log = logging.getLogger(__name__)

Oracle = Callable[[np.ndarray], "tuple[float, np.ndarray]"]


@dataclass(frozen=True)
class BoxConstraint:
    """``|x_j| <= radius`` for every coordinate; ``radius = inf`` means unconstrained."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"box radius must be positive, got {self.radius!r}")

    @classmethod
    def for_loss(cls, c_alpha: float | None, rho: float = 1.5) -> "BoxConstraint":
        return cls(math.inf if c_alpha is None else rho * abs(c_alpha))

    def contains(self, x, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(x) <= self.radius + tol))


@dataclass(frozen=True)
class OptimConfig:
    memory: int = 10
    max_iter: int = 500
    tol: float = 1e-7
    ls_max: int = 30
    armijo_c1: float = 1e-4

    def __post_init__(self):
        for name in ("memory", "max_iter", "tol", "ls_max", "armijo_c1"):
            if not getattr(self, name) > 0:
                raise ValueError(f"OptimConfig.{name} must be positive")


@dataclass
class OptimResult:
    point: np.ndarray
    value: float
    iterations: int
    converged: bool
    final_pg_norm: float
    status: str = "converged"
    history: list = field(default_factory=list)


def project_box(v, box: BoxConstraint) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if math.isinf(box.radius):
        return v.copy()
    return np.clip(v, -box.radius, box.radius)


def _pg_norm(x, g, box) -> float:
    return float(np.max(np.abs(x - project_box(x - g, box)), initial=0.0))


def _two_loop(g, pairs, gamma):
    """Apply the L-BFGS inverse-Hessian approximation to ``g``."""
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        q -= a * y
        alphas.append(a)
    r = gamma * q
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        beta = rho * (y @ r)
        r += s * (a - beta)
    return r


def _binding(x, g, box, eps):
    if math.isinf(box.radius):
        return np.zeros_like(x, dtype=bool)
    lo = (x <= -box.radius + eps) & (g > 0)
    hi = (x >= box.radius - eps) & (g < 0)
    return lo | hi


def minimize(f_and_grad: Oracle, x0, box: BoxConstraint, cfg: OptimConfig = OptimConfig()) -> OptimResult:
    """Minimise ``f`` over the box starting from ``x0`` (projected if infeasible).

    ``f_and_grad(x)`` returns ``(value, gradient)``. The iteration stops when
    the projected-gradient infinity norm ``|x - P(x - g)|`` drops to
    ``cfg.tol`` (``converged=True``) or after ``cfg.max_iter`` iterations. A
    failed line search also stops it; the best point so far is returned with
    ``converged=False`` and ``status="line_search_failure"``.
    """
    x = project_box(x0, box)
    f, g = f_and_grad(x)
    f = float(f)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(f):
        raise ValueError("objective is not finite at the starting point")
    history = [f]
    pairs: deque = deque(maxlen=cfg.memory)
    gamma = None
    status = "max_iter"
    it = 0
    pgn = _pg_norm(x, g, box)

    while it < cfg.max_iter:
        if pgn <= cfg.tol:
            status = "converged"
            break
        scale = box.radius if math.isfinite(box.radius) else 1.0
        free = ~_binding(x, g, box, min(pgn, 1e-8 * max(1.0, scale)))
        if gamma is None:
            # first step: unit-length steepest descent in the infinity norm
            gamma_now = 1.0 / max(float(np.max(np.abs(g))), 1e-12)
        else:
            gamma_now = gamma

        d = np.zeros_like(x)
        if pairs:
            fp = [(s[free], y[free]) for s, y in pairs]
            fp = [(s, y, 1.0 / (s @ y)) for s, y in fp if s @ y > 0]
            d[free] = -_two_loop(g[free], fp, gamma_now)
        else:
            d[free] = -gamma_now * g[free]
        if not np.all(np.isfinite(d)) or g @ d >= 0:
            d = -gamma_now * g

        accepted = _line_search(f_and_grad, x, f, g, d, box, cfg)
        if accepted is None:
            accepted = _line_search(f_and_grad, x, f, g, -gamma_now * g, box, cfg)
        if accepted is None:
            status = "line_search_failure"
            log.debug("line search failed at iteration %d (pg=%.3g)", it, pgn)
            break
        xn, fn, gn = accepted
        s = xn - x
        y = gn - g
        sy = float(s @ y)
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y))
            gamma = sy / float(y @ y)
        x, f, g = xn, fn, gn
        history.append(f)
        it += 1
        pgn = _pg_norm(x, g, box)
    else:
        if pgn <= cfg.tol:
            status = "converged"

    return OptimResult(
        point=x,
        value=f,
        iterations=it,
        converged=status == "converged",
        final_pg_norm=pgn,
        status=status,
        history=history,
    )


def _line_search(f_and_grad, x, f, g, d, box, cfg):
    t = 1.0
    for _ in range(cfg.ls_max):
        xn = project_box(x + t * d, box)
        step = xn - x
        if not np.any(step):
            return None
        fn, gn = f_and_grad(xn)
        fn = float(fn)
        if np.isfinite(fn) and fn <= f + cfg.armijo_c1 * float(g @ step):
            return xn, fn, np.asarray(gn, dtype=float)
        t *= 0.5
    return None
