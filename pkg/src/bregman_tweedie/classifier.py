"""Linear Bregman-Tweedie classifier: fitting, prediction, lambda selection, persistence.

The training problem is

    min_{(w, b) in box}  sum_i L(y_i (<w, x_i> + b)) + lam * ||w||^2

with the box ``|w_j|, |b| <= rho |c_alpha|`` (no box for the logistic and
hinge baselines). Training data is expected in model space, i.e. already
standardised and l1-rescaled (see :func:`bregman_tweedie.dataset.preprocess`).
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .alpha_domain import as_rational, format_rational
from .dataset import CVPlan, Dataset, Preprocessing, kfold_indices, make_rng
from .errors import ArityError, NotRescaled, ParseError, SelectionError
from .losses import HingeSpec, LossSpec, Mode, make_spec, objective_and_grad
from .optimizer import BoxConstraint, OptimConfig, OptimResult, minimize

__all__ = [
    "DEFAULT_LAMBDA_GRID",
    "TrainConfig",
    "Hyperplane",
    "CVTable",
    "fit",
    "predict",
    "predict_many",
    "decision_values",
    "accuracy",
    "select_lambda",
    "dumps_model",
    "loads_model",
    "save_model",
    "load_model",
]

#: lambda = 2**b for b = -14 .. 5
DEFAULT_LAMBDA_GRID = tuple(2.0**b for b in range(-14, 6))


@dataclass(frozen=True)
class TrainConfig:
    lam: float = 2.0**-10
    rho: float = 1.5
    optim: OptimConfig = OptimConfig()
    init: str = "zeros"  # or "uniform"
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if not 1.0 < self.rho < 2.0:
            raise ValueError(f"rho must lie in (1, 2), got {self.rho}")
        if self.init not in ("zeros", "uniform"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class Hyperplane:
    w: np.ndarray
    b: float
    spec: LossSpec | HingeSpec
    preprocessing: Preprocessing
    rho: float = 1.5
    lam: float = 0.0
    result: OptimResult | None = field(default=None, compare=False, repr=False)

    @property
    def box(self) -> BoxConstraint:
        return BoxConstraint(self.spec.box_radius(self.rho))


def _initial_point(d: int, box: BoxConstraint, cfg: TrainConfig) -> np.ndarray:
    if cfg.init == "zeros":
        return np.zeros(d + 1)
    r = box.radius if math.isfinite(box.radius) else 1.0
    return make_rng(cfg.seed).uniform(-0.1 * r, 0.1 * r, size=d + 1)


def fit(ds: Dataset, spec: LossSpec | HingeSpec, cfg: TrainConfig = TrainConfig()) -> Hyperplane:
    """Minimise the regularised Bregman-Tweedie risk over the box.

    Raises :class:`NotRescaled` when the loss has a margin cap but ``ds`` was
    not l1-rescaled.
    """
    if math.isfinite(spec.margin_bound) and not ds.rescaled:
        raise NotRescaled("alpha != 1 needs l1-rescaled features (see rescale_l1)")
    box = BoxConstraint(spec.box_radius(cfg.rho))
    d = ds.n_features

    def oracle(z):
        value, gw, gb = objective_and_grad(spec, cfg.lam, ds, z[:d], z[d])
        return value, np.append(gw, gb)

    res = minimize(oracle, _initial_point(d, box, cfg), box, cfg.optim)
    return Hyperplane(
        w=res.point[:d].copy(),
        b=float(res.point[d]),
        spec=spec,
        preprocessing=ds.preprocessing,
        rho=cfg.rho,
        lam=cfg.lam,
        result=res,
    )


def decision_values(h: Hyperplane, X_model) -> np.ndarray:
    """``<w, x> + b`` for rows already in model space."""
    return np.atleast_2d(np.asarray(X_model, dtype=float)) @ h.w + h.b


def _sign(v) -> np.ndarray:
    # ties at exactly zero go to +1
    return np.where(np.asarray(v) >= 0, 1, -1)


def predict_many(h: Hyperplane, X_raw) -> np.ndarray:
    X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
    if X_raw.shape[1] != h.w.shape[0]:
        raise ArityError(f"expected {h.w.shape[0]} features, got {X_raw.shape[1]}")
    return _sign(decision_values(h, h.preprocessing.apply(X_raw)))


def predict(h: Hyperplane, x) -> int:
    """Label of one raw feature vector: stored preprocessing, then the sign of h."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ArityError("predict takes a single feature vector; use predict_many")
    return int(predict_many(h, x[None, :])[0])


def accuracy(h: Hyperplane, ds: Dataset) -> float:
    """Fraction of correctly labelled rows of a model-space dataset."""
    if ds.n_samples == 0:
        return math.nan
    return float(np.mean(_sign(decision_values(h, ds.features)) == ds.labels))


@dataclass
class CVTable:
    grid: tuple
    fold_accuracy: np.ndarray  # (len(grid), folds); NaN where the fit failed
    errors: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> np.ndarray:
        acc = self.fold_accuracy
        ok = ~np.isnan(acc).any(axis=1)
        out = np.full(len(self.grid), np.nan)
        out[ok] = acc[ok].mean(axis=1)
        return out


def _cv_cell(ds, spec, cfg, lam, train_idx, valid_idx):
    h = fit(ds.subset(train_idx), spec, TrainConfig(lam, cfg.rho, cfg.optim, cfg.init, cfg.seed))
    return accuracy(h, ds.subset(valid_idx))


def select_lambda(
    ds: Dataset,
    spec: LossSpec | HingeSpec,
    plan: CVPlan = CVPlan(),
    grid=DEFAULT_LAMBDA_GRID,
    cfg: TrainConfig = TrainConfig(),
    repetition: int = 0,
    workers: int = 1,
) -> tuple:
    """K-fold choice of lambda by mean validation accuracy.

    Ties go to the larger lambda. A failed (lambda, fold) cell marks that
    lambda as failed; if every lambda fails, :class:`SelectionError` is raised.
    Returns ``(best_lambda, CVTable)``.
    """
    grid = tuple(float(g) for g in grid)
    if not grid:
        raise SelectionError("empty lambda grid")
    folds = kfold_indices(ds.n_samples, plan, repetition, labels=ds.labels)
    cells = [(i, k) for i in range(len(grid)) for k in range(len(folds))]
    acc = np.full((len(grid), len(folds)), np.nan)
    errors = {}

    def run(cell):
        i, k = cell
        try:
            return cell, _cv_cell(ds, spec, cfg, grid[i], *folds[k]), None
        except Exception as e:  # recorded per cell, never aborts the sweep
            return cell, math.nan, e

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]
    for (i, k), a, err in results:
        acc[i, k] = a
        if err is not None:
            errors[(grid[i], k)] = repr(err)

    table = CVTable(grid, acc, errors)
    means = table.mean_accuracy
    if np.all(np.isnan(means)):
        raise SelectionError(f"every lambda failed during cross-validation: {errors}")
    top = np.nanmax(means)
    tied = [g for g, m in zip(grid, means) if not np.isnan(m) and m >= top - 1e-12]
    return max(tied), table


# -- persistence ---------------------------------------------------------------

_MAGIC = "# bregman-tweedie linear model v1"


def _f(x: float) -> str:
    return "%.17g" % x


def dumps_model(h: Hyperplane) -> str:
    spec = h.spec
    pre = h.preprocessing
    out = io.StringIO()
    out.write(_MAGIC + "\n")
    if isinstance(spec, HingeSpec):
        out.write("loss hinge\n")
        out.write("mode -\n")
    else:
        out.write("loss bregman-tweedie\n")
        out.write(f"mode {spec.mode.value}\n")
    out.write(f"alpha {format_rational(spec.alpha)}\n")
    out.write(f"c {_f(spec.c)}\n")
    c_a = getattr(spec, "c_alpha", None)
    out.write(f"c_alpha {'none' if c_a is None else _f(c_a)}\n")
    out.write(f"rho {_f(h.rho)}\n")
    out.write(f"lambda {_f(h.lam)}\n")
    out.write(f"n_features {h.w.shape[0]}\n")
    out.write(f"b_x {'none' if pre.b_x is None else _f(pre.b_x)}\n")
    out.write("means " + " ".join(_f(v) for v in pre.means) + "\n")
    out.write("stds " + " ".join(_f(v) for v in pre.stds) + "\n")
    out.write("w " + " ".join(_f(v) for v in h.w) + "\n")
    out.write(f"b {_f(h.b)}\n")
    return out.getvalue()


def loads_model(text: str) -> Hyperplane:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _MAGIC:
        raise ParseError("not a bregman-tweedie model file")
    fields = {}
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        fields[key] = rest.strip()
    try:
        d = int(fields["n_features"])
        alpha = as_rational(fields["alpha"])
        c = float(fields["c"])

        def vec(key):
            vals = fields[key].split() if fields[key] else []
            if len(vals) != d:
                raise ParseError(f"{key}: expected {d} values, got {len(vals)}")
            return np.array([float(v) for v in vals])

        if fields["loss"] == "hinge":
            spec = HingeSpec(alpha, c)
        else:
            mode = Mode.parse(fields["mode"])
            make_spec(alpha, mode, c if mode is Mode.EXPLICIT else None)  # validates alpha
            c_a = None if fields["c_alpha"] == "none" else float(fields["c_alpha"])
            spec = LossSpec(Fraction(alpha), c, mode, c_a)
        b_x = None if fields["b_x"] == "none" else float(fields["b_x"])
        pre = Preprocessing(vec("means"), vec("stds"), b_x)
        return Hyperplane(vec("w"), float(fields["b"]), spec, pre, float(fields["rho"]), float(fields["lambda"]))
    except KeyError as e:
        raise ParseError(f"model file missing field {e.args[0]!r}") from None
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"malformed model file: {e}") from None


def save_model(h: Hyperplane, path) -> None:
    Path(path).write_text(dumps_model(h), encoding="utf-8")


def load_model(path) -> Hyperplane:
    return loads_model(Path(path).read_text(encoding="utf-8"))
