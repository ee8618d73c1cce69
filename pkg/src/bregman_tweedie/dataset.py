"""CSV ingestion, standardisation, l1 rescaling and cross-validation plans.

Preprocessing follows the training protocol: z-score each feature with the
population standard deviation, then divide every row by ``B_X + 1``, where
``B_X`` is the largest row l1 norm of the standardised training set. After
that every training row has l1 norm below one. Test data always reuses the
training statistics.

Fold shuffles use numpy's PCG64 generator. Each (seed, repetition) pair gets
its own stream via ``SeedSequence([seed, repetition])``, which makes the
splits reproducible across platforms.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidPlan, LabelError, ParseError

__all__ = [
    "Dataset",
    "Preprocessing",
    "CVPlan",
    "load_csv",
    "standardize",
    "rescale_l1",
    "preprocess",
    "kfold_indices",
    "make_rng",
    "two_gaussians",
]


@dataclass(frozen=True)
class Preprocessing:
    """Training-set statistics needed to map raw features into model space."""

    means: np.ndarray
    stds: np.ndarray
    b_x: float | None = None

    @property
    def divisor(self) -> float:
        return 1.0 if self.b_x is None else self.b_x + 1.0

    def apply(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        safe = np.where(self.stds > 0, self.stds, 1.0)
        Z = np.where(self.stds > 0, (X - self.means) / safe, 0.0)
        return Z / self.divisor


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_means: np.ndarray | None = None
    feature_stds: np.ndarray | None = None
    b_x: float | None = None
    rescaled: bool = False
    name: str = ""
    feature_names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.features, dtype=float))
        y = np.asarray(self.labels, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if y.size and not np.all(np.isin(y, (-1.0, 1.0))):
            raise LabelError("labels must be -1 or +1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def standardized(self) -> bool:
        return self.feature_means is not None

    @property
    def preprocessing(self) -> Preprocessing:
        d = self.n_features
        means = self.feature_means if self.standardized else np.zeros(d)
        stds = self.feature_stds if self.standardized else np.ones(d)
        return Preprocessing(np.asarray(means), np.asarray(stds), self.b_x if self.rescaled else None)

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return replace(self, features=self.features[idx], labels=self.labels[idx])


_BINARY_NUMERIC = {-1.0: -1, 0.0: -1, 1.0: 1}


def _default_label_map(raw: Sequence[str]) -> dict:
    classes = sorted(set(raw))
    if len(classes) != 2:
        raise LabelError(f"expected exactly two classes, found {len(classes)}: {classes[:5]}")
    try:
        nums = {c: float(c) for c in classes}
    except ValueError:
        return {classes[0]: -1, classes[1]: 1}
    if set(nums.values()) <= set(_BINARY_NUMERIC) and len(set(_BINARY_NUMERIC[v] for v in nums.values())) == 2:
        return {c: _BINARY_NUMERIC[v] for c, v in nums.items()}
    lo, hi = sorted(classes, key=nums.__getitem__)
    return {lo: -1, hi: 1}


def load_csv(
    path,
    label_col: int | str = -1,
    has_header: bool = False,
    label_map: Mapping[str, int] | None = None,
) -> Dataset:
    """Read a comma-separated file into a raw (unstandardised) :class:`Dataset`.

    ``label_col`` is a column index (negative counts from the end) or, with a
    header, a column name. Without ``label_map``, ``{0, 1}`` and ``{-1, +1}``
    map the obvious way; any other pair sends the smaller class (numeric
    order if both parse as numbers, else lexicographic) to ``-1``.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    header = None
    if has_header:
        if not rows:
            raise ParseError(f"{path}: empty file")
        header, rows = [h.strip() for h in rows[0]], rows[1:]
    if not rows:
        raise ParseError(f"{path}: no data rows")
    width = len(header) if header is not None else len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ParseError(f"{path}: row {i + 1} has {len(r)} fields, expected {width}")

    if isinstance(label_col, str) and not label_col.lstrip("-").isdigit():
        if header is None:
            raise ParseError("a named label column needs has_header=True")
        try:
            col = header.index(label_col)
        except ValueError:
            raise ParseError(f"label column {label_col!r} not in header") from None
    else:
        col = int(label_col)
        if not -width <= col < width:
            raise ParseError(f"label column {col} out of range for {width} columns")
        col %= width

    raw_labels = [r[col].strip() for r in rows]
    mapping = dict(label_map) if label_map is not None else _default_label_map(raw_labels)
    if len(set(raw_labels)) != 2:
        raise LabelError(f"expected exactly two classes, found {len(set(raw_labels))}")
    try:
        y = np.array([mapping[v] for v in raw_labels], dtype=float)
    except KeyError as e:
        raise LabelError(f"label {e.args[0]!r} missing from label map") from None
    if set(np.unique(y)) != {-1.0, 1.0}:
        raise LabelError("label map must send the two classes to -1 and +1")

    keep = [j for j in range(width) if j != col]
    try:
        X = np.array([[float(r[j]) for j in keep] for r in rows], dtype=float)
    except ValueError as e:
        raise ParseError(f"{path}: non-numeric feature value ({e})") from None
    names = tuple(header[j] for j in keep) if header is not None else ()
    return Dataset(X, y, name=path.stem, feature_names=names)


def standardize(ds: Dataset, stats_from: Dataset | Preprocessing | None = None) -> Dataset:
    """Z-score columns with population std; constant columns become zero."""
    if stats_from is None:
        means = ds.features.mean(axis=0)
        stds = ds.features.std(axis=0)
        # a constant column can pick up a rounding-level spread; treat it as constant
        scale = np.abs(ds.features).max(axis=0, initial=0.0)
        stds = np.where(stds <= 1e-12 * scale, 0.0, stds)
    else:
        pre = stats_from.preprocessing if isinstance(stats_from, Dataset) else stats_from
        means, stds = np.asarray(pre.means, float), np.asarray(pre.stds, float)
    Z = Preprocessing(means, stds).apply(ds.features) if ds.n_samples else ds.features
    return replace(ds, features=Z, feature_means=means, feature_stds=stds, b_x=None, rescaled=False)


def rescale_l1(ds: Dataset, b_x_from: float | None = None) -> Dataset:
    """Divide rows by ``B_X + 1``; ``B_X`` is this set's max row l1 norm unless given."""
    b_x = float(np.abs(ds.features).sum(axis=1).max(initial=0.0)) if b_x_from is None else float(b_x_from)
    return replace(ds, features=ds.features / (b_x + 1.0), b_x=b_x, rescaled=True)


def preprocess(train: Dataset, *others: Dataset) -> tuple:
    """Standardise + rescale ``train`` and map ``others`` with its statistics."""
    tr = rescale_l1(standardize(train))
    out = [tr]
    for ds in others:
        out.append(rescale_l1(standardize(ds, tr), tr.b_x))
    return tuple(out)


@dataclass(frozen=True)
class CVPlan:
    folds: int = 4
    repetitions: int = 5
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if self.folds < 2:
            raise InvalidPlan(f"need at least 2 folds, got {self.folds}")
        if self.repetitions < 1:
            raise InvalidPlan(f"need at least 1 repetition, got {self.repetitions}")


def make_rng(*key: int) -> np.random.Generator:
    """PCG64 stream keyed by a tuple of nonnegative integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(k) for k in key])))


def kfold_indices(n: int, plan: CVPlan, repetition: int = 0, labels=None) -> list:
    """Shuffle ``range(n)`` and cut it into ``plan.folds`` near-equal blocks.

    Returns a list of ``(train_idx, valid_idx)`` pairs. With
    ``plan.stratified`` and ``labels`` given, each class is dealt round-robin
    across folds after shuffling.
    """
    if n < plan.folds:
        raise InvalidPlan(f"{n} samples cannot fill {plan.folds} folds")
    rng = make_rng(plan.seed, repetition)
    perm = rng.permutation(n)
    if plan.stratified and labels is not None:
        labels = np.asarray(labels)
        order = np.concatenate([perm[labels[perm] == c] for c in np.unique(labels)])
        blocks = [order[k:: plan.folds] for k in range(plan.folds)]
    else:
        blocks = np.array_split(perm, plan.folds)
    out = []
    for k, valid in enumerate(blocks):
        train = np.concatenate([b for j, b in enumerate(blocks) if j != k])
        out.append((np.sort(train), np.sort(valid)))
    return out


def two_gaussians(n: int, d: int, separation: float, seed: int = 0, name: str = "two-gaussians") -> Dataset:
    """Balanced two-class Gaussian blobs with unit covariance.

    Class means sit at ``+-separation/2`` along the first axis.
    """
    rng = make_rng(seed)
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    X = rng.standard_normal((n, d))
    X[:, 0] += y * separation / 2.0
    perm = rng.permutation(n)
    return Dataset(X[perm], y[perm], name=name)
