"""Repeated cross-validated benchmark over datasets x methods, with Friedman ranks.

Per dataset and repetition: shuffle the training set into folds, pick lambda
by CV accuracy, refit on the full training set, score on the held-out test
file. Accuracies are averaged over repetitions and only then ranked.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .classifier import DEFAULT_LAMBDA_GRID, TrainConfig, accuracy, fit, select_lambda
from .dataset import CVPlan, Dataset, load_csv, preprocess
from .errors import MissingCellError, NameCollisionError, ParseError
from .losses import HingeSpec, LossSpec, Mode, make_spec

__all__ = [
    "MethodSpec",
    "DatasetEntry",
    "BenchmarkReport",
    "default_methods",
    "read_manifest",
    "run_benchmark",
    "friedman_ranking",
    "emit_report",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MethodSpec:
    name: str
    loss: LossSpec | HingeSpec
    grid: tuple = DEFAULT_LAMBDA_GRID


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    train_path: Path
    test_path: Path
    label_col: int | str = -1
    has_header: bool = False

    def load(self) -> tuple:
        train = load_csv(self.train_path, self.label_col, self.has_header)
        test = load_csv(self.test_path, self.label_col, self.has_header)
        return train, test


HB_ALPHAS = ("58/59", "68/69", "76/77", "78/79", "90/91")
LB_ALPHAS = ("62/63", "70/71", "80/81", "84/85", "92/93")


def default_methods(grid=DEFAULT_LAMBDA_GRID) -> list:
    """HB1-HB5, LB1-LB5, then logistic, hinge (SVM) and squared hinge (L2SVM)."""
    methods = [MethodSpec(f"HB{i + 1}", make_spec(a, Mode.HBREGMAN), grid) for i, a in enumerate(HB_ALPHAS)]
    methods += [MethodSpec(f"LB{i + 1}", make_spec(a, Mode.LBREGMAN), grid) for i, a in enumerate(LB_ALPHAS)]
    methods += [
        MethodSpec("Logistic", make_spec(1), grid),
        MethodSpec("SVM", HingeSpec(Fraction(0), 1.0), grid),
        MethodSpec("L2SVM", HingeSpec(Fraction(1, 2), 0.25), grid),
    ]
    return methods


def _flag(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "y", "header"):
        return True
    if t in ("", "0", "false", "no", "n", "noheader"):
        return False
    raise ParseError(f"cannot read header flag {text!r}")


def read_manifest(path) -> list:
    """One dataset per line: ``name, train path, test path[, label column[, header flag]]``.

    Blank lines and ``#`` comments are skipped; relative paths resolve against
    the manifest's directory.
    """
    path = Path(path)
    root = path.parent
    out = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            row = [c.strip() for c in row]
            if not row or not any(row) or row[0].startswith("#"):
                continue
            if len(row) < 3:
                raise ParseError(f"{path}:{lineno}: need at least name, train, test")
            label = row[3] if len(row) > 3 and row[3] else "-1"
            label_col = int(label) if label.lstrip("-").isdigit() else label
            header = _flag(row[4]) if len(row) > 4 else False
            out.append(DatasetEntry(row[0], root / row[1], root / row[2], label_col, header))
    return out


@dataclass
class BenchmarkReport:
    datasets: list
    methods: list
    repetitions: int
    per_cell: dict = field(default_factory=dict)  # (dataset, method, rep) -> test accuracy
    chosen_lambda: dict = field(default_factory=dict)  # same keys
    failures: dict = field(default_factory=dict)  # dataset -> message

    @property
    def ranked_datasets(self) -> list:
        return [d for d in self.datasets if d not in self.failures]

    def accuracy_matrix(self) -> np.ndarray:
        """Rep-averaged test accuracy, rows = surviving datasets, cols = methods."""
        rows = []
        for d in self.ranked_datasets:
            row = []
            for m in self.methods:
                vals = [self.per_cell.get((d, m, r), math.nan) for r in range(self.repetitions)]
                row.append(float(np.mean(vals)))
            rows.append(row)
        return np.array(rows, dtype=float).reshape(len(rows), len(self.methods))

    @property
    def mean_accuracy(self) -> dict:
        acc = self.accuracy_matrix()
        return dict(zip(self.methods, acc.mean(axis=0) if len(acc) else [math.nan] * len(self.methods)))

    @property
    def friedman_rank(self) -> dict:
        acc = self.accuracy_matrix()
        if not len(acc):
            return dict.fromkeys(self.methods, math.nan)
        return dict(zip(self.methods, friedman_ranking(acc)))


def friedman_ranking(acc) -> np.ndarray:
    """Mean rank per method (column); rank 1 is the best accuracy, ties averaged."""
    acc = np.atleast_2d(np.asarray(acc, dtype=float))
    if np.isnan(acc).any():
        raise MissingCellError("accuracy matrix has missing cells")
    ranks = np.vstack([rankdata(-row, method="average") for row in acc])
    return ranks.mean(axis=0)


def _cell(train: Dataset, test: Dataset, method: MethodSpec, plan: CVPlan, cfg: TrainConfig, rep: int):
    lam, _ = select_lambda(train, method.loss, plan, method.grid, cfg, repetition=rep)
    h = fit(train, method.loss, TrainConfig(lam, cfg.rho, cfg.optim, cfg.init, cfg.seed))
    return accuracy(h, test), lam


def _cell_job(args):
    di, name, train, test, method, plan, cfg, rep = args
    try:
        acc, lam = _cell(train, test, method, plan, cfg, rep)
        return di, name, method.name, rep, acc, lam, None
    except Exception as e:
        return di, name, method.name, rep, math.nan, math.nan, repr(e)


def run_benchmark(datasets, methods, plan: CVPlan = CVPlan(), cfg: TrainConfig = TrainConfig(), workers: int = 1) -> BenchmarkReport:
    """Run every (dataset, method, repetition) cell and collect a report.

    ``datasets`` holds :class:`DatasetEntry` items or ``(name, train, test)``
    tuples of raw :class:`Dataset`. A dataset that fails to load or has any
    failing cell is recorded in ``report.failures`` and left out of the
    summary rows. The run itself is never aborted.
    """
    names = [m.name for m in methods]
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise NameCollisionError(f"duplicate method names: {dup}")

    loaded = []
    report = BenchmarkReport([], names, plan.repetitions)
    for item in datasets:
        if isinstance(item, DatasetEntry):
            name = item.name
            try:
                train, test = item.load()
            except Exception as e:
                report.datasets.append(name)
                report.failures[name] = f"load failed: {e!r}"
                continue
        else:
            name, train, test = item
        if name in report.datasets:
            raise NameCollisionError(f"duplicate dataset name {name!r}")
        report.datasets.append(name)
        try:
            train_pp, test_pp = preprocess(train, test)
        except Exception as e:
            report.failures[name] = f"preprocessing failed: {e!r}"
            continue
        loaded.append((name, train_pp, test_pp))

    jobs = [
        (di, name, train, test, m, plan, cfg, rep)
        for di, (name, train, test) in enumerate(loaded)
        for rep in range(plan.repetitions)
        for m in methods
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell_job, jobs, chunksize=1))
    else:
        results = [_cell_job(j) for j in jobs]

    for _, name, mname, rep, acc, lam, err in sorted(results, key=lambda r: (r[0], r[3], r[2])):
        report.per_cell[(name, mname, rep)] = acc
        report.chosen_lambda[(name, mname, rep)] = lam
        if err is not None and name not in report.failures:
            report.failures[name] = f"{mname} rep {rep}: {err}"
    for name, msg in report.failures.items():
        warnings.warn(f"dataset {name} excluded from ranking: {msg}", RuntimeWarning, stacklevel=2)
    return report


def emit_report(report: BenchmarkReport, fmt: str = "csv") -> str:
    """Table with one row per ranked dataset plus ``Mean`` and ``Friedman Ranking`` rows.

    Accuracies are percentages with two decimals; columns follow method
    registration order.
    """
    acc = report.accuracy_matrix()
    rows = [[d] + [f"{100 * v:.2f}" for v in acc[i]] for i, d in enumerate(report.ranked_datasets)]
    means = report.mean_accuracy
    ranks = report.friedman_rank
    rows.append(["Mean"] + [f"{100 * means[m]:.2f}" for m in report.methods])
    rows.append(["Friedman Ranking"] + [f"{ranks[m]:.2f}" for m in report.methods])
    header = ["Dataset"] + list(report.methods)

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt in ("markdown", "md"):
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join(["---"] + ["---:"] * len(report.methods)) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
