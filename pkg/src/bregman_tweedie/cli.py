"""Command-line front end: ``bregman-tweedie <command> [flags]``.

Tables and reports go to stdout (or ``--out``), diagnostics to stderr.
Exit status is 0 on success, 1 on a runtime failure and 2 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .alpha_domain import RealCategory, as_rational, classify_rational, format_rational
from .bench import default_methods, emit_report, read_manifest, run_benchmark
from .classifier import (
    DEFAULT_LAMBDA_GRID,
    TrainConfig,
    accuracy,
    fit,
    load_model,
    predict_many,
    save_model,
    dumps_model,
    select_lambda,
)
from .dataset import CVPlan, load_csv, preprocess
from .errors import (
    BranchRequired,
    BregmanTweedieError,
    GradDomainError,
    InvalidPlan,
    InvalidScale,
    UnsupportedAlpha,
)
from .extended import BranchChoice, domain_exp, domain_ln
from .legendre import BaseFunction, bregman_div, domain_phi, domain_psi, is_legendre_type
from .losses import HingeSpec, Mode, make_spec
from .optimizer import OptimConfig

log = logging.getLogger("bregman_tweedie")


class UsageError(Exception):
    """Bad flag values detected after argparse has run; exits with status 2."""


_USAGE = (UsageError, UnsupportedAlpha, InvalidScale, InvalidPlan)


def _alpha(text):
    try:
        return as_rational(text)
    except (ValueError, TypeError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _grid(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad lambda grid {text!r}") from None
    if not vals or any(not (v >= 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError("lambda grid needs nonnegative finite values")
    return vals


def _label_map(text):
    out = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        if not sep or val.strip() not in ("-1", "1", "+1"):
            raise argparse.ArgumentTypeError(f"bad label map entry {part!r}; expected raw=+1 or raw=-1")
        out[key.strip()] = int(val)
    return out


def _label_col(text):
    return int(text) if text.lstrip("-").isdigit() else text


def _fmt(x) -> str:
    return repr(float(x))


def _write(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _linspace(args):
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if args.steps == 1:
        return np.array([args.m_min])
    return np.linspace(args.m_min, args.m_max, args.steps)


def _loss_spec(args):
    a = args.alpha
    mode = Mode.parse(args.mode)
    hinge = getattr(args, "hinge", False)
    if hinge:
        return HingeSpec(a, args.c if args.c is not None else 1.0)
    if args.c is not None and mode is not Mode.EXPLICIT:
        mode = Mode.EXPLICIT
    return make_spec(a, mode, args.c)


# -- commands ------------------------------------------------------------------


def cmd_loss_table(args):
    spec = _loss_spec(args)
    rows = []
    for m in _linspace(args):
        loss = spec.value(m)
        if m >= spec.margin_bound:
            grad = ""
        else:
            try:
                grad = _fmt(spec.grad(m))
            except GradDomainError:
                grad = ""
        rows.append([_fmt(m), _fmt(loss), grad])
    _write(args, _csv(rows, ["m", "loss", "grad"]))
    return 0


def _base(kind, a, branch):
    try:
        return getattr(BaseFunction, kind)(a, branch)
    except BranchRequired:
        return getattr(BaseFunction, kind)(a, BranchChoice.POSITIVE)


def cmd_divergence_table(args):
    a = args.alpha
    if not is_legendre_type(a):
        raise UsageError(f"alpha={format_rational(a)} gives no Legendre-type pair")
    branch = BranchChoice(args.branch) if args.branch else None
    f_psi = _base("psi", a, branch)
    f_phi = _base("phi", a, branch)
    grid = _linspace(args)

    def div(f, x, y):
        if not (f.domain.contains(x) and f.domain.interior().contains(y)):
            return ""
        with np.errstate(all="ignore"):
            v = bregman_div(f, x, y)
        return _fmt(v) if np.isfinite(v) else ""

    rows = [[_fmt(x), _fmt(y), div(f_psi, x, y), div(f_phi, x, y)] for x in grid for y in grid]
    _write(args, _csv(rows, ["x", "y", "D_psi", "D_phi"]))
    return 0


def _dom(fn, a, **kw):
    try:
        return fn(a, **kw).name
    except BranchRequired:
        return f"{fn(a, branch=BranchChoice.POSITIVE, **kw).name} / {fn(a, branch=BranchChoice.NEGATIVE, **kw).name}"


def cmd_domain_info(args):
    a = args.alpha
    cat = classify_rational(a)
    lines = [
        f"alpha = {format_rational(a)}",
        f"alpha in {cat.value}",
        f"1 - alpha = {format_rational(1 - a)} in {classify_rational(1 - a).value}",
        f"dom exp_alpha (raw) = {_dom(domain_exp, a, reduced=False)}",
        f"dom ln_alpha (raw) = {_dom(domain_ln, a, reduced=False)}",
        f"dom exp_alpha (reduced) = {_dom(domain_exp, a, reduced=True)}",
        f"dom ln_alpha (reduced) = {_dom(domain_ln, a, reduced=True)}",
    ]
    if a > 1 and cat is RealCategory.RE:
        # branches are named by the sign of each function's own domain; exp maps one onto the other
        lines.append("bijections: exp_alpha R++ -> ln_alpha R--, exp_alpha R-- -> ln_alpha R++")
    if is_legendre_type(a):
        lines.append(f"dom Psi = {_dom(domain_psi, a)}")
        lines.append(f"dom Phi = {_dom(domain_phi, a)}")
    else:
        lines.append("Psi / Phi: not of Legendre type at this alpha")
    if a == 1:
        lines.append("c_alpha: none (alpha = 1, exp_{1,c}(x) = c e^x)")
    else:
        lines.append("c_alpha = c^(1-alpha) / (alpha-1)")
    lines.append(f"Legendre type: {'yes' if is_legendre_type(a) else 'no'}")
    _write(args, "\n".join(lines) + "\n")
    if not (a in (0, 1) or (0 < a < 1 and cat is RealCategory.RE)):
        print(f"warning: alpha={format_rational(a)} ({cat.value}) is outside the supported loss family", file=sys.stderr)
    return 0


def _train_cfg(args, lam=None):
    if not 1.0 < args.rho < 2.0:
        raise UsageError(f"--rho must lie in (1, 2), got {args.rho}")
    if args.tol <= 0 or args.max_iter < 1:
        raise UsageError("--tol and --max-iter must be positive")
    optim = OptimConfig(tol=args.tol, max_iter=args.max_iter)
    return TrainConfig(lam=args.lam if lam is None else lam, rho=args.rho, optim=optim, seed=args.seed)


def _plan(args):
    return CVPlan(folds=args.folds, repetitions=args.reps, seed=args.seed)


def _load(args, path):
    return load_csv(path, args.label_col, args.has_header, args.label_map)


def cmd_train(args):
    spec = _loss_spec(args)
    (train,) = preprocess(_load(args, args.data))
    h = fit(train, spec, _train_cfg(args))
    text = dumps_model(h)
    if args.out:
        save_model(h, args.out)
    else:
        sys.stdout.write(text)
    res = h.result
    print(
        f"{spec.describe()} lambda={h.lam:g}: {res.status} after {res.iterations} iterations, "
        f"objective={res.value:.10g}, train accuracy={accuracy(h, train):.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_predict(args):
    h = load_model(args.model)
    raw = _load(args, args.data) if args.labelled else None
    if raw is not None:
        X = raw.features
    else:
        X = np.atleast_2d(np.loadtxt(args.data, delimiter=",", skiprows=1 if args.has_header else 0, ndmin=2))
    labels = predict_many(h, X)
    _write(args, "".join(f"{int(v)}\n" for v in labels))
    if raw is not None:
        print(f"accuracy={float(np.mean(labels == raw.labels)):.4f}", file=sys.stderr)
    return 0


def cmd_cv(args):
    spec = _loss_spec(args)
    (train,) = preprocess(_load(args, args.data))
    plan = _plan(args)
    cfg = _train_cfg(args)
    rows = []
    for rep in range(plan.repetitions):
        best, table = select_lambda(train, spec, plan, args.lambda_grid, cfg, repetition=rep)
        for lam, mean in zip(table.grid, table.mean_accuracy):
            rows.append([rep, _fmt(lam), "" if np.isnan(mean) else _fmt(mean), int(lam == best)])
        print(f"repetition {rep}: best lambda = {best:g}", file=sys.stderr)
    _write(args, _csv(rows, ["repetition", "lambda", "mean_accuracy", "selected"]))
    return 0


def cmd_bench(args):
    entries = read_manifest(args.manifest)
    methods = default_methods(args.lambda_grid)
    if args.methods:
        wanted = [m.strip() for m in args.methods.split(",") if m.strip()]
        by_name = {m.name: m for m in methods}
        missing = [w for w in wanted if w not in by_name]
        if missing:
            raise UsageError(f"unknown methods {missing}; known: {list(by_name)}")
        methods = [by_name[w] for w in wanted]
    report = run_benchmark(entries, methods, _plan(args), _train_cfg(args), workers=args.workers)
    for name, msg in report.failures.items():
        print(f"dataset {name} excluded: {msg}", file=sys.stderr)
    fmt = "markdown" if args.format in ("markdown", "md") else "csv"
    _write(args, emit_report(report, fmt))
    return 0


# -- parser --------------------------------------------------------------------


def _add_loss(p, alpha_required=True):
    p.add_argument("--alpha", type=_alpha, required=alpha_required, default=None if alpha_required else 1,
                   help="rational p/q")
    p.add_argument("--mode", default="l", choices=["h", "l", "custom"], help="H-Bregman, L-Bregman or explicit c")
    p.add_argument("--c", type=float, default=None, help="explicit scale c > 0 (implies --mode custom)")
    p.add_argument("--hinge", action="store_true", help="use the higher-order hinge at --alpha instead")


def _add_grid(p, lo, hi, steps):
    p.add_argument("--m-min", type=float, default=lo)
    p.add_argument("--m-max", type=float, default=hi)
    p.add_argument("--steps", type=int, default=steps)


def _add_data(p):
    p.add_argument("--label-col", type=_label_col, default=-1)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--label-map", type=_label_map, default=None, help="e.g. yes=1,no=-1")


def _add_train(p):
    p.add_argument("--lambda", dest="lam", type=float, default=2.0**-10)
    p.add_argument("--rho", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=500)


def _add_cv(p):
    p.add_argument("--lambda-grid", type=_grid, default=DEFAULT_LAMBDA_GRID, help="comma separated")
    p.add_argument("--folds", type=int, default=4)
    p.add_argument("--reps", type=int, default=5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bregman-tweedie", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("loss-table", help="CSV of (m, loss, grad)")
    _add_loss(p)
    _add_grid(p, -3.0, 3.0, 61)
    p.add_argument("--out")
    p.set_defaults(func=cmd_loss_table)

    p = sub.add_parser("divergence-table", help="CSV of (x, y, D_psi, D_phi) on a square grid")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--branch", choices=[b.value for b in BranchChoice], default=None)
    _add_grid(p, 0.25, 3.0, 12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_divergence_table)

    p = sub.add_parser("domain-info", help="categories and domains for an alpha")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_domain_info)

    p = sub.add_parser("train", help="fit one model and write it out")
    p.add_argument("data")
    _add_loss(p)
    _add_data(p)
    _add_train(p)
    p.add_argument("--out", help="model file (default: stdout)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="labels for each row of a CSV")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--labelled", action="store_true", help="the CSV has a label column; report accuracy")
    _add_data(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("cv", help="cross-validated lambda sweep")
    p.add_argument("data")
    _add_loss(p)
    _add_data(p)
    _add_train(p)
    _add_cv(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("bench", help="benchmark the default methods over a dataset manifest")
    p.add_argument("manifest")
    _add_train(p)
    _add_cv(p)
    p.add_argument("--methods", help="comma separated subset of method names")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "markdown", "md"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _USAGE as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (BregmanTweedieError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
