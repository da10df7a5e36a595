"""Command line interface: ``bsvm gen-data | train | predict | eval | grid | inspect``.

Exit codes: 0 success, 2 input or usage error, 3 trained but not converged.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .data import DataFormatError, Dataset, ToyConfig, dumps_csv, format_float, generate_toy, parse_csv
from .evaluation import (accuracy, decision_grid, default_bounds, grid_to_csv, sensitivity_curve)
from .kernel import KernelSpec
from .model import TrainConfig, decision_function, kkt_report, predict, primal_objective, train
from .persist import ModelFormatError, load_model, save_model
from .qp_solver import ConvergenceWarning, TrainingError

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 2, 3


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _load_data(path: str) -> Dataset:
    try:
        return parse_csv(_read_text(path))
    except DataFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_features(path: str, labeled: bool) -> np.ndarray:
    if labeled:
        return _load_data(path).X
    text = _read_text(path)
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(f) for f in line.split(",")])
        except ValueError:
            raise CliError(f"{path}: malformed number (line {lineno})") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise CliError(f"{path}: rows must be nonempty and of equal width")
    return np.array(rows)


def _load_model(path: str):
    try:
        return load_model(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except ModelFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _info(args, text: str) -> None:
    # keep stdout clean when it carries data
    stream = sys.stderr if getattr(args, "out", None) == "-" else sys.stdout
    print(text, file=stream)


def cmd_gen_data(args) -> int:
    cfg = ToyConfig(seed=args.seed, points_per_cluster=args.per_cluster, sigma1=args.sigma1, sigma2=args.sigma2)
    data = generate_toy(cfg)
    _write_text(args.out, dumps_csv(data))
    _info(args, f"n={data.n} positive={data.n_pos} negative={data.n_neg}")
    return EXIT_OK


def cmd_train(args) -> int:
    data = _load_data(args.data)
    kernel = KernelSpec.linear() if args.kernel == "linear" else KernelSpec.rbf(args.gamma)
    cfg = TrainConfig(kernel=kernel, rho1=args.rho1, rho2=args.rho2, C1=args.c1, C2=args.c2,
                      tol=args.tol, max_iter=args.max_iter)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        model = train(data, cfg)
    report = kkt_report(model, data)
    primal = primal_objective(model, data)
    try:
        save_model(model, args.out, extra_meta={"primal_objective": primal})
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror}") from None
    print(f"dual_objective={format_float(report.dual_objective)}")
    print(f"primal_objective={format_float(primal)}")
    print(f"duality_gap={format_float(report.duality_gap)}")
    print(f"alpha_svs={report.n_alpha_sv} theta_svs={report.n_theta_sv} "
          f"free_alpha={report.n_free_alpha} free_theta={report.n_free_theta}")
    print(f"iterations={model.meta['iterations']} max_kkt_violation={format_float(model.meta['max_kkt_violation'])}")
    print(f"converged={'true' if model.converged else 'false'}")
    if not model.converged:
        print("warning: solver did not reach the requested tolerance; model written anyway", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _check_dim(model, X, path):
    if X.shape[1] != model.dim:
        raise CliError(f"{path}: points have dimension {X.shape[1]}, model expects {model.dim}")


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    X = _load_features(args.data, labeled=not args.no_labels)
    _check_dim(model, X, args.data)
    g = decision_function(model, X)
    labels = predict(model, X)
    _write_text(args.out, "".join(f"{lab},{format_float(v)}\n" for lab, v in zip(labels, g)))
    return EXIT_OK


def cmd_eval(args) -> int:
    model = _load_model(args.model)
    data = _load_data(args.data)
    _check_dim(model, data.X, args.data)
    print(f"accuracy={accuracy(model, data):.6f}")
    curve = sensitivity_curve(model, data)
    if curve.degenerate:
        print("warning: decision function is zero on every point; sensitivity curve is flat", file=sys.stderr)
    if args.curve_out:
        _write_text(args.curve_out, curve.to_csv())
    if args.report:
        try:
            report = kkt_report(model, data)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        summary = report.summary()
        summary["converged"] = model.converged
        summary["tol"] = model.config.tol
        _write_text(args.report, json.dumps(summary, indent=1) + "\n")
        print(f"duality_gap={format_float(report.duality_gap)} max_residual={format_float(report.max_residual)}")
    return EXIT_OK


def _parse_bounds(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise CliError("--bounds must be xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax")
    return vals


def cmd_grid(args) -> int:
    model = _load_model(args.model)
    if model.dim != 2:
        raise CliError(f"grid evaluation needs a 2-D model, got dimension {model.dim}")
    if args.bounds:
        bounds = _parse_bounds(args.bounds)
    elif args.data:
        bounds = default_bounds(_load_data(args.data).X)
    elif model.n_support:
        bounds = default_bounds(model.support_x)
    else:
        raise CliError("no --bounds, no --data and no support points to derive bounds from")
    if args.resolution < 2:
        raise CliError("--resolution must be >= 2")
    _write_text(args.out, grid_to_csv(decision_grid(model, *bounds, resolution=args.resolution)))
    return EXIT_OK


def cmd_inspect(args) -> int:
    model = _load_model(args.model)
    cfg = model.config
    n_alpha = int((model.support_alpha > 0).sum())
    n_theta = int((model.support_theta > 0).sum())
    kern = "linear" if model.kernel.kind.value == "linear" else f"rbf(gamma={format_float(model.kernel.gamma)})"
    print(f"kernel: {kern}")
    print(f"rho1={format_float(cfg.rho1)} rho2={format_float(cfg.rho2)} "
          f"C1={format_float(cfg.C1)} C2={format_float(cfg.C2)} tol={format_float(cfg.tol)}")
    print(f"dimension: {model.dim}")
    print(f"support points: {model.n_support} (alpha-SVs: {n_alpha}, theta-SVs: {n_theta})")
    print(f"bias: {format_float(model.bias)}")
    print(f"converged: {'true' if model.converged else 'false'}")
    for key, val in sorted(model.meta.items()):
        if val is not None:
            print(f"{key}: {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsvm", description="Banded SVM training toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate the nine-cluster toy dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-cluster", type=int, default=50)
    p.add_argument("--sigma1", type=float, default=0.2)
    p.add_argument("--sigma2", type=float, default=0.2)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train a model (C-SVM with --c2 0 --rho1 1)")
    p.add_argument("--data", default="-")
    p.add_argument("--kernel", choices=("linear", "rbf"), default="rbf")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--rho1", type=float, default=1.0)
    p.add_argument("--rho2", type=float, default=1.5)
    p.add_argument("--c1", type=float, default=10.0)
    p.add_argument("--c2", type=float, default=100.0)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=10_000_000)
    p.add_argument("--out", default="model.json")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write predicted_label,g rows")
    p.add_argument("--model", required=True)
    p.add_argument("--data", default="-")
    p.add_argument("--no-labels", action="store_true", help="input rows hold features only")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="accuracy, sensitivity curve and KKT report")
    p.add_argument("--model", required=True)
    p.add_argument("--data", default="-")
    p.add_argument("--curve-out")
    p.add_argument("--report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="evaluate g on a 2-D lattice")
    p.add_argument("--model", required=True)
    p.add_argument("--bounds", help="xmin,xmax,ymin,ymax (write --bounds=-1,1,-1,1 when xmin is negative)")
    p.add_argument("--data", help="derive default bounds from this dataset")
    p.add_argument("--resolution", type=int, default=100)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("inspect", help="summarise a model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, TrainingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
