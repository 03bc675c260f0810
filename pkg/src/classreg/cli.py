"""Command-line front end.

Exit codes: 0 success, 2 usage or I/O error, 3 trainer did not converge
(artifacts are still written), 4 the regularization rule failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import datagen, regsel
from .boundary import boundary_rows, write_boundary_csv
from .errors import BracketInvalid, ClassRegError, DegenerateIterate, RankDeficient
from .features import BasisSpec
from .lsq import LinearModel, classify_rows, fit_ls, fit_ridge
from .online import TrainConfig, gradient_train, perceptron_train, winnow_train

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_RULE_FAILED = 4

ALGOS = ("ls", "ls-reg", "gradient", "perceptron", "perceptron2", "winnow")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument plumbing
# --------------------------------------------------------------------------

def _float_pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _label_map(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or value.strip() not in ("0", "1"):
            raise argparse.ArgumentTypeError(f"label map entries look like name=0 or name=1, got {item!r}")
        out[name.strip()] = int(value)
    return out


def _add_data_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data")
    g.add_argument("--data", required=True, help="dataset CSV with a header row")
    g.add_argument("--features", help="comma-separated feature columns (default: all but the label)")
    g.add_argument("--label", default="label", help="label column (default: label)")
    g.add_argument("--label-map", type=_label_map, help="e.g. setosa=1,versicolor=0; other labels are skipped")
    g.add_argument("--label-threshold", type=float, help="class 1 where the label column exceeds this value")


def _add_train_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training")
    g.add_argument("--basis", help="poly:<d>, linear2d, quad2d or linear:<k> (default: linear in the features)")
    g.add_argument("--eta", type=float, default=0.5)
    g.add_argument("--gamma", type=float, default=None)
    g.add_argument("--reg-sign", choices=("descent", "paper-literal"), default="descent")
    g.add_argument("--theta", type=float, default=1e-6)
    g.add_argument("--max-iter", type=int, default=100_000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threshold", type=float, default=0.5, help="least-squares decision level")
    g.add_argument("--alpha", type=float, default=2.0, help="WINNOW promotion factor")
    g.add_argument("--winnow-threshold", type=float, help="WINNOW decision level (default: number of weights)")
    g.add_argument("--winnow-init", choices=("ones", "random"), default="ones")


def _add_rule_args(p: argparse.ArgumentParser, default_rule: str) -> None:
    g = p.add_argument_group("regularization parameter")
    rules = ("apriori", "morozov", "balancing") + (("fixed",) if default_rule == "fixed" else ())
    g.add_argument("--rule", choices=rules, default=default_rule)
    g.add_argument("--delta", type=float, help="noise level")
    g.add_argument("--mu", type=float, default=1.0)
    g.add_argument("--C", dest="C", type=float, default=1.0)
    g.add_argument("--gamma0", type=float, default=1.0)
    g.add_argument("--p", type=float, help="decay exponent of gamma_k = gamma0/(k+1)^p")
    g.add_argument("--steps", type=int, default=1, help="schedule length used with --p")
    g.add_argument("--c-m", type=float, default=1.0, help="discrepancy multiplier (>= 1)")
    g.add_argument("--bracket", type=_float_pair, default=(1e-10, 1e10))
    g.add_argument("--tol", type=float, default=1e-6)
    g.add_argument("--rule-theta", type=float, default=1e-3, help="balancing stabilization tolerance")
    g.add_argument("--rule-max-iter", type=int, default=100)
    g.add_argument("--omega0", type=_float_list, help="first guess for the weights (default: zeros)")


def _load_dataset(args) -> datagen.Dataset:
    features = args.features.split(",") if args.features else None
    return datagen.load_csv(args.data, features, args.label, args.label_map, args.label_threshold)


def _basis_for(args, algo: str, ds: datagen.Dataset) -> BasisSpec:
    if algo == "perceptron2":
        return BasisSpec.quadratic2d()
    if args.basis:
        return BasisSpec.parse(args.basis)
    return BasisSpec.linear(ds.features.shape[1])


def _train_config(args, gamma: float) -> TrainConfig:
    return TrainConfig(eta=args.eta, gamma=gamma, theta=args.theta, max_iter=args.max_iter,
                       seed=args.seed, reg_sign=args.reg_sign)


def _select(args, A=None, t=None) -> regsel.RegSelection:
    rule = args.rule
    if rule == "apriori":
        if args.delta is None:
            raise UsageError("--rule apriori needs --delta")
        return regsel.apriori_select(args.delta, args.C, args.mu, args.p, args.steps)
    if A is None:
        raise UsageError(f"--rule {rule} needs --data")
    if rule == "morozov":
        if args.delta is None:
            raise UsageError("--rule morozov needs --delta")
        return regsel.morozov_select(A, t, args.delta, args.c_m, args.bracket, args.tol, args.omega0)
    return regsel.balancing_fixed_point(A, t, args.gamma0, args.C, args.rule_theta,
                                        args.rule_max_iter, args.omega0)


def _train_one(args, algo: str, ds: datagen.Dataset) -> tuple[LinearModel, dict, bool]:
    """Fit one algorithm; returns (model, report document, converged)."""
    basis = _basis_for(args, algo, ds)
    A = basis.design(ds.features)
    t = ds.targets.astype(np.float64)
    if algo in ("ls", "ls-reg"):
        if algo == "ls":
            model, diag = fit_ls(A, t)
            rule = None
        else:
            rule = getattr(args, "rule", "fixed")
            if rule == "fixed":
                if args.gamma is None:
                    raise UsageError("--algo ls-reg needs --gamma or a --rule")
                gamma = args.gamma
            else:
                gamma = _select(args, A, t).gamma_star
            model, diag = fit_ridge(A, t, gamma)
        model.threshold = args.threshold
        report = {
            "algo": algo,
            "converged": True,
            "iterations": 0,
            "final_misclassified": int(np.sum(classify_rows(model, A.matrix) != ds.targets)),
            "residual_norm": diag.residual_norm,
            "weight_norm": diag.weight_norm,
            "gamma": diag.gamma,
        }
        if rule not in (None, "fixed"):
            report["rule"] = rule
        return model, report, True
    cfg = _train_config(args, args.gamma or 0.0)
    if algo == "gradient":
        model, rep = gradient_train(A, t, cfg)
    elif algo == "winnow":
        model, rep = winnow_train(A, t, args.alpha, cfg, args.winnow_threshold, args.winnow_init)
    else:
        model, rep = perceptron_train(A, t, cfg)
    return model, {"algo": algo, **rep.to_dict()}, rep.converged, rep


def _write_json(doc, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_gen(args) -> int:
    kind = args.generator
    field_grid = None
    if kind == "linear":
        ds = datagen.gen_linear_two_class(args.n, args.x_lo, args.x_hi,
                                          datagen.NoiseSpec(args.delta, args.seed), args.jitter)
    elif kind == "circle":
        ds = datagen.gen_circle_two_class(args.n, args.r_inner, args.r_outer, args.seed)
    elif kind == "gauss":
        ds = datagen.gen_gaussian_two_class(args.n, args.separation, args.sigma, args.seed)
    elif kind == "boolean":
        ds = datagen.gen_boolean(args.n, args.attributes, args.target_attribute - 1)
    elif kind == "bump":
        field_grid = datagen.bump_field(args.grid, args.peak, args.width)
        ds = datagen.segment_field(field_grid, args.threshold)
    else:  # segment
        if not args.field:
            raise UsageError("gen segment needs --field")
        ds = datagen.segment_field(datagen.load_field(args.field), args.threshold)
    if args.out:
        datagen.write_csv(ds, args.out)
        stream = sys.stdout
    else:
        datagen.write_csv(ds, sys.stdout)
        stream = sys.stderr
    if field_grid is not None and args.field_out:
        datagen.write_field(field_grid, args.field_out)
    zeros, ones = ds.class_counts
    print(f"seed={args.seed} rows={len(ds)} class0={zeros} class1={ones}", file=stream)
    return EXIT_OK


def cmd_train(args) -> int:
    ds = _load_dataset(args)
    result = _train_one(args, args.algo, ds)
    model, report, converged = result[:3]
    Path(args.out).write_text(model.to_json(), encoding="utf-8")
    report_path = args.report or str(Path(args.out).with_suffix("")) + ".report.json"
    _write_json(report, report_path)
    if args.history and len(result) > 3:
        result[3].write_history_csv(args.history)
    status = "converged" if converged else f"did not converge ({report.get('stop_reason')})"
    print(f"{args.algo}: {status}; model -> {args.out}, report -> {report_path}")
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_select_gamma(args) -> int:
    A = t = None
    if args.data:
        ds = _load_dataset(args)
        basis = BasisSpec.parse(args.basis) if args.basis else BasisSpec.linear(ds.features.shape[1])
        A = basis.design(ds.features)
        t = ds.targets.astype(np.float64)
    try:
        sel = _select(args, A, t)
    except (BracketInvalid, DegenerateIterate) as exc:
        print(f"error: {args.rule} selection failed: {exc}", file=sys.stderr)
        return EXIT_RULE_FAILED
    text = sel.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.trace:
        trace = sel.trace
        if not trace and A is not None:
            trace = [regsel.value_function(A, t, sel.gamma_star, args.omega0)]
        sel.trace = trace
        sel.write_trace_csv(args.trace)
    if not sel.converged:
        print(f"warning: {args.rule} did not stabilize; reporting the last iterate", file=sys.stderr)
        return EXIT_RULE_FAILED
    return EXIT_OK


def cmd_boundary(args) -> int:
    model = LinearModel.from_json(Path(args.model).read_text(encoding="utf-8"))
    y_range = (args.y_min, args.y_max) if args.y_min is not None and args.y_max is not None else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        header, rows = boundary_rows(model, (args.x_min, args.x_max), args.samples, y_range)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    write_boundary_csv(header, rows, args.out)
    print(f"{len(rows)} boundary rows -> {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    if len(algos) < 2:
        raise UsageError("compare needs at least two algorithms")
    unknown = [a for a in algos if a not in ALGOS]
    if unknown:
        raise UsageError(f"unknown algorithms {unknown}; choose from {', '.join(ALGOS)}")
    ds = _load_dataset(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    x_range = (float(ds.features[:, 0].min()), float(ds.features[:, 0].max()))
    y_range = None
    if ds.features.shape[1] > 1:
        y_range = (float(ds.features[:, 1].min()), float(ds.features[:, 1].max()))

    rows = []
    for algo in algos:
        try:
            model, report, converged = _train_one(args, algo, ds)[:3]
        except (ClassRegError, UsageError) as exc:
            rows.append([algo, "false", "", "", "", f"{type(exc).__name__}: {exc}"])
            continue
        (out / f"{algo}.model.json").write_text(model.to_json(), encoding="utf-8")
        _write_json(report, out / f"{algo}.report.json")
        if model.basis.raw_dim <= 2:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                header, brows = boundary_rows(model, x_range, args.samples, y_range)
            write_boundary_csv(header, brows, out / f"{algo}.boundary.csv")
        rows.append([
            algo,
            "true" if converged else "false",
            report["iterations"],
            report["final_misclassified"],
            " ".join(repr(float(w)) for w in model.weights),
            "" if converged else report.get("stop_reason", ""),
        ])
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["algo", "converged", "iterations", "misclassified", "weights", "note"])
        writer.writerows(rows)
    for row in rows:
        print(",".join(str(c) for c in row[:4]))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic dataset CSV")
    p.add_argument("generator", choices=("linear", "circle", "gauss", "boolean", "bump", "segment"))
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.0, help="noise level in [0, 1] (linear)")
    p.add_argument("--x-lo", type=float, default=-2.0)
    p.add_argument("--x-hi", type=float, default=2.0)
    p.add_argument("--jitter", type=float, default=1.0, help="vertical scatter amplitude (linear)")
    p.add_argument("--r-inner", type=float, default=1.0)
    p.add_argument("--r-outer", type=float, default=3.0)
    p.add_argument("--separation", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--attributes", type=int, default=4)
    p.add_argument("--target-attribute", type=int, default=1, help="1-based attribute copied to the label")
    p.add_argument("--grid", type=int, default=30, help="nodes per side (bump)")
    p.add_argument("--peak", type=float, default=8.0)
    p.add_argument("--width", type=float, default=0.2)
    p.add_argument("--threshold", type=float, default=4.0, help="segmentation level (bump, segment)")
    p.add_argument("--field", help="headerless CSV grid to segment")
    p.add_argument("--field-out", help="also write the bump grid here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", help="fit one classifier")
    _add_data_args(p)
    p.add_argument("--algo", choices=ALGOS, required=True)
    _add_train_args(p)
    _add_rule_args(p, "fixed")
    p.add_argument("--out", required=True, help="model JSON")
    p.add_argument("--report", help="report JSON (default: <out>.report.json)")
    p.add_argument("--history", help="loss history CSV (iterative trainers)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("select-gamma", help="choose the regularization parameter")
    _add_rule_args(p, "balancing")
    g = p.add_argument_group("data")
    g.add_argument("--data")
    g.add_argument("--features")
    g.add_argument("--label", default="label")
    g.add_argument("--label-map", type=_label_map)
    g.add_argument("--label-threshold", type=float)
    g.add_argument("--basis")
    p.add_argument("--trace", help="CSV of (gamma, F, phi_bar, psi_bar) at every evaluated gamma")
    p.add_argument("--out")
    p.set_defaults(func=cmd_select_gamma)

    p = sub.add_parser("boundary", help="emit decision-boundary points for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--x-min", type=float, default=-2.0)
    p.add_argument("--x-max", type=float, default=2.0)
    p.add_argument("--y-min", type=float)
    p.add_argument("--y-max", type=float)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("compare", help="train several classifiers on one dataset")
    _add_data_args(p)
    p.add_argument("--algos", required=True, help="comma-separated, at least two")
    _add_train_args(p)
    _add_rule_args(p, "fixed")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (BracketInvalid, DegenerateIterate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RULE_FAILED
    except RankDeficient as exc:
        print(f"error: {exc}; try --algo ls-reg", file=sys.stderr)
        return EXIT_USAGE
    except (ClassRegError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
