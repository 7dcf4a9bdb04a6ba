"""Command-line front end: ``paucsvm {train,predict,eval,cv,roc}``.

Exit codes: 0 success, 2 bad arguments or interval, 3 data errors,
4 iteration cap reached.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .data import DataError, Dataset, FprInterval, Model, ZScoreStats, apply_zscore, \
    normalize_zscore, parse_svmlight
from .metrics import empirical_auc, empirical_pauc, roc_curve, tpr_at_fpr
from .trainers import DEFAULT_DC_GRID, DEFAULT_GRID, ConvergenceError, TrainConfig, \
    cross_validate_C, train

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAP = 0, 2, 3, 4

log = logging.getLogger("paucsvm")


class UsageError(Exception):
    pass


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(path: str, text: str) -> None:
    if not path:
        raise UsageError("output path must not be empty")
    Path(path).write_text(text)


def _interval(args) -> FprInterval:
    try:
        iv = FprInterval(args.alpha, args.beta)
        if getattr(args, "fpr_scale", None) is not None:
            if not args.fpr_scale > 0:
                raise ValueError("--fpr-scale must be positive")
            iv = iv.scaled(args.fpr_scale)
        return iv
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positions(iv: FprInterval, n: int) -> tuple[int, int]:
    try:
        return iv.positions(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_data(path: str, dim: int | None = None) -> Dataset:
    try:
        with open(path) as fh:
            return parse_svmlight(fh, dim=dim)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _load_model(path: str) -> tuple[Model, ZScoreStats | None]:
    try:
        doc = json.loads(Path(path).read_text())
        model = Model.from_json(doc)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"bad model file {path}: {exc}") from None
    stats = None
    if doc.get("zscore"):
        z = doc["zscore"]
        stats = ZScoreStats(np.asarray(z["means"], float), np.asarray(z["stds"], float))
    return model, stats


def _model_inputs(args) -> tuple[Model, Dataset]:
    model, stats = _load_model(args.model)
    data = _load_data(args.data, dim=model.dim)
    if stats is not None:
        data = apply_zscore(data, stats)
    return model, data


def _algo(name: str) -> str:
    return name.replace("-", "_")


def _config(args, iv: FprInterval) -> TrainConfig:
    algo = _algo(args.algo)
    if algo == "pauc_dc" and iv.alpha == 0.0:
        raise UsageError("pauc-dc needs --alpha > 0; use pauc-struct for [0, beta]")
    try:
        return TrainConfig(C=args.C, epsilon=args.epsilon, tau=args.tau, interval=iv,
                           algo=algo, max_outer_iters=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _prepare(args) -> tuple[Dataset, TrainConfig, ZScoreStats | None]:
    iv = _interval(args)
    config = _config(args, iv)
    data = _load_data(args.data)
    stats = None
    if args.normalize:
        data, stats = normalize_zscore(data)
    ja, _ = _positions(iv, data.n)
    if config.algo == "pauc_dc" and ja < 1:
        raise UsageError(f"alpha={iv.alpha} gives j_alpha=0 for n={data.n}; pauc-dc needs j_alpha >= 1")
    return data, config, stats


def cmd_train(args) -> int:
    if not args.model_out:
        raise UsageError("--model-out must not be empty")
    data, config, stats = _prepare(args)
    code = EXIT_OK
    try:
        report = train(data, config)
    except ConvergenceError as exc:
        log.error("%s", exc)
        report, code = exc.report, EXIT_CAP
    doc = report.model.to_json()
    if stats is not None:
        doc["zscore"] = {"means": stats.means.tolist(), "stds": stats.stds.tolist()}
    _write(args.model_out, _dumps(doc))
    report_path = args.report_out or str(Path(args.model_out).with_suffix(".report.json"))
    _write(report_path, _dumps(report.to_json()))
    log.info("model written to %s, report to %s", args.model_out, report_path)
    return code


def cmd_predict(args) -> int:
    model, data = _model_inputs(args)
    X, y = data.to_xy()
    lines = "".join(f"{int(lbl):+d} {float(s)!r}\n" for lbl, s in zip(y, X @ model.weights))
    if args.out is None:
        sys.stdout.write(lines)
    else:
        _write(args.out, lines)
    return EXIT_OK


def cmd_eval(args) -> int:
    iv = _interval(args)
    model, data = _model_inputs(args)
    ja, jb = _positions(iv, data.n)
    sp, sn = data.positives @ model.weights, data.negatives @ model.weights
    doc = {
        "format": 1,
        "auc": empirical_auc(sp, sn),
        "pauc": empirical_pauc(sp, sn, iv),
        "alpha": iv.alpha,
        "beta": iv.beta,
        "j_alpha": ja,
        "j_beta": jb,
    }
    if args.tpr_at_fpr is not None:
        try:
            doc["tpr_at_fpr"] = tpr_at_fpr(sp, sn, args.tpr_at_fpr)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    sys.stdout.write(_dumps(doc))
    return EXIT_OK


def _grid(text: str | None, algo: str) -> list[float]:
    if text is None:
        return list(DEFAULT_DC_GRID if algo == "pauc_dc" else DEFAULT_GRID)
    try:
        grid = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad --grid {text!r}") from None
    if not grid or any(not c > 0 for c in grid):
        raise UsageError("--grid needs one or more positive values")
    return grid


def cmd_cv(args) -> int:
    data, config, _ = _prepare(args)
    grid = _grid(args.grid, config.algo)
    if args.holdout is not None:
        if not 0.0 < args.holdout < 1.0:
            raise UsageError("--holdout must lie in (0, 1)")
        folds = float(args.holdout)
    else:
        if args.folds < 2:
            raise UsageError("--folds must be at least 2")
        folds = int(args.folds)
    try:
        result = cross_validate_C(data, config, grid, folds=folds, seed=args.seed)
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise UsageError(str(exc)) from None
    doc = {
        "format": 1,
        "best_C": result.best_C,
        "table": [{"C": c, "pauc": p} for c, p in result.table],
        "algo": config.algo,
        "alpha": config.interval.alpha,
        "beta": config.interval.beta,
        "seed": args.seed,
    }
    sys.stdout.write(_dumps(doc))
    return EXIT_OK


def cmd_roc(args) -> int:
    if not args.out:
        raise UsageError("--out must not be empty")
    model, data = _model_inputs(args)
    curve = roc_curve(data.positives @ model.weights, data.negatives @ model.weights)
    _write(args.out, curve.to_csv())
    return EXIT_OK


def _train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="svmlight training file")
    p.add_argument("--algo", choices=("auc", "pauc-struct", "pauc-dc"), default="pauc-struct")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--tau", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=None, help="outer iteration cap")
    p.add_argument("--normalize", action="store_true", help="z-score features first")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paucsvm",
                                     description="Partial-AUC structural SVM training and evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model")
    _train_flags(p)
    p.add_argument("--model-out", required=True)
    p.add_argument("--report-out", default=None,
                   help="training report path (default: <model-out>.report.json)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score instances")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="AUC, partial AUC and TPR at an FPR budget")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--tpr-at-fpr", type=float, default=None)
    p.add_argument("--fpr-scale", type=float, default=None,
                   help="multiply alpha and beta before computing positions")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cv", help="choose C by held-out partial AUC")
    _train_flags(p)
    p.add_argument("--grid", default=None, help="comma-separated C values")
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--holdout", type=float, default=None, help="single holdout fraction")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("roc", help="write the ROC staircase as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_roc)
    return parser


def _setup_logging() -> None:
    level = os.environ.get("PAUC_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if level not in levels:
        log.error("ignoring unknown PAUC_LOG=%r", level)


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"paucsvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"paucsvm: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
