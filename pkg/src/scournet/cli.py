"""Command-line interface.

Subcommands: ``synth`` (generate a synthetic dataset), ``summarize``
(per-column statistics), ``train`` (split, fit, evaluate, export),
``compare`` (deep net vs classical baseline side by side) and
``gradcheck`` (finite-difference verification of backpropagation).

Every run is reproducible: flags plus seed fully determine all written
artifacts byte for byte.  Randomness comes from numpy's seeded PCG64
generator.  The default seed is 42, overridable through the
``SCOURNET_SEED`` environment variable; explicit flags win over the
environment.

Exit codes: 0 success, 1 validation/config error, 2 I/O error,
3 numerical divergence.
"""

import argparse
import dataclasses
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .data import COLUMNS, load_csv, summarize, split, synth_generate, write_csv
from .errors import ConfigError, NumericError, ScourNetError
from .metrics import MetricsReport
from .model_io import save_model
from .optim import AdamConfig, MomentumConfig
from .training import (PRESET_NAMES, TrainConfig, evaluate, gradient_check,
                       preset_config, train)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


def default_seed() -> int:
    raw = os.environ.get("SCOURNET_SEED", "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"SCOURNET_SEED must be an integer, got {raw!r}") from None
    return 42


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; bad flags are config errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _emit(args, record: dict, human: str) -> None:
    if args.format == "json-lines":
        print(json.dumps(record, sort_keys=True))
    else:
        print(human)


def _metrics_lines(name: str, rep: MetricsReport) -> tuple[dict, str]:
    record = {"record": "metrics", "model": name, **rep.to_dict()}
    cc = "undefined" if rep.cc is None else f"{rep.cc:.4f}"
    human = (f"{name:12s} rmse_m={rep.rmse:.4f} mae_m={rep.mae:.4f} "
             f"cc={cc} n={rep.n}")
    return record, human


def write_manifest(path, entries: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={value}\n")


def _config_manifest_entries(cfg: TrainConfig) -> dict:
    entries = {
        "config.layers": ";".join(
            f"{s.input_width}x{s.output_width}:{s.activation.value}:{s.dropout_rate!r}"
            for s in cfg.layer_specs),
        "config.init": cfg.init.kind.value,
        "config.uniform_halfwidth": repr(cfg.init.uniform_halfwidth),
        "config.batch_size": "full" if cfg.batch_size is None else cfg.batch_size,
        "config.epochs": cfg.epochs,
        "config.loss": cfg.loss,
        "config.seed": cfg.seed,
        "config.shuffle_each_epoch": cfg.shuffle_each_epoch,
        "config.history_every": cfg.history_every,
    }
    upd = cfg.updater
    if isinstance(upd, AdamConfig):
        entries["config.updater"] = "adam"
        entries["config.adam_alpha"] = repr(upd.alpha)
        entries["config.adam_beta1"] = repr(upd.beta1)
        entries["config.adam_beta2"] = repr(upd.beta2)
        entries["config.adam_epsilon"] = repr(upd.epsilon)
    else:
        entries["config.updater"] = "momentum"
        entries["config.learning_rate"] = repr(upd.learning_rate)
        entries["config.momentum"] = repr(upd.momentum)
    return entries


def write_predictions_csv(path, pairs) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("index,actual_m,predicted_m\n")
        for i, pair in enumerate(pairs):
            fh.write(f"{i},{pair.actual_m!r},{pair.predicted_m!r}\n")


def write_history_csv(path, history) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("epoch,train_loss,val_rmse_m\n")
        for entry in history.entries:
            val = "" if entry.val_rmse_m is None else repr(entry.val_rmse_m)
            fh.write(f"{entry.epoch},{entry.train_loss!r},{val}\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_synth(args) -> int:
    ds = synth_generate(args.n, args.seed)
    out = Path(args.out)
    started = _utc_now()
    write_csv(ds, out)
    write_manifest(out.with_name(out.name + ".manifest"), {
        "command": "synth", "version": __version__, "n": args.n, "seed": args.seed,
        "out": out, "started_utc": started, "finished_utc": _utc_now(),
    })
    _emit(args, {"record": "synth", "n": len(ds), "seed": args.seed, "out": str(out)},
          f"wrote {len(ds)} synthetic records to {out}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    stats = summarize(load_csv(args.data))
    if args.format == "json-lines":
        for col in stats.columns:
            print(json.dumps({"record": "feature_stats", "column": col.name,
                              "min": col.min, "max": col.max, "mean": col.mean,
                              "std": col.std, "std_kind": stats.std_kind},
                             sort_keys=True))
        return EXIT_OK
    print(f"{'column':8s} {'min':>10s} {'max':>10s} {'mean':>10s} {'st.dev.':>10s}")
    for col in stats.columns:
        print(f"{col.name:8s} {col.min:10.3f} {col.max:10.3f} "
              f"{col.mean:10.3f} {col.std:10.3f}")
    return EXIT_OK


def _resolve_train_config(args) -> TrainConfig:
    cfg = preset_config(args.preset, seed=args.seed)
    if args.hidden_widths is not None:
        try:
            widths = tuple(int(w) for w in args.hidden_widths.split(",") if w.strip())
        except ValueError:
            raise ConfigError(f"--hidden-widths must be comma-separated integers, "
                              f"got {args.hidden_widths!r}") from None
        if not widths:
            raise ConfigError("--hidden-widths must name at least one layer")
    else:
        widths = tuple(s.output_width for s in cfg.layer_specs[:-1])
    from .training import _chain_specs

    activation = args.hidden_activation or cfg.layer_specs[0].activation.value
    dropout = cfg.layer_specs[0].dropout_rate if args.dropout_rate is None else args.dropout_rate
    specs = _chain_specs(7, widths, activation, dropout)

    init = cfg.init
    if args.init is not None or args.uniform_halfwidth is not None:
        from .initializers import InitScheme

        init = InitScheme(args.init or cfg.init.kind,
                          cfg.init.uniform_halfwidth if args.uniform_halfwidth is None
                          else args.uniform_halfwidth)

    updater = cfg.updater
    updater_kind = args.updater or ("adam" if isinstance(updater, AdamConfig) else "momentum")
    if updater_kind == "adam":
        base = updater if isinstance(updater, AdamConfig) else AdamConfig()
        updater = AdamConfig(
            base.alpha if args.adam_alpha is None else args.adam_alpha,
            base.beta1 if args.adam_beta1 is None else args.adam_beta1,
            base.beta2 if args.adam_beta2 is None else args.adam_beta2,
            base.epsilon if args.adam_epsilon is None else args.adam_epsilon)
    else:
        base = updater if isinstance(updater, MomentumConfig) else MomentumConfig()
        updater = MomentumConfig(
            base.learning_rate if args.learning_rate is None else args.learning_rate,
            base.momentum if args.momentum is None else args.momentum)

    batch = cfg.batch_size
    if args.batch_size is not None:
        batch = None if args.batch_size == "full" else int(args.batch_size)

    return dataclasses.replace(
        cfg, layer_specs=specs, init=init, updater=updater, batch_size=batch,
        epochs=cfg.epochs if args.epochs is None else args.epochs,
        shuffle_each_epoch=not args.no_shuffle,
        history_every=cfg.history_every if args.history_every is None else args.history_every)


def _train_once(cfg: TrainConfig, data_path, split_seed: int, n_train: int):
    ds = load_csv(data_path)
    train_set, test_set = split(ds, n_train, split_seed)
    model, history = train(cfg, train_set, validation_set=test_set)
    rep, pairs = evaluate(model, test_set)
    return model, history, rep, pairs


def cmd_train(args) -> int:
    cfg = _resolve_train_config(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    out_model = Path(args.out_model) if args.out_model else outdir / "model.txt"
    out_history = Path(args.out_history) if args.out_history else outdir / "history.csv"
    out_pred = Path(args.out_predictions) if args.out_predictions else outdir / "predictions.csv"
    out_manifest = Path(args.out_manifest) if args.out_manifest else outdir / "manifest.txt"

    started = _utc_now()
    model, history, rep, pairs = _train_once(cfg, args.data, args.split_seed, args.n_train)

    save_model(out_model, model.specs, model.params, model.standardizer)
    write_history_csv(out_history, history)
    write_predictions_csv(out_pred, pairs)
    manifest = {
        "command": "train", "version": __version__, "preset": args.preset,
        "data": args.data, "split_seed": args.split_seed, "n_train": args.n_train,
        "total_steps": history.total_steps,
        "out_model": out_model, "out_history": out_history, "out_predictions": out_pred,
        "started_utc": started, "finished_utc": _utc_now(),
    }
    manifest.update(_config_manifest_entries(cfg))
    write_manifest(out_manifest, manifest)

    record, human = _metrics_lines(args.preset, rep)
    _emit(args, record, human)
    return EXIT_OK


def cmd_compare(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    started = _utc_now()

    results = {}
    for name in PRESET_NAMES:
        cfg = preset_config(name, seed=args.seed)
        model, history, rep, pairs = _train_once(cfg, args.data, args.seed, args.n_train)
        write_predictions_csv(outdir / f"{name}_predictions.csv", pairs)
        results[name] = rep

    write_manifest(outdir / "compare_manifest.txt", {
        "command": "compare", "version": __version__, "data": args.data,
        "seed": args.seed, "n_train": args.n_train,
        "out_dnn_predictions": outdir / "dnn_paper_predictions.csv",
        "out_bpnn_predictions": outdir / "bpnn_paper_predictions.csv",
        "started_utc": started, "finished_utc": _utc_now(),
    })

    if args.format == "json-lines":
        for name, rep in results.items():
            record, _ = _metrics_lines(name, rep)
            print(json.dumps(record, sort_keys=True))
        return EXIT_OK
    print(f"{'model':12s} {'rmse_m':>8s} {'mae_m':>8s} {'cc':>8s}")
    for name, rep in results.items():
        print(f"{name:12s} {rep.rmse:8.4f} {rep.mae:8.4f} {rep.cc:8.4f}")
    return EXIT_OK


def cmd_gradcheck(args) -> int:
    rep = gradient_check(hidden_activation=args.activation, seed=args.seed,
                         corrupt=args.corrupt_backward)
    if args.format == "json-lines":
        print(json.dumps({
            "record": "gradcheck", "activation": rep.activation,
            "max_rel_error": rep.max_rel_error,
            "max_abs_error_small": rep.max_abs_error_small,
            "passed": rep.passed,
            "layers": [{"layer": t.layer, "tensor": t.tensor,
                        "max_rel_error": t.max_rel_error} for t in rep.tensors],
        }, sort_keys=True))
    else:
        print(f"gradient check ({rep.activation}, widths {'x'.join(map(str, rep.widths))})")
        for t in rep.tensors:
            print(f"  layer {t.layer} {t.tensor:8s} max rel error {t.max_rel_error:.3e}")
        print(f"max relative error {rep.max_rel_error:.3e} "
              f"(small-entry abs {rep.max_abs_error_small:.3e}) "
              f"-> {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_INVALID


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="scournet",
                     description="Neural-network scour depth prediction toolkit")
    parser.add_argument("--version", action="version", version=f"scournet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    seed = default_seed()

    fmt = {"choices": ("human", "json-lines"), "default": "human",
           "help": "output as a table or one JSON record per line"}

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--n", type=int, required=True, help="number of records (>= 2)")
    p.add_argument("--seed", type=int, default=seed,
                   help=f"generator seed (default {seed}; env SCOURNET_SEED)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--format", **fmt)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("summarize", help="per-column min/max/mean/std of a dataset")
    p.add_argument("--data", required=True, help=f"CSV with header {','.join(COLUMNS)}")
    p.add_argument("--format", **fmt)
    p.set_defaults(fn=cmd_summarize)

    p = sub.add_parser("train", help="split, train, evaluate and export artifacts")
    p.add_argument("--data", required=True)
    p.add_argument("--preset", choices=PRESET_NAMES, default="dnn_paper",
                   help="named reference configuration to start from")
    p.add_argument("--seed", type=int, default=seed,
                   help=f"training seed (default {seed}; env SCOURNET_SEED)")
    p.add_argument("--split-seed", type=int, default=seed, help="train/test shuffle seed")
    p.add_argument("--n-train", type=int, default=154, help="training records (default 154)")
    p.add_argument("--outdir", default=".", help="directory for default output names")
    p.add_argument("--out-model", help="model file path (default <outdir>/model.txt)")
    p.add_argument("--out-history", help="history CSV path (default <outdir>/history.csv)")
    p.add_argument("--out-predictions",
                   help="predictions CSV path (default <outdir>/predictions.csv)")
    p.add_argument("--out-manifest", help="manifest path (default <outdir>/manifest.txt)")
    p.add_argument("--hidden-widths", help="comma-separated hidden layer widths")
    p.add_argument("--hidden-activation", choices=("relu", "sigmoid", "tanh", "identity"))
    p.add_argument("--dropout-rate", type=float, help="hidden-layer dropout rate in [0, 1)")
    p.add_argument("--init", choices=("xavier_gaussian", "uniform_random"))
    p.add_argument("--uniform-halfwidth", type=float)
    p.add_argument("--updater", choices=("adam", "momentum"))
    p.add_argument("--adam-alpha", type=float)
    p.add_argument("--adam-beta1", type=float)
    p.add_argument("--adam-beta2", type=float)
    p.add_argument("--adam-epsilon", type=float)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--batch-size", help="samples per update, or 'full'")
    p.add_argument("--epochs", type=int)
    p.add_argument("--no-shuffle", action="store_true",
                   help="keep the training order fixed across epochs")
    p.add_argument("--history-every", type=int)
    p.add_argument("--format", **fmt)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("compare", help="train both presets on one split, report side by side")
    p.add_argument("--data", required=True)
    p.add_argument("--seed", type=int, default=seed,
                   help=f"split and training seed (default {seed}; env SCOURNET_SEED)")
    p.add_argument("--n-train", type=int, default=154)
    p.add_argument("--outdir", default=".", help="directory for prediction exports")
    p.add_argument("--format", **fmt)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("gradcheck", help="verify backpropagation against finite differences")
    p.add_argument("--activation", choices=("sigmoid", "relu", "tanh", "identity"),
                   default="sigmoid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt-backward", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--format", **fmt)
    p.set_defaults(fn=cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.fn(args)
    except NumericError as exc:
        print(f"scournet: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ScourNetError, ValueError) as exc:
        print(f"scournet: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"scournet: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
