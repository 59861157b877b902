"""Command line entry point: ``acselect <command> [options]``.

Commands: audit, mine, select, evaluate, benchmark, release.  Exit status is
0 on success, 1 for data or runtime errors and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .adult import load_adult
from .dataset import FORMATS, BinaryDataset, DataFormatError, atomic_write_text, dumps, load
from .evaluation import benchmark, benchmark_csv, benchmark_json, cross_validate
from .miner import mine_maximal
from .privacy import audit
from .selectors import (AC_METHODS, DP_METHODS, KANON_METHODS, METHODS, dp_release,
                        dp_select_and_release, select)

INPUT_FORMATS = FORMATS + ("adult",)
RANDOMIZED = ("evaluate", "benchmark", "release")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str
    format: str = "dense-csv"
    method: str | None = None
    k: int | None = None
    epsilon: float | None = None
    num_features: int | None = None
    r: int = 20
    seed: int = 0
    output: str | None = None
    greedy_continue: bool = False
    json: bool = False
    max_results: int | None = None
    threads: int = 1
    extra: dict = field(default_factory=dict)


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="dataset file")
    common.add_argument("--format", choices=INPUT_FORMATS, default="dense-csv")
    common.add_argument("--output", help="output file (default: standard output)")
    common.add_argument("--json", action="store_true", help="JSON instead of text/CSV output")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    common.add_argument("--strict", action="store_true", help="require --seed for randomized commands")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    features = argparse.ArgumentParser(add_help=False)
    features.add_argument("--features", help="comma separated feature names (or 1-based indices)")
    features.add_argument("--selection", help="selection JSON written by 'select'")

    p = argparse.ArgumentParser(prog="acselect", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", parents=[common, features], help="AC and k-anonymity report")
    a.add_argument("--k", type=int)

    m = sub.add_parser("mine", parents=[common], help="maximal feasible feature sets")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--max-results", type=int)

    s = sub.add_parser("select", parents=[common], help="select a feature subset")
    s.add_argument("--method", choices=METHODS, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--num-features", type=int)
    s.add_argument("--r", type=int, default=20)
    s.add_argument("--greedy-continue", action="store_true")
    s.add_argument("--max-results", type=int)
    s.add_argument("--trace-csv", help="also write the selection trace as CSV")

    e = sub.add_parser("evaluate", parents=[common, features], help="cross-validated AUC")
    e.add_argument("--folds", type=int, default=5)

    b = sub.add_parser("benchmark", parents=[common], help="privacy/utility sweep")
    b.add_argument("--methods", type=_csv_list(str), required=True)
    b.add_argument("--k-list", type=_csv_list(int), default=[5, 8, 11])
    b.add_argument("--epsilon-list", type=_csv_list(float), default=[0.5, 1.0, 1.5, 2.0])
    b.add_argument("--num-features", type=int)
    b.add_argument("--folds", type=int, default=5)
    b.add_argument("--r", type=int, default=20)
    b.add_argument("--greedy-continue", action="store_true")
    b.add_argument("--full", action="store_true", help="add the full-feature baseline row")
    b.add_argument("--timings", action="store_true", help="fill the time column")

    r = sub.add_parser("release", parents=[common, features], help="DP release of a projection")
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--method", choices=DP_METHODS, help="select features privately first")
    r.add_argument("--num-features", type=int)
    r.add_argument("--output-format", choices=FORMATS, default=None)
    return p


def _config(args) -> RunConfig:
    if args.strict and args.command in RANDOMIZED + ("select",) and args.seed is None:
        if args.command != "select" or args.method in DP_METHODS:
            raise UsageError("--strict requires an explicit --seed")
    cfg = RunConfig(command=args.command, input=args.input, format=args.format,
                    method=getattr(args, "method", None), k=getattr(args, "k", None),
                    epsilon=getattr(args, "epsilon", None),
                    num_features=getattr(args, "num_features", None), r=getattr(args, "r", 20),
                    seed=0 if args.seed is None else args.seed, output=args.output,
                    greedy_continue=getattr(args, "greedy_continue", False), json=args.json,
                    max_results=getattr(args, "max_results", None), threads=max(1, args.threads))
    if cfg.k is not None and cfg.k < 1:
        raise UsageError("--k must be >= 1")
    if cfg.r < 1:
        raise UsageError("--r must be >= 1")
    if cfg.epsilon is not None and not cfg.epsilon > 0:
        raise UsageError("--epsilon must be positive")
    if cfg.num_features is not None and cfg.num_features < 1:
        raise UsageError("--num-features must be >= 1")
    if args.command == "select":
        if cfg.method in AC_METHODS + KANON_METHODS and cfg.k is None:
            raise UsageError(f"--method {cfg.method} requires --k")
        if cfg.method in DP_METHODS and (cfg.epsilon is None or cfg.num_features is None):
            raise UsageError(f"--method {cfg.method} requires --epsilon and --num-features")
    if args.command == "benchmark":
        bad = [m for m in args.methods if m not in METHODS + ("full",)]
        if bad:
            raise UsageError(f"unknown method(s) {bad}")
        if any(k < 1 for k in args.k_list) or any(not e > 0 for e in args.epsilon_list):
            raise UsageError("k values must be >= 1 and epsilons positive")
    if args.command == "release":
        if args.method and args.num_features is None:
            raise UsageError("--method requires --num-features")
        if not args.method and not (args.features or args.selection):
            raise UsageError("give --features/--selection or a DP --method")
    if getattr(args, "features", None) and getattr(args, "selection", None):
        raise UsageError("--features and --selection are mutually exclusive")
    return cfg


def _load(cfg: RunConfig) -> BinaryDataset:
    if cfg.format == "adult":
        return load_adult(cfg.input)
    return load(cfg.input, cfg.format)


def _feature_arg(data: BinaryDataset, args):
    if getattr(args, "selection", None):
        doc = json.loads(Path(args.selection).read_text())
        return data.features(doc["features"])
    if getattr(args, "features", None):
        out = []
        for tok in (t.strip() for t in args.features.split(",")):
            if not tok:
                continue
            if tok in data.feature_names:
                out.append(tok)
            elif tok.isdigit():
                out.append(int(tok) - 1)
            else:
                raise DataFormatError(f"unknown feature {tok!r}")
        return data.features(out)
    return None


def _emit(cfg: RunConfig, text: str) -> bool:
    """Write the payload; returns True when it went to standard output."""
    if cfg.output:
        atomic_write_text(cfg.output, text)
        return False
    sys.stdout.write(text)
    return True


def _summary(line: str, to_stderr: bool) -> None:
    print(line, file=sys.stderr if to_stderr else sys.stdout)


def _fmt_utility(u: dict) -> str:
    parts = []
    for key in ("ham_dist", "dist_cnt"):
        if key in u:
            parts.append(f"{key}={u[key]}({float(u[key]):.4f})")
    parts.append(f"cm_penalty={u['cm_penalty']}")
    return " ".join(parts)


def cmd_audit(cfg, args, data):
    fs = _feature_arg(data, args)
    rep = audit(data, fs, cfg.k)
    on_stdout = _emit(cfg, rep.to_json())
    _summary(f"audit n={data.n} d={len(rep.features)} dataset_ac={rep.dataset_ac} "
             f"kanonymity={rep.kanonymity}" + ("" if cfg.k is None else f" k={cfg.k} satisfied={rep.satisfied}"),
             on_stdout)
    return 0


def cmd_mine(cfg, args, data):
    start = time.perf_counter()
    coll = mine_maximal(data, cfg.k, max_results=cfg.max_results)
    on_stdout = _emit(cfg, coll.to_json(data) if cfg.json else coll.to_lines(data))
    note = " TRUNCATED" if coll.truncated else ""
    _summary(f"mine k={cfg.k} maximal_sets={len(coll)}{note} time={time.perf_counter() - start:.3f}s",
             on_stdout)
    if coll.truncated:
        print(f"warning: result cap {cfg.max_results} reached; output is incomplete", file=sys.stderr)
    return 0


def cmd_select(cfg, args, data):
    start = time.perf_counter()
    res = select(data, cfg.method, k=cfg.k, epsilon=cfg.epsilon, num_features=cfg.num_features,
                 r=cfg.r, seed=cfg.seed, greedy_continue=cfg.greedy_continue,
                 max_results=cfg.max_results)
    on_stdout = _emit(cfg, res.to_json())
    if args.trace_csv:
        atomic_write_text(args.trace_csv, res.trace_csv())
    param = f"k={cfg.k}" if cfg.method not in DP_METHODS else f"epsilon={cfg.epsilon} seed={cfg.seed}"
    _summary(f"{cfg.method} {param} sfc={res.sfc} {_fmt_utility(res.utility)} "
             f"achieved_ac={res.achieved_ac} status={res.status} time={time.perf_counter() - start:.3f}s",
             on_stdout)
    return 0


def cmd_evaluate(cfg, args, data):
    fs = _feature_arg(data, args)
    rep = cross_validate(data, fs, folds=args.folds, seed=cfg.seed)
    doc = {k: v for k, v in rep.to_dict().items() if k != "wall_time"}
    on_stdout = _emit(cfg, json.dumps(doc, indent=2) + "\n")
    _summary(f"evaluate sfc={rep.feature_count} auc={rep.auc_mean:.4f}+-{rep.auc_std:.4f} "
             f"folds={args.folds} seed={cfg.seed} time={rep.wall_time:.3f}s", on_stdout)
    return 0


def cmd_benchmark(cfg, args, data):
    start = time.perf_counter()
    reports = benchmark(data, args.methods, args.k_list, args.epsilon_list, seed=cfg.seed,
                        folds=args.folds, num_features=cfg.num_features, r=cfg.r,
                        include_full=args.full, greedy_continue=cfg.greedy_continue,
                        workers=cfg.threads)
    text = (benchmark_json if cfg.json else benchmark_csv)(reports, include_time=args.timings)
    on_stdout = _emit(cfg, text)
    failed = [r for r in reports if r.status == "FAILED"]
    for r in failed:
        print(f"FAILED {r.method} param={r.param}: {r.message}", file=sys.stderr)
    _summary(f"benchmark cells={len(reports)} failed={len(failed)} seed={cfg.seed} "
             f"time={time.perf_counter() - start:.3f}s", on_stdout)
    return 1 if failed else 0


def cmd_release(cfg, args, data):
    out_format = args.output_format or (cfg.format if cfg.format in FORMATS else "dense-csv")
    if args.method:
        res, released = dp_select_and_release(data, args.method, cfg.epsilon, cfg.num_features, seed=cfg.seed)
        what = f"{args.method} sfc={res.sfc}"
    else:
        fs = _feature_arg(data, args)
        released = dp_release(data, fs, cfg.epsilon, seed=cfg.seed)
        what = f"features={len(fs)}"
    on_stdout = _emit(cfg, dumps(released, out_format))
    _summary(f"release {what} epsilon={cfg.epsilon} rows={released.n} seed={cfg.seed}", on_stdout)
    return 0


COMMANDS = {"audit": cmd_audit, "mine": cmd_mine, "select": cmd_select, "evaluate": cmd_evaluate,
            "benchmark": cmd_benchmark, "release": cmd_release}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"acselect: error: {exc}", file=sys.stderr)
        return 2
    try:
        data = _load(cfg)
        return COMMANDS[cfg.command](cfg, args, data)
    except (DataFormatError, OSError, ValueError, KeyError, IndexError) as exc:
        print(f"acselect: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
