"""Command-line entry point.

Subcommands::

    biasbench run --config sweep.json [--trials N] [--bits N] [--seed N]
                  [--top-k K] [--out PATH] [--threads N] [--format json|csv]
    biasbench lz 0110...
    biasbench harvest --config one.json [--label L] [--trials N] [--seed N]
    biasbench correlate --report report.json --performance perf.csv
    biasbench variants

Failures exit non-zero and print a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline
from .harness import ModelConfig, harvest
from .lzkit import lz_complexity
from .qsam import VARIANT_TABLES


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def cmd_run(args) -> None:
    spec = pipeline.RunSpec.from_json(
        _read_json(args.config),
        trials=args.trials,
        input_bits=args.bits,
        master_seed=args.seed,
        top_k=args.top_k,
    )
    report = pipeline.run(spec, threads=args.threads)
    text = pipeline.report_csv(report) if args.format == "csv" else pipeline.report_json(report)
    _emit(text, args.out)


def cmd_lz(args) -> None:
    bits = args.bits if args.bits is not None else sys.stdin.read()
    print(f"{lz_complexity(bits.strip()):.6f}")


def cmd_harvest(args) -> None:
    doc = _read_json(args.config)
    if "configs" in doc:
        raws = [c for c in doc["configs"] if args.label is None or c.get("label") == args.label]
        if len(raws) != 1:
            raise ValueError("harvest needs exactly one config; pass --label to pick one")
        raw = dict(raws[0])
        raw.setdefault("input_bits", doc.get("input_bits", 5))
        trials = doc.get("trials", pipeline.DEFAULT_TRIALS)
        seed = doc.get("seed", 0)
    else:
        raw, trials, seed = doc, pipeline.DEFAULT_TRIALS, 0
    if args.bits is not None:
        raw["input_bits"] = args.bits
    config = ModelConfig.from_dict(raw)
    result = harvest(
        config,
        args.trials if args.trials is not None else trials,
        args.seed if args.seed is not None else seed,
        workers=args.threads,
    )
    _emit(json.dumps(result.to_record(), indent=2) + "\n", args.out)


def cmd_correlate(args) -> None:
    report = pipeline.load_report(args.report)
    table = pipeline.read_performance_csv(Path(args.performance).read_text(encoding="utf-8"))
    _emit(pipeline.correlation_json(pipeline.correlate(report, table)), args.out)


def cmd_variants(args) -> None:
    doc = {fam.value: [v.to_dict() for v in rows.values()] for fam, rows in VARIANT_TABLES.items()}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)


def _threads(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("threads must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biasbench", description="Training-free simplicity-bias scoring of model configs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="harvest, score and rank every config in a sweep file")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--out")
    p.add_argument("--threads", type=_threads, default=1, help="worker processes; 0 = one per CPU")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lz", help="LZ complexity of one 0/1 string (reads stdin if omitted)")
    p.add_argument("bits", nargs="?")
    p.set_defaults(func=cmd_lz)

    p = sub.add_parser("harvest", help="dump the sampled functions of one config")
    p.add_argument("--config", required=True)
    p.add_argument("--label")
    p.add_argument("--trials", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=_threads, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("correlate", help="Spearman of AUC/EXP against measured performance")
    p.add_argument("--report", required=True)
    p.add_argument("--performance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("variants", help="print the quantum self-attention variant tables")
    p.add_argument("--out")
    p.set_defaults(func=cmd_variants)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except pipeline.RunError as exc:
        error = {"error": type(exc.cause).__name__, "label": exc.label, "message": str(exc.cause)}
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
    else:
        return 0
    sys.stderr.write(json.dumps(error) + "\n")
    return 1


if __name__ == "__main__":
    sys.exit(main())
