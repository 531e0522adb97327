"""Sweep orchestration: harvest every config, score, rank, and correlate."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .harness import HarvestResult, ModelConfig, harvest
from .metrics import CorrelationResult, auc, empirical_distribution, expressivity, spearman

DEFAULT_TRIALS = 10_000


class RunError(RuntimeError):
    """A config failed; carries its label so the CLI can report it."""

    def __init__(self, label: str, cause: Exception):
        super().__init__(f"config {label!r} failed: {cause}")
        self.label = label
        self.cause = cause


@dataclass(frozen=True)
class RunSpec:
    configs: tuple[ModelConfig, ...]
    trials: int = DEFAULT_TRIALS
    input_bits: int = 5
    master_seed: int = 0
    top_k: int = 1
    output_path: str | None = None

    def __post_init__(self):
        labels = [c.label for c in self.configs]
        if not labels:
            raise ValueError("run needs at least one config")
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        if dupes:
            raise ValueError(f"duplicate config labels: {dupes}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.top_k <= len(labels):
            raise ValueError(f"top_k must lie in [1, {len(labels)}], got {self.top_k}")
        if any(c.input_bits != self.input_bits for c in self.configs):
            raise ValueError("every config must use the run's input_bits")

    @classmethod
    def from_json(cls, doc: dict, **overrides) -> RunSpec:
        """Build from the config-file document; non-None ``overrides`` win."""
        settings = {
            "trials": doc.get("trials", DEFAULT_TRIALS),
            "input_bits": doc.get("input_bits", 5),
            "master_seed": doc.get("seed", 0),
            "top_k": doc.get("top_k", 1),
        }
        settings.update({k: v for k, v in overrides.items() if v is not None})
        raw_configs = doc.get("configs")
        if not raw_configs:
            raise ValueError("config file has no 'configs' list")
        configs = []
        for raw in raw_configs:
            raw = dict(raw)
            raw.setdefault("input_bits", settings["input_bits"])
            if overrides.get("input_bits") is not None:
                raw["input_bits"] = overrides["input_bits"]
            configs.append(ModelConfig.from_dict(raw))
        return cls(configs=tuple(configs), **settings)


def _histogram(result: HarvestResult) -> list[list[float]]:
    dist = empirical_distribution(result.scores)
    return [[x, p] for x, p in zip(dist.support, dist.mass)]


def summarize(results: list[HarvestResult], spec: RunSpec) -> dict:
    """Score harvested configs against one shared integration range and rank them."""
    c_min = float(spec.input_bits)
    c_max = max(max(r.scores) for r in results)
    rows = []
    for r in results:
        dist = empirical_distribution(r.scores)
        rows.append(
            {
                "label": r.config.label,
                "auc": auc(dist, c_min, c_max),
                "exp": expressivity(r.functions),
                "parameter_count": r.config.sam_parameter_count(),
                "config": r.config.to_dict(),
                "histogram": _histogram(r),
            }
        )
    rows.sort(key=lambda row: (-row["auc"], row["label"]))
    ordering = [row["label"] for row in rows]
    return {
        "trials": spec.trials,
        "input_bits": spec.input_bits,
        "seed": spec.master_seed,
        "top_k": spec.top_k,
        "c_min": c_min,
        "c_max": c_max,
        "ordering": ordering,
        "selected": ordering[: spec.top_k],
        "configs": rows,
    }


def run(spec: RunSpec, threads: int = 1) -> dict:
    """Harvest every config and return the ranked report.

    ``threads`` only changes how trials are spread over worker processes; the
    report is identical for any value. ``0`` means one worker per CPU.
    """
    workers = (os.cpu_count() or 1) if threads == 0 else threads
    results = []
    for config in spec.configs:
        try:
            results.append(harvest(config, spec.trials, spec.master_seed, workers))
        except Exception as exc:
            raise RunError(config.label, exc) from exc
    return summarize(results, spec)


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "auc", "exp", "params"])
    for row in report["configs"]:
        writer.writerow([row["label"], repr(row["auc"]), repr(row["exp"]), row["parameter_count"]])
    return buf.getvalue()


def read_performance_csv(text: str) -> dict[str, dict[str, float]]:
    """Parse ``label,metric1,metric2,...`` into ``{label: {metric: value}}``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("performance CSV is empty") from None
    if not header or header[0].strip() != "label" or len(header) < 2:
        raise ValueError("performance CSV header must be 'label,metric1,...'")
    metrics = [h.strip() for h in header[1:]]
    table = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        label = row[0].strip()
        if label in table:
            raise ValueError(f"line {lineno}: duplicate label {label!r}")
        table[label] = {m: float(v) for m, v in zip(metrics, row[1:])}
    return table


def correlate(report: dict, performance: dict[str, dict[str, float]]) -> dict[str, dict[str, CorrelationResult]]:
    """Spearman correlation of AUC and EXP against every performance column."""
    by_label = {row["label"]: row for row in report["configs"]}
    unknown = sorted(set(performance) - set(by_label))
    if unknown:
        raise ValueError(f"performance labels missing from report: {unknown}")
    labels = sorted(performance)
    if len(labels) < 3:
        raise ValueError(f"need at least 3 overlapping labels, got {len(labels)}")
    columns = list(next(iter(performance.values())))
    out = {}
    for score_key, name in (("auc", "AUC"), ("exp", "EXP")):
        xs = [by_label[lab][score_key] for lab in labels]
        out[name] = {col: spearman(xs, [performance[lab][col] for lab in labels]) for col in columns}
    return out


def correlation_json(matrix: dict[str, dict[str, CorrelationResult]]) -> str:
    doc = {row: {col: res.to_dict() for col, res in cols.items()} for row, cols in matrix.items()}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))

