import json

import pytest

from biasbench.harness import ModelConfig
from biasbench.pipeline import (
    RunError,
    RunSpec,
    correlate,
    read_performance_csv,
    report_csv,
    report_json,
    run,
)


def spec(trials=8, **kw):
    configs = (
        ModelConfig(label="flat", d_model=4, input_bits=5, init="Z"),
        ModelConfig(label="normal", d_model=4, input_bits=5, init="N"),
        ModelConfig(label="xavier", d_model=4, input_bits=5, init="X"),
    )
    return RunSpec(configs=configs, trials=trials, input_bits=5, master_seed=7, **kw)


def test_constant_config_scores():
    report = run(spec())
    rows = {r["label"]: r for r in report["configs"]}
    assert report["c_min"] == 5.0
    assert rows["flat"]["auc"] == pytest.approx(report["c_max"] - report["c_min"], abs=1e-12)
    assert rows["flat"]["exp"] == 1 / 8
    assert report["ordering"][0] == "flat"
    assert report["selected"] == ["flat"]


def test_ordering_is_descending_auc():
    report = run(spec(top_k=2))
    aucs = [r["auc"] for r in report["configs"]]
    assert aucs == sorted(aucs, reverse=True)
    assert report["selected"] == report["ordering"][:2]


def test_reports_are_byte_identical():
    assert report_json(run(spec())) == report_json(run(spec()))


def test_csv_report_layout():
    lines = report_csv(run(spec())).splitlines()
    assert lines[0] == "label,auc,exp,params"
    assert len(lines) == 4
    assert lines[1].startswith("flat,")


def test_spec_validation():
    base = spec()
    with pytest.raises(ValueError, match="duplicate"):
        RunSpec(configs=base.configs + base.configs[:1], input_bits=5)
    with pytest.raises(ValueError):
        RunSpec(configs=base.configs, input_bits=5, top_k=4)
    with pytest.raises(ValueError):
        RunSpec(configs=(), input_bits=5)
    with pytest.raises(ValueError):
        RunSpec(configs=base.configs, input_bits=4)


def test_from_json_applies_overrides():
    doc = {"trials": 50, "seed": 3, "configs": [{"label": "a", "d_model": 4}, {"label": "b", "d_model": 4}]}
    s = RunSpec.from_json(doc, trials=4, input_bits=3)
    assert s.trials == 4 and s.master_seed == 3
    assert all(c.input_bits == 3 for c in s.configs)
    with pytest.raises(ValueError, match="configs"):
        RunSpec.from_json({"trials": 3})


def test_run_error_carries_label(monkeypatch):
    import biasbench.pipeline as pipeline

    def boom(config, *a, **k):
        raise ValueError("bad")

    monkeypatch.setattr(pipeline, "harvest", boom)
    with pytest.raises(RunError) as info:
        run(spec())
    assert info.value.label == "flat"


def _report(aucs, exps):
    return {"configs": [{"label": k, "auc": aucs[k], "exp": exps[k]} for k in aucs]}


def test_correlate_signs():
    aucs = {"a": 1.0, "b": 2.0, "c": 3.0, "d": 4.0}
    exps = {"a": 0.4, "b": 0.3, "c": 0.2, "d": 0.1}
    table = {k: {"acc": v, "neg": -v} for k, v in aucs.items()}
    m = correlate(_report(aucs, exps), table)
    assert m["AUC"]["acc"].rho == 1.0
    assert m["AUC"]["neg"].rho == -1.0
    assert m["EXP"]["acc"].rho == -1.0
    assert m["AUC"]["acc"].n == 4


def test_correlate_input_checks():
    aucs = {"a": 1.0, "b": 2.0, "c": 3.0}
    report = _report(aucs, aucs)
    with pytest.raises(ValueError, match="at least 3"):
        correlate(report, {"a": {"m": 1.0}, "b": {"m": 2.0}})
    with pytest.raises(ValueError, match="missing"):
        correlate(report, {"a": {"m": 1.0}, "b": {"m": 2.0}, "z": {"m": 0.0}})


def test_performance_csv_parsing():
    table = read_performance_csv("label,acc,bleu\na,0.5,10\nb,0.7,12\n")
    assert table == {"a": {"acc": 0.5, "bleu": 10.0}, "b": {"acc": 0.7, "bleu": 12.0}}
    with pytest.raises(ValueError, match="duplicate"):
        read_performance_csv("label,acc\na,1\na,2\n")
    with pytest.raises(ValueError, match="header"):
        read_performance_csv("name,acc\na,1\n")


def test_report_json_is_sorted_and_parseable():
    doc = json.loads(report_json(run(spec(trials=3))))
    assert set(doc) == {"trials", "input_bits", "seed", "top_k", "c_min", "c_max", "ordering", "selected", "configs"}
