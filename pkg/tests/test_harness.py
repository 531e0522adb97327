import numpy as np
import pytest

from biasbench.harness import (
    Architecture,
    ModelConfig,
    boolean_function,
    build_boolean_classifier,
    enumerate_inputs,
    functions_from_hex,
    harvest,
    trial_rng,
)


def small(label="m", **kw):
    base = dict(label=label, d_model=4, input_bits=3, qubits=2)
    base.update(kw)
    return ModelConfig(**base)


def test_enumeration_order():
    np.testing.assert_array_equal(enumerate_inputs(2), [[0, 0], [0, 1], [1, 0], [1, 1]])


def test_first_bit_sentinel_function():
    assert boolean_function(lambda bits: bits[:, 0], 3) == "00001111"
    assert boolean_function(lambda bits: bits[:, -1], 3) == "01010101"


@pytest.mark.parametrize("arch", list(Architecture))
def test_outputs_are_bits(arch):
    model = build_boolean_classifier(small(architecture=arch), np.random.default_rng(0))
    out = model(enumerate_inputs(3))
    assert out.shape == (8,)
    assert set(np.unique(out)) <= {0, 1}


@pytest.mark.parametrize(
    "arch,kind",
    [
        (Architecture.ENCODER_CLASSIFIER, "Classical"),
        (Architecture.DECODER_CORE, "Canonical"),
        (Architecture.DECODER_CORE, "V4"),
        (Architecture.SAM_GAN_GENERATOR_CORE, "V2"),
    ],
)
def test_zero_init_gives_constant_zero(arch, kind):
    config = small(architecture=arch, sam_kind=kind, init="Z", input_bits=5)
    model = build_boolean_classifier(config, np.random.default_rng(0))
    assert boolean_function(model, 5) == "0" * 32


def test_quantum_block_runs_batched_and_single():
    config = small(architecture=Architecture.DECODER_CORE, sam_kind="V1", blocks=2)
    model = build_boolean_classifier(config, np.random.default_rng(4))
    inputs = enumerate_inputs(3)
    batched = model.logits(inputs)
    single = np.array([model.logits(row) for row in inputs])
    np.testing.assert_allclose(batched, single, atol=1e-12)


def test_trial_rng_is_keyed():
    a = trial_rng(1, "x", 0).random(4)
    np.testing.assert_array_equal(a, trial_rng(1, "x", 0).random(4))
    assert not np.array_equal(a, trial_rng(1, "y", 0).random(4))
    assert not np.array_equal(a, trial_rng(1, "x", 1).random(4))
    assert not np.array_equal(a, trial_rng(2, "x", 0).random(4))


def test_harvest_determinism_and_worker_independence():
    config = small(label="det", input_bits=5)
    one = harvest(config, 12, master_seed=5)
    again = harvest(config, 12, master_seed=5)
    two = harvest(config, 12, master_seed=5, workers=2)
    assert one.functions == again.functions == two.functions
    assert one.scores == two.scores
    assert all(len(f) == 32 for f in one.functions)


def test_harvest_prefix_stability():
    config = small(label="prefix")
    assert harvest(config, 10, 3).functions[:6] == harvest(config, 6, 3).functions


def test_hex_record_round_trip():
    result = harvest(small(label="hex", input_bits=5), 5, 0)
    record = result.to_record()
    assert all(len(h) == 8 for h in record["functions"])
    assert functions_from_hex(record) == list(result.functions)
    assert record["T"] == 5 and record["n"] == 5


def test_parameter_counts_by_hand():
    assert small(d_model=6).sam_parameter_count() == 3 * 36
    assert small(d_model=6, blocks=3).sam_parameter_count() == 3 * 3 * 36
    # angle encoding: 4 qubits, AllZ values match d_model, no projection
    sam = small(architecture=Architecture.SAM_GAN_GENERATOR_CORE, sam_kind="V1")
    assert sam.sam_parameter_count() == 6 * 4
    # feature map on 2 qubits, AllZ values (2) projected to d_model 4
    fm = small(architecture=Architecture.DECODER_CORE, sam_kind="Canonical", ansatz_layers=2)
    assert fm.sam_parameter_count() == 6 * 2 * 2 + 2 * 4
    # amplitude on 3 qubits: 8 basis probabilities projected to d_model 4
    amp = small(architecture=Architecture.DECODER_CORE, sam_kind="V1", qubits=3)
    assert amp.sam_parameter_count() == 6 * 3 + 8 * 4
    model = build_boolean_classifier(amp, np.random.default_rng(0))
    assert model.blocks[0].sam.count() == amp.sam_parameter_count()


def test_invalid_configs_rejected():
    with pytest.raises(ValueError, match="allowed"):
        small(architecture=Architecture.SAM_GAN_GENERATOR_CORE, sam_kind="V4")
    with pytest.raises(ValueError, match="multiple of 2"):
        small(architecture=Architecture.DECODER_CORE, sam_kind="Canonical", d_model=6, qubits=2)
    with pytest.raises(ValueError, match="only apply"):
        small(encoding="Angle")
    with pytest.raises(ValueError):
        small(input_bits=9)
    with pytest.raises(ValueError):
        small(d_model=5)
    with pytest.raises(ValueError, match="unknown config keys"):
        ModelConfig.from_dict({"label": "a", "depth": 2})


def test_config_dict_round_trip():
    config = small(architecture=Architecture.DECODER_CORE, sam_kind="V3", init="XB")
    assert ModelConfig.from_dict(config.to_dict()) == config
