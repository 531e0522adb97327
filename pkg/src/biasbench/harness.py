"""Boolean-classifier versions of transformer stacks and function harvesting.

A candidate architecture is reduced to a map from ``n`` input bits to one
output bit: each bit is a token from a two-symbol vocabulary, the sequence goes
through ``blocks`` unmasked transformer blocks (self-attention, residual,
layer norm, feed-forward, residual, layer norm), and a single linear node reads
out the sign. Sampling fresh parameters ``T`` times and evaluating all ``2**n``
inputs gives ``T`` Boolean functions.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from . import qsam
from .lzkit import lz_complexity
from .nnblocks import (
    InitKind,
    InitScheme,
    classical_attention,
    ffn,
    init_matrix,
    layer_norm,
    positional_encoding,
)

MIN_BITS, MAX_BITS = 2, 8
CLASSICAL = "Classical"


class Architecture(str, Enum):
    ENCODER_CLASSIFIER = "EncoderClassifier"
    DECODER_CORE = "DecoderCore"
    SAM_GAN_GENERATOR_CORE = "SamGanGeneratorCore"

    @property
    def family(self) -> qsam.Family:
        if self is Architecture.SAM_GAN_GENERATOR_CORE:
            return qsam.Family.SAM_GAN
        return qsam.Family.ENCODER_DECODER


@dataclass(frozen=True)
class ModelConfig:
    """One candidate architecture.

    ``qubits`` sets the register for feature-map and amplitude encodings; angle
    encoding always uses one qubit per model feature. ``ansatz_layers`` is the
    number of YZ circular blocks per circuit and ``ffn_dim`` defaults to
    ``4 * d_model``.
    """

    label: str
    architecture: Architecture = Architecture.ENCODER_CLASSIFIER
    sam_kind: str = CLASSICAL
    init: InitKind = InitKind.XAVIER
    blocks: int = 1
    d_model: int = 12
    input_bits: int = 5
    qubits: int | None = 6
    ansatz_layers: int = 1
    ffn_dim: int | None = None
    encoding: str | None = None
    measurement: str | None = None
    attention: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "architecture", Architecture(self.architecture))
        object.__setattr__(self, "init", InitKind(self.init))
        if not self.label:
            raise ValueError("config label must be non-empty")
        if self.blocks < 1:
            raise ValueError(f"{self.label}: blocks must be >= 1")
        if self.d_model < 2 or self.d_model % 2:
            raise ValueError(f"{self.label}: d_model must be even and >= 2 for sinusoidal positions")
        if not MIN_BITS <= self.input_bits <= MAX_BITS:
            raise ValueError(f"{self.label}: input_bits must lie in [{MIN_BITS}, {MAX_BITS}]")
        if self.ansatz_layers < 1:
            raise ValueError(f"{self.label}: ansatz_layers must be >= 1")
        if self.is_quantum:
            try:
                qsam.register_size(self.variant, self.d_model, self.qubits)
            except ValueError as exc:
                raise ValueError(f"{self.label}: {exc}") from None
        elif any(v is not None for v in (self.encoding, self.measurement, self.attention)):
            raise ValueError(f"{self.label}: encoding/measurement/attention only apply to quantum variants")

    @property
    def is_quantum(self) -> bool:
        return self.sam_kind != CLASSICAL

    @property
    def variant(self) -> qsam.QsamVariant:
        if not self.is_quantum:
            raise ValueError(f"{self.label}: classical config has no quantum variant")
        try:
            return qsam.get_variant(
                self.architecture.family,
                self.sam_kind,
                encoding=self.encoding,
                value_measurement=self.measurement,
                attention=self.attention,
            )
        except ValueError as exc:
            raise ValueError(f"{self.label} ({self.architecture.value}): {exc}; also allowed: {CLASSICAL}") from None

    @property
    def hidden_dim(self) -> int:
        return self.ffn_dim or 4 * self.d_model

    def sam_parameter_count(self) -> int:
        """Parameters in the self-attention modules, summed over blocks."""
        if not self.is_quantum:
            per_block = 3 * self.d_model * self.d_model
        else:
            variant = self.variant
            k = qsam.register_size(variant, self.d_model, self.qubits)
            per_block = 3 * 2 * k * self.ansatz_layers
            d_value = qsam.feature_dim(variant.value_measurement, k)
            if d_value != self.d_model:
                per_block += d_value * self.d_model
        return per_block * self.blocks

    def to_dict(self) -> dict:
        out = asdict(self)
        out["architecture"] = self.architecture.value
        out["init"] = self.init.value
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> ModelConfig:
        known = set(cls.__dataclass_fields__)
        extra = set(raw) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)} for {raw.get('label', '?')}")
        return cls(**raw)


@dataclass
class _Block:
    sam: object
    ln1: tuple[np.ndarray, np.ndarray]
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    ln2: tuple[np.ndarray, np.ndarray]


@dataclass
class BooleanClassifier:
    """Randomly initialised transformer stack with a one-node sign readout."""

    config: ModelConfig
    embedding: np.ndarray
    class_token: np.ndarray | None
    blocks: list[_Block]
    head_w: np.ndarray
    head_b: float
    variant: qsam.QsamVariant | None = field(default=None)

    def logits(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.intp)
        x = self.embedding[bits]
        if self.class_token is not None:
            cls = np.broadcast_to(self.class_token, bits.shape[:-1] + (1, self.config.d_model))
            x = np.concatenate([cls, x], axis=-2)
        x = x + positional_encoding(x.shape[-2], self.config.d_model)
        for block in self.blocks:
            if self.variant is None:
                attended = classical_attention(x, *block.sam)
            else:
                attended = qsam.qsam_forward(x, self.variant, block.sam)
            h = layer_norm(x + attended, *block.ln1)
            x = layer_norm(h + ffn(h, block.w1, block.b1, block.w2, block.b2), *block.ln2)
        readout = x[..., 0, :] if self.class_token is not None else x.mean(axis=-2)
        return readout @ self.head_w + self.head_b

    def __call__(self, bits) -> np.ndarray:
        return (self.logits(bits) > 0).astype(np.uint8)


def build_boolean_classifier(config: ModelConfig, rng: np.random.Generator) -> BooleanClassifier:
    d, hidden = config.d_model, config.hidden_dim
    # XB only redefines fans for circuit angles; dense layers use plain Xavier.
    dense = InitScheme(InitKind.XAVIER if config.init is InitKind.XAVIER_CUSTOM else config.init)
    variant = config.variant if config.is_quantum else None

    def draw(rows, cols):
        return init_matrix(rows, cols, dense, rng)

    embedding = draw(2, d)
    class_token = draw(1, d)[0] if config.architecture is Architecture.ENCODER_CLASSIFIER else None
    blocks = []
    for _ in range(config.blocks):
        if variant is None:
            sam = (draw(d, d), draw(d, d), draw(d, d))
        else:
            sam = qsam.init_qsam_params(variant, d, config.qubits, config.ansatz_layers, config.init, rng)
        blocks.append(
            _Block(
                sam=sam,
                ln1=(np.ones(d), np.zeros(d)),
                w1=draw(d, hidden),
                b1=draw(1, hidden)[0],
                w2=draw(hidden, d),
                b2=draw(1, d)[0],
                ln2=(np.ones(d), np.zeros(d)),
            )
        )
    head_w = draw(d, 1)[:, 0]
    head_b = float(draw(1, 1)[0, 0])
    return BooleanClassifier(config, embedding, class_token, blocks, head_w, head_b, variant)


def enumerate_inputs(n: int) -> np.ndarray:
    """All ``2**n`` inputs in ascending integer order as big-endian bit rows."""
    idx = np.arange(1 << n)[:, None]
    return ((idx >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def boolean_function(model: Callable[[np.ndarray], np.ndarray], n: int) -> str:
    out = np.asarray(model(enumerate_inputs(n))).ravel()
    return "".join("1" if b else "0" for b in out)


def label_hash(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest(), "little")


def trial_rng(master_seed: int, label: str, trial: int) -> np.random.Generator:
    """Independent generator for one trial, keyed by seed, label and trial index."""
    key = [master_seed & (2**64 - 1), label_hash(label), trial]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


@dataclass(frozen=True)
class HarvestResult:
    config: ModelConfig
    functions: tuple[str, ...]
    scores: tuple[float, ...]
    seed: int

    @property
    def trials(self) -> int:
        return len(self.functions)

    def to_record(self) -> dict:
        n = self.config.input_bits
        width = (1 << n) // 4
        return {
            "label": self.config.label,
            "seed": self.seed,
            "n": n,
            "T": self.trials,
            "functions": [format(int(f, 2), f"0{width}x") for f in self.functions],
            "scores": list(self.scores),
        }


def functions_from_hex(record: dict) -> list[str]:
    n = record["n"]
    return [format(int(h, 16), f"0{1 << n}b") for h in record["functions"]]


def _harvest_range(config: ModelConfig, master_seed: int, start: int, stop: int) -> list[tuple[str, float]]:
    inputs = enumerate_inputs(config.input_bits)
    out = []
    for trial in range(start, stop):
        model = build_boolean_classifier(config, trial_rng(master_seed, config.label, trial))
        bits = "".join("1" if b else "0" for b in model(inputs))
        out.append((bits, lz_complexity(bits)))
    return out


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, -(-trials // (4 * workers)))
    return [(s, min(trials, s + size)) for s in range(0, trials, size)]


def harvest(config: ModelConfig, trials: int, master_seed: int, workers: int = 1) -> HarvestResult:
    """Sample ``trials`` functions; the result does not depend on ``workers``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers <= 1:
        pairs = _harvest_range(config, master_seed, 0, trials)
    else:
        chunks = _chunks(trials, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_harvest_range, *zip(*[(config, master_seed, a, b) for a, b in chunks]))
            pairs = [p for part in parts for p in part]
    functions, scores = zip(*pairs)
    return HarvestResult(config, tuple(functions), tuple(scores), master_seed)
