"""Quantum self-attention built from per-token query/key/value circuits.

Each token embedding is loaded into a register (angle, amplitude or feature-map
encoding), evolved by a role-specific YZ circular ansatz, and measured. The
query/key readouts become an attention matrix via a Gaussian kernel, a softmax
over the outer product, or scaled dot-product attention; the value readouts are
mixed by that matrix and linearly projected back to the model width when the
widths differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import qsim
from .nnblocks import InitKind, InitScheme, init_matrix, softmax_rows


class Family(str, Enum):
    ENCODER_DECODER = "EncoderDecoder"
    SAM_GAN = "SamGan"


class Encoding(str, Enum):
    ANGLE = "Angle"
    AMPLITUDE = "Amplitude"
    FEATURE_MAP = "FeatureMap"


class Measurement(str, Enum):
    SINGLE_Z = "SingleZ"
    ALL_Z = "AllZ"
    ANTICOMMUTING = "Anticommuting"
    PAULI_PANEL = "PauliPanel"
    BASIS_PROBS = "BasisProbs"


class Attention(str, Enum):
    GAUSSIAN = "Gaussian"
    SOFTMAX_OUTER = "SoftmaxOuter"
    CLASSICAL_DOT = "ClassicalDot"


ROLES = ("query", "key", "value")


@dataclass(frozen=True)
class QsamVariant:
    family: Family
    name: str
    encoding: Encoding
    query_key_measurement: Measurement
    value_measurement: Measurement
    attention: Attention

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "name": self.name,
            "encoding": self.encoding.value,
            "query_key_measurement": self.query_key_measurement.value,
            "value_measurement": self.value_measurement.value,
            "attention": self.attention.value,
        }


def _row(family, name, encoding, qk, attention):
    value = Measurement.BASIS_PROBS if encoding is Encoding.AMPLITUDE else Measurement.ALL_Z
    return QsamVariant(family, name, encoding, qk, value, attention)


_E, _S = Family.ENCODER_DECODER, Family.SAM_GAN
VARIANT_TABLES: dict[Family, dict[str, QsamVariant]] = {
    _E: {
        "Canonical": _row(_E, "Canonical", Encoding.FEATURE_MAP, Measurement.SINGLE_Z, Attention.GAUSSIAN),
        "V1": _row(_E, "V1", Encoding.AMPLITUDE, Measurement.SINGLE_Z, Attention.GAUSSIAN),
        "V2": _row(_E, "V2", Encoding.AMPLITUDE, Measurement.SINGLE_Z, Attention.SOFTMAX_OUTER),
        "V3": _row(_E, "V3", Encoding.AMPLITUDE, Measurement.PAULI_PANEL, Attention.CLASSICAL_DOT),
        "V4": _row(_E, "V4", Encoding.AMPLITUDE, Measurement.ANTICOMMUTING, Attention.CLASSICAL_DOT),
    },
    _S: {
        "Canonical": _row(_S, "Canonical", Encoding.ANGLE, Measurement.SINGLE_Z, Attention.GAUSSIAN),
        "V1": _row(_S, "V1", Encoding.ANGLE, Measurement.ALL_Z, Attention.CLASSICAL_DOT),
        "V2": _row(_S, "V2", Encoding.ANGLE, Measurement.ANTICOMMUTING, Attention.CLASSICAL_DOT),
        "V3": _row(_S, "V3", Encoding.ANGLE, Measurement.SINGLE_Z, Attention.SOFTMAX_OUTER),
    },
}


def allowed_rows() -> list[str]:
    return [f"{fam.value}/{name}" for fam, rows in VARIANT_TABLES.items() for name in rows]


def get_variant(
    family: Family | str,
    name: str,
    *,
    encoding: Encoding | str | None = None,
    value_measurement: Measurement | str | None = None,
    attention: Attention | str | None = None,
) -> QsamVariant:
    """Look up a table row.

    ``encoding`` and ``attention`` are only accepted when they agree with the
    row. ``value_measurement`` may switch amplitude-encoded rows to the Pauli
    panel.
    """
    family = Family(family)
    try:
        row = VARIANT_TABLES[family][name]
    except KeyError:
        raise ValueError(f"unknown variant {family.value}/{name}; allowed rows: {', '.join(allowed_rows())}") from None
    if encoding is not None and Encoding(encoding) is not row.encoding:
        raise ValueError(f"{family.value}/{name} uses {row.encoding.value} encoding, not {Encoding(encoding).value}")
    if attention is not None and Attention(attention) is not row.attention:
        raise ValueError(f"{family.value}/{name} uses {row.attention.value} attention, not {Attention(attention).value}")
    if value_measurement is not None:
        vm = Measurement(value_measurement)
        options = (
            {Measurement.BASIS_PROBS, Measurement.PAULI_PANEL}
            if row.encoding is Encoding.AMPLITUDE
            else {Measurement.ALL_Z}
        )
        if vm not in options:
            raise ValueError(
                f"value measurement {vm.value} not available with {row.encoding.value} encoding; "
                f"choose from {sorted(m.value for m in options)}"
            )
        row = QsamVariant(row.family, row.name, row.encoding, row.query_key_measurement, vm, row.attention)
    return row


def register_size(variant: QsamVariant, d_model: int, qubits: int | None) -> int:
    """Qubits per circuit for this variant at model width ``d_model``."""
    if variant.encoding is Encoding.ANGLE:
        k = d_model
    elif variant.encoding is Encoding.AMPLITUDE:
        k = qsim.amplitude_qubits(d_model) if qubits is None else qubits
        if (1 << k) < d_model:
            raise ValueError(f"amplitude encoding of width {d_model} needs at least {qsim.amplitude_qubits(d_model)} qubits")
    else:
        if qubits is None:
            raise ValueError("feature-map encoding needs an explicit qubit count")
        k = qubits
        if d_model % (2 * k):
            raise ValueError("d must be a multiple of 2·n_q")
    if not 1 <= k <= qsim.MAX_QUBITS:
        raise ValueError(f"register too large: {k} qubits (limit {qsim.MAX_QUBITS})")
    if Measurement.PAULI_PANEL in (variant.query_key_measurement, variant.value_measurement) and k > qsim.MAX_PANEL_QUBITS:
        raise ValueError(f"Pauli panel measurement is capped at {qsim.MAX_PANEL_QUBITS} qubits, register has {k}")
    return k


def feature_dim(measurement: Measurement, k: int) -> int:
    return {
        Measurement.SINGLE_Z: 1,
        Measurement.ALL_Z: k,
        Measurement.ANTICOMMUTING: 2 * k + 1,
        Measurement.PAULI_PANEL: 1 << k,
        Measurement.BASIS_PROBS: 1 << k,
    }[measurement]


@dataclass(frozen=True)
class QsamParams:
    ansatz_q: qsim.AnsatzParams
    ansatz_k: qsim.AnsatzParams
    ansatz_v: qsim.AnsatzParams
    projection: np.ndarray | None = None

    @property
    def qubits(self) -> int:
        return self.ansatz_q.qubits

    def ansatz(self, role: str) -> qsim.AnsatzParams:
        return {"query": self.ansatz_q, "key": self.ansatz_k, "value": self.ansatz_v}[role]

    def count(self) -> int:
        angles = sum(a.thetas.size for a in (self.ansatz_q, self.ansatz_k, self.ansatz_v))
        return angles + (0 if self.projection is None else self.projection.size)


def init_qsam_params(
    variant: QsamVariant,
    d_model: int,
    qubits: int | None,
    layers: int,
    init: InitKind | str,
    rng: np.random.Generator,
) -> QsamParams:
    """Draw independent ansatz angles for the three roles plus the value projection.

    Angle schemes: ``N`` draws N(0, 1); ``X`` draws Xavier-uniform with both fans
    equal to the register size; ``XB`` uses the register size as fan-in and the
    role's measurement-operator count as fan-out; ``Z`` gives all zeros.
    """
    init = InitKind(init)
    k = register_size(variant, d_model, qubits)
    blocks = []
    for role in ROLES:
        meas = variant.value_measurement if role == "value" else variant.query_key_measurement
        if init is InitKind.XAVIER:
            scheme = InitScheme(InitKind.XAVIER_CUSTOM, k, k)
        elif init is InitKind.XAVIER_CUSTOM:
            scheme = InitScheme(InitKind.XAVIER_CUSTOM, k, feature_dim(meas, k))
        else:
            scheme = InitScheme(init)
        blocks.append(qsim.AnsatzParams(init_matrix(layers * k, 2, scheme, rng), layers))
    d_value = feature_dim(variant.value_measurement, k)
    projection = None
    if d_value != d_model:
        classical = InitScheme(InitKind.XAVIER if init is InitKind.XAVIER_CUSTOM else init)
        projection = init_matrix(d_value, d_model, classical, rng)
    return QsamParams(*blocks, projection=projection)


def encode(tokens: np.ndarray, variant: QsamVariant, k: int) -> np.ndarray:
    """Load a batch of token vectors ``(..., d)`` into ``k``-qubit states."""
    tokens = np.asarray(tokens, dtype=float)
    if variant.encoding is Encoding.ANGLE:
        if tokens.shape[-1] != k:
            raise ValueError(f"angle encoding needs {tokens.shape[-1]} qubits, register has {k}")
        return qsim.encode_angle(tokens)
    if variant.encoding is Encoding.FEATURE_MAP:
        return qsim.encode_feature_map(tokens, k)
    # A zero token has no direction; it is loaded as |0...0>.
    zero = np.linalg.norm(tokens, axis=-1) == 0
    if np.any(zero):
        tokens = tokens.copy()
        tokens[zero, 0] = 1.0
    return qsim.encode_amplitude(tokens, k)


def measure(state: np.ndarray, measurement: Measurement) -> np.ndarray:
    k = qsim.num_qubits(state)
    if measurement is Measurement.SINGLE_Z:
        return qsim.z_expectations(state)[..., :1]
    if measurement is Measurement.ALL_Z:
        return qsim.z_expectations(state)
    if measurement is Measurement.BASIS_PROBS:
        return qsim.basis_probabilities(state)
    if measurement is Measurement.ANTICOMMUTING:
        return qsim.expect_paulis(state, qsim.anticommuting_set(k))
    return qsim.expect_paulis(state, qsim.pauli_panel(k))


def _role_measurement(variant: QsamVariant, role: str) -> Measurement:
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    return variant.value_measurement if role == "value" else variant.query_key_measurement


def token_features(x_token, variant: QsamVariant, params: QsamParams, role: str) -> np.ndarray:
    """Encode, evolve with the role's ansatz, and measure one token (or a batch)."""
    meas = _role_measurement(variant, role)
    state = encode(x_token, variant, params.qubits)
    state = qsim.apply_yz_circular(state, params.ansatz(role))
    return measure(state, meas)


def gaussian_kernel(zq, zk) -> np.ndarray:
    zq, zk = np.asarray(zq, dtype=float), np.asarray(zk, dtype=float)
    return np.exp(-((zq[..., :, None] - zk[..., None, :]) ** 2))


def gaussian_attention(zq, zk) -> np.ndarray:
    a = gaussian_kernel(zq, zk)
    return a / a.sum(axis=-1, keepdims=True)


def softmax_outer_attention(zq, zk) -> np.ndarray:
    zq, zk = np.asarray(zq, dtype=float), np.asarray(zk, dtype=float)
    return softmax_rows(zq[..., :, None] * zk[..., None, :])


def dot_attention_scores(q_feat, k_feat) -> np.ndarray:
    q_feat, k_feat = np.asarray(q_feat, dtype=float), np.asarray(k_feat, dtype=float)
    return softmax_rows(q_feat @ np.swapaxes(k_feat, -1, -2) / np.sqrt(q_feat.shape[-1]))


def attention_scores(variant: QsamVariant, q_feat: np.ndarray, k_feat: np.ndarray) -> np.ndarray:
    if variant.attention is Attention.CLASSICAL_DOT:
        return dot_attention_scores(q_feat, k_feat)
    if q_feat.shape[-1] != 1:
        raise ValueError(f"{variant.attention.value} attention needs scalar query/key readouts")
    if variant.attention is Attention.GAUSSIAN:
        return gaussian_attention(q_feat[..., 0], k_feat[..., 0])
    return softmax_outer_attention(q_feat[..., 0], k_feat[..., 0])


def qsam_forward(x, variant: QsamVariant, params: QsamParams) -> np.ndarray:
    """Quantum self-attention over ``x`` of shape ``(..., n, d_model)``."""
    x = np.asarray(x, dtype=float)
    d_model = x.shape[-1]
    k = params.qubits
    encoded = encode(x, variant, k)
    feats = {}
    for role in ROLES:
        evolved = qsim.apply_yz_circular(encoded, params.ansatz(role))
        feats[role] = measure(evolved, _role_measurement(variant, role))
    scores = attention_scores(variant, feats["query"], feats["key"])
    mixed = scores @ feats["value"]
    if params.projection is not None:
        mixed = mixed @ params.projection
    if mixed.shape[-1] != d_model:
        raise ValueError(f"value width {mixed.shape[-1]} does not match d_model {d_model}; a projection is required")
    return mixed

