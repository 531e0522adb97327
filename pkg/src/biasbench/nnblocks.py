"""Small dense building blocks for randomly initialised transformer blocks.

Everything is plain numpy on arrays whose trailing axes carry the matrix
shape, so a batch of sequences of shape ``(B, n, d)`` passes straight through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

LAYER_NORM_EPS = 1e-5
_GELU_C = math.sqrt(2.0 / math.pi)


class InitKind(str, Enum):
    NORMAL = "N"
    XAVIER = "X"
    XAVIER_CUSTOM = "XB"
    # Sentinel used to build degenerate (constant-output) models.
    ZERO = "Z"


@dataclass(frozen=True)
class InitScheme:
    """How to draw parameters.

    ``fan_in``/``fan_out`` are only read for ``XAVIER_CUSTOM``, where they are the
    encoding-qubit count and the measurement-operator count of a circuit.
    """

    kind: InitKind
    fan_in: int | None = None
    fan_out: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InitKind(self.kind))
        if self.kind is InitKind.XAVIER_CUSTOM and (
            self.fan_in is None or self.fan_out is None or self.fan_in < 1 or self.fan_out < 1
        ):
            raise ValueError("XavierCustom needs fan_in >= 1 and fan_out >= 1")


def xavier_bound(fan_in: int, fan_out: int) -> float:
    return math.sqrt(6.0 / (fan_in + fan_out))


def init_matrix(rows: int, cols: int, scheme: InitScheme, rng: np.random.Generator) -> np.ndarray:
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix shape must be positive, got {rows}x{cols}")
    kind = scheme.kind
    if kind is InitKind.NORMAL:
        return rng.standard_normal((rows, cols))
    if kind is InitKind.XAVIER:
        bound = xavier_bound(rows, cols)
    elif kind is InitKind.XAVIER_CUSTOM:
        bound = xavier_bound(scheme.fan_in, scheme.fan_out)
    else:
        return np.zeros((rows, cols))
    return rng.uniform(-bound, bound, size=(rows, cols))


def softmax_rows(m: np.ndarray) -> np.ndarray:
    z = np.asarray(m, dtype=float)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _check_last(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"{what}: cannot multiply (..., {a.shape[-1]}) by {b.shape}")


def scaled_dot_attention(q: np.ndarray, k: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``softmax(Q K^T / sqrt(d_k)) V`` over the last two axes."""
    scores = softmax_rows(q @ np.swapaxes(k, -1, -2) / math.sqrt(q.shape[-1]))
    return scores @ v


def classical_attention(x, wq, wk, wv) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    for w, name in ((wq, "W^Q"), (wk, "W^K"), (wv, "W^V")):
        _check_last(x, w, name)
    if wq.shape[1] != wk.shape[1]:
        raise ValueError(f"query and key widths differ: {wq.shape[1]} vs {wk.shape[1]}")
    return scaled_dot_attention(x @ wq, x @ wk, x @ wv)


def layer_norm(x, gain, bias, eps: float = LAYER_NORM_EPS) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] < 2:
        raise ValueError("layer_norm needs at least two features")
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mu) / np.sqrt(var + eps) * gain + bias


def positional_encoding(n: int, d: int) -> np.ndarray:
    if d % 2:
        raise ValueError(f"positional encoding dimension must be even, got {d}")
    t = np.arange(n)[:, None]
    freq = 10000.0 ** (np.arange(0, d, 2) / d)
    pe = np.empty((n, d))
    pe[:, 0::2] = np.sin(t / freq)
    pe[:, 1::2] = np.cos(t / freq)
    return pe


def gelu(x):
    """Tanh approximation of GELU."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x * (1.0 + np.tanh(_GELU_C * (x + 0.044715 * x**3)))


def ffn(x, w1, b1, w2, b2) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check_last(x, w1, "W1")
    h = gelu(x @ w1 + b1)
    _check_last(h, w2, "W2")
    return h @ w2 + b2
