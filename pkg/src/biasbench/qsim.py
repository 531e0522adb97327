"""Dense statevector simulation for small registers.

States are complex numpy arrays whose last axis has length ``2**q``; any
leading axes are a batch and every routine here broadcasts over them. Qubit 0
is the most significant bit of the basis index. Operations never mutate their
input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

import numpy as np

MAX_QUBITS = 12
MAX_PANEL_QUBITS = 6
PAULI_SYMBOLS = "IXYZ"


def num_qubits(state: np.ndarray) -> int:
    dim = state.shape[-1]
    q = dim.bit_length() - 1
    if dim < 2 or 1 << q != dim:
        raise ValueError(f"state dimension {dim} is not a power of two >= 2")
    return q


def zero_state(q: int, batch_shape: tuple[int, ...] = ()) -> np.ndarray:
    if not 1 <= q <= MAX_QUBITS:
        raise ValueError(f"register too large: {q} qubits (limit {MAX_QUBITS})")
    state = np.zeros(batch_shape + (1 << q,), dtype=complex)
    state[..., 0] = 1.0
    return state


def _check_qubit(qubit: int, q: int) -> None:
    if not 0 <= qubit < q:
        raise ValueError(f"qubit index {qubit} out of range for {q} qubits")


def _apply_1q(state, qubit, m00, m01, m10, m11):
    q = num_qubits(state)
    _check_qubit(qubit, q)
    batch = state.shape[:-1]
    v = state.reshape(batch + (1 << qubit, 2, 1 << (q - qubit - 1)))
    a0, a1 = v[..., 0, :], v[..., 1, :]
    m00, m01, m10, m11 = (np.asarray(m)[..., None, None] for m in (m00, m01, m10, m11))
    out = np.stack([m00 * a0 + m01 * a1, m10 * a0 + m11 * a1], axis=-2)
    return out.reshape(np.broadcast_shapes(batch, out.shape[:-3]) + (1 << q,))


def apply_rx(state: np.ndarray, qubit: int, theta) -> np.ndarray:
    """``exp(-i theta X / 2)`` on ``qubit``; ``theta`` may be batched."""
    c, s = np.cos(np.asarray(theta) / 2), np.sin(np.asarray(theta) / 2)
    return _apply_1q(state, qubit, c, -1j * s, -1j * s, c)


def apply_ry(state: np.ndarray, qubit: int, theta) -> np.ndarray:
    c, s = np.cos(np.asarray(theta) / 2), np.sin(np.asarray(theta) / 2)
    return _apply_1q(state, qubit, c, -s, s, c)


def apply_rz(state: np.ndarray, qubit: int, theta) -> np.ndarray:
    half = np.asarray(theta) / 2
    zero = np.zeros_like(half)
    return _apply_1q(state, qubit, np.exp(-1j * half), zero, zero, np.exp(1j * half))


@lru_cache(maxsize=None)
def _cnot_permutation(q: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(1 << q)
    cbit, tbit = 1 << (q - 1 - control), 1 << (q - 1 - target)
    perm = np.where(idx & cbit, idx ^ tbit, idx)
    perm.setflags(write=False)
    return perm


def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    q = num_qubits(state)
    _check_qubit(control, q)
    _check_qubit(target, q)
    if control == target:
        raise ValueError("control and target must differ")
    return state[..., _cnot_permutation(q, control, target)]


def encode_angle(x) -> np.ndarray:
    """One qubit per feature, qubit ``i`` rotated by ``Rx(x_i)`` from ``|0>``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    if d > MAX_QUBITS:
        raise ValueError(f"register too large: angle encoding of {d} features needs {d} qubits")
    state = zero_state(d, x.shape[:-1])
    for i in range(d):
        state = apply_rx(state, i, x[..., i])
    return state


def amplitude_qubits(d: int) -> int:
    return max(1, math.ceil(math.log2(d)))


def encode_amplitude(x, qubits: int | None = None) -> np.ndarray:
    """Normalised ``x`` written into the amplitudes, zero-padded to ``2**qubits``.

    ``qubits`` defaults to ``ceil(log2 d)`` and may be larger to pad further.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    k = amplitude_qubits(d) if qubits is None else qubits
    if (1 << k) < d:
        raise ValueError(f"{k} qubits cannot hold {d} amplitudes")
    if k > MAX_QUBITS:
        raise ValueError(f"register too large: {k} qubits (limit {MAX_QUBITS})")
    norm = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("cannot normalize the zero vector")
    state = np.zeros(x.shape[:-1] + (1 << k,), dtype=complex)
    state[..., :d] = x / norm
    return state


def _entangle_chain(state: np.ndarray, q: int) -> np.ndarray:
    for j in range(q - 1):
        state = apply_cnot(state, j, j + 1)
    return state


def encode_feature_map(x, n_q: int) -> np.ndarray:
    """Layered ``Rx`` row, ``Ry`` row, then a CNOT chain ``j -> j+1``.

    Layer ``i`` uses the consecutive blocks ``x[2i*n_q:(2i+1)*n_q]`` for the
    ``Rx`` angles and ``x[(2i+1)*n_q:(2i+2)*n_q]`` for the ``Ry`` angles.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    if n_q < 1 or d % (2 * n_q):
        raise ValueError("d must be a multiple of 2·n_q")
    state = zero_state(n_q, x.shape[:-1])
    for layer in range(d // (2 * n_q)):
        base = 2 * layer * n_q
        for j in range(n_q):
            state = apply_rx(state, j, x[..., base + j])
        for j in range(n_q):
            state = apply_ry(state, j, x[..., base + n_q + j])
        state = _entangle_chain(state, n_q)
    return state


@dataclass(frozen=True)
class AnsatzParams:
    """Angles for the YZ circular ansatz, laid out ``[layer][qubit][ry, rz]``."""

    thetas: np.ndarray
    layers: int = 1

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float).ravel()
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)
        if self.layers < 1 or thetas.size % (2 * self.layers):
            raise ValueError(f"{thetas.size} angles cannot fill {self.layers} layers of (Ry, Rz) pairs")

    @property
    def qubits(self) -> int:
        return self.thetas.size // (2 * self.layers)

    @classmethod
    def zeros(cls, q: int, layers: int = 1) -> AnsatzParams:
        return cls(np.zeros(2 * q * layers), layers)


def apply_yz_circular(state: np.ndarray, params: AnsatzParams) -> np.ndarray:
    q = num_qubits(state)
    if params.thetas.size != 2 * q * params.layers:
        raise ValueError(
            f"ansatz needs {2 * q * params.layers} angles for {q} qubits x {params.layers} layers, "
            f"got {params.thetas.size}"
        )
    angles = params.thetas.reshape(params.layers, q, 2)
    for layer in angles:
        for j in range(q):
            state = apply_ry(state, j, layer[j, 0])
            state = apply_rz(state, j, layer[j, 1])
        if q > 1:
            state = _entangle_chain(state, q)
            state = apply_cnot(state, q - 1, 0)
    return state


def _check_pauli(p: str, q: int | None = None) -> str:
    p = p.upper()
    if not p or p.strip(PAULI_SYMBOLS):
        raise ValueError(f"invalid Pauli string {p!r}")
    if q is not None and len(p) != q:
        raise ValueError(f"Pauli string {p!r} has length {len(p)}, register has {q} qubits")
    return p


@lru_cache(maxsize=4096)
def _pauli_action(p: str) -> tuple[np.ndarray, np.ndarray]:
    """``P|i> = phase[i] |index[i]>`` as two arrays over the basis."""
    q = len(p)
    idx = np.arange(1 << q)
    flip = 0
    phase = np.ones(1 << q, dtype=complex)
    for j, sym in enumerate(p):
        bit = (idx >> (q - 1 - j)) & 1
        if sym in "XY":
            flip |= 1 << (q - 1 - j)
        if sym == "Y":
            phase *= np.where(bit, -1j, 1j)
        elif sym == "Z":
            phase *= np.where(bit, -1.0, 1.0)
    index = idx ^ flip
    index.setflags(write=False)
    phase.setflags(write=False)
    return index, phase


def expect_pauli(state: np.ndarray, p: str) -> np.ndarray | float:
    """``<psi|P|psi>`` for one Pauli string; returns a float for unbatched input."""
    out = expect_paulis(state, [p])[..., 0]
    return float(out) if out.ndim == 0 else out


def expect_paulis(state: np.ndarray, paulis) -> np.ndarray:
    """Expectations of several Pauli strings, stacked on a new last axis."""
    q = num_qubits(state)
    actions = [_pauli_action(_check_pauli(p, q)) for p in paulis]
    index = np.stack([a[0] for a in actions])
    phase = np.stack([a[1] for a in actions])
    # <psi|P|psi> = sum_i conj(psi[index_i]) * phase_i * psi[i]
    vals = np.sum(np.conj(state[..., index]) * phase * state[..., None, :], axis=-1)
    return vals.real


def z_expectations(state: np.ndarray) -> np.ndarray:
    """``<Z_i>`` for every qubit, read straight off the basis probabilities."""
    q = num_qubits(state)
    probs = basis_probabilities(state).reshape(state.shape[:-1] + (2,) * q)
    out = []
    for i in range(q):
        other = tuple(a for a in range(-q, 0) if a != -q + i)
        marginal = probs.sum(axis=other) if other else probs
        out.append(marginal[..., 0] - marginal[..., 1])
    return np.stack(out, axis=-1)


def basis_probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def anticommuting_set(q: int) -> list[str]:
    """The ``2q+1`` Jordan-Wigner strings; every pair anticommutes."""
    if q < 1:
        raise ValueError("need at least one qubit")
    out = []
    for j in range(q):
        for sym in "XY":
            out.append("Z" * j + sym + "I" * (q - j - 1))
    out.append("Z" * q)
    return out


def _block(q: int, sym: str, start: int, width: int) -> str:
    return "I" * start + sym * width + "I" * (q - start - width)


@lru_cache(maxsize=None)
def _panel_order(q: int) -> tuple[str, ...]:
    """All non-identity strings: contiguous Z and X blocks by weight, then the rest."""
    seen: dict[str, None] = {}
    for width in range(1, q + 1):
        for sym in "ZX":
            for start in range(q - width + 1):
                seen.setdefault(_block(q, sym, start, width))
    rest = ("".join(t) for t in product(PAULI_SYMBOLS, repeat=q))
    for p in sorted((p for p in rest if p != "I" * q), key=lambda p: (q - p.count("I"), p)):
        seen.setdefault(p)
    return tuple(seen)


def pauli_panel(q: int) -> list[str]:
    """A fixed set of ``2**q`` non-identity Pauli strings.

    Order: single-qubit Z on each qubit, single-qubit X on each qubit, then
    adjacent Z-Z and X-X blocks, then wider contiguous Z and X blocks; any
    shortfall is filled with the remaining strings by weight and then
    lexicographically.
    """
    if not 1 <= q <= MAX_PANEL_QUBITS:
        raise ValueError(f"pauli_panel supports 1..{MAX_PANEL_QUBITS} qubits, got {q}")
    return list(_panel_order(q)[: 1 << q])


def anticommute(a: str, b: str) -> bool:
    """Symbolic rule: odd number of sites where both act non-trivially and differ."""
    if len(a) != len(b):
        raise ValueError("Pauli strings must have equal length")
    clashes = sum(1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 1


def pairwise_anticommuting(paulis) -> bool:
    return all(anticommute(a, b) for a, b in combinations(paulis, 2))
