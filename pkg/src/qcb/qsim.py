"""Dense statevector simulation for registers of up to 12 qubits.

Amplitude ordering is little-endian: qubit ``k`` corresponds to bit ``k`` of
the basis-state index, so for two qubits the basis order is
``|00>, |01>, |10>, |11>`` with the rightmost digit being qubit 0.

Gate application is matrix-free: each gate updates amplitudes through
bit-indexed pairing instead of building the full register unitary (the test
suite checks the simulator against an explicit dense matrix-chain oracle,
which keeps the two code paths independent).  Every kernel operates on the
last axis of its input array, so the same code serves a single state vector
of shape ``(2**n,)`` and a batch of shape ``(batch, 2**n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, unique
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, UsageError

MAX_QUBITS = 12
NORM_ATOL = 1e-10

_SQRT1_2 = 2.0 ** -0.5


@unique
class GateKind(Enum):
    RY = "RY"
    RZ = "RZ"
    H = "H"
    X = "X"
    CNOT = "CNOT"
    ZZPHASE = "ZZPhase"
    XMIXER = "XMixer"


_ARITY = {
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.ZZPHASE: 2,
    GateKind.XMIXER: 1,
}
_ANGLED = frozenset({GateKind.RY, GateKind.RZ, GateKind.ZZPHASE, GateKind.XMIXER})


@dataclass(frozen=True)
class GateOp:
    """One gate application: kind, target qubit indices, optional angle.

    Conventions (unitaries acting on the target qubits):

    * ``RY(a)  = [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]]``
    * ``RZ(a)  = diag(exp(-i a/2), exp(+i a/2))``
    * ``ZZPhase(a) = exp(-i a Z@Z)`` -- phase ``exp(-i a)`` where the two
      bits agree, ``exp(+i a)`` where they differ.
    * ``XMixer(a) = exp(-i a X)``
    * ``CNOT`` targets are ``(control, target)``.
    """

    kind: GateKind
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        arity = _ARITY[self.kind]
        if len(targets) != arity:
            raise UsageError(
                f"{self.kind.value} expects {arity} target(s), got {targets!r}"
            )
        if len(set(targets)) != len(targets):
            raise UsageError(f"{self.kind.value} targets must be distinct: {targets!r}")
        if any(t < 0 for t in targets):
            raise UsageError(f"negative qubit index in {targets!r}")
        if self.kind in _ANGLED:
            if self.angle is None:
                raise UsageError(f"{self.kind.value} requires an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise UsageError(f"{self.kind.value} takes no angle")


def ry(qubit: int, angle: float) -> GateOp:
    return GateOp(GateKind.RY, (qubit,), angle)


def rz(qubit: int, angle: float) -> GateOp:
    return GateOp(GateKind.RZ, (qubit,), angle)


def hadamard(qubit: int) -> GateOp:
    return GateOp(GateKind.H, (qubit,))


def pauli_x(qubit: int) -> GateOp:
    return GateOp(GateKind.X, (qubit,))


def cnot(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CNOT, (control, target))


def zz_phase(qubit_a: int, qubit_b: int, angle: float) -> GateOp:
    return GateOp(GateKind.ZZPHASE, (qubit_a, qubit_b), angle)


def x_mixer(qubit: int, angle: float) -> GateOp:
    return GateOp(GateKind.XMIXER, (qubit,), angle)


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitude vector over the 2**n_qubits computational basis.

    Instances are immutable: the amplitude array is copied on construction
    and marked read-only, and every operation returns a new state.
    """

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(
                f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128)
        dim = 1 << self.n_qubits
        if amps.shape != (dim,):
            raise UsageError(
                f"amplitude vector must have shape ({dim},), got {amps.shape}"
            )
        norm_sq = float(np.sum(amps.real**2 + amps.imag**2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise UsageError(f"state norm**2 deviates from 1 by {abs(norm_sq - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


# ---------------------------------------------------------------------------
# cached sign tables for diagonal gates and expectations


@lru_cache(maxsize=None)
def _zz_sign_vector(dim: int, qa: int, qb: int) -> np.ndarray:
    idx = np.arange(dim)
    signs = np.where(((idx >> qa) & 1) == ((idx >> qb) & 1), 1.0, -1.0)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=None)
def _z_sign_vector(dim: int, q: int) -> np.ndarray:
    idx = np.arange(dim)
    signs = 1.0 - 2.0 * ((idx >> q) & 1)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=None)
def _z_signs(n_qubits: int) -> np.ndarray:
    dim = 1 << n_qubits
    idx = np.arange(dim)
    signs = np.empty((dim, n_qubits))
    for q in range(n_qubits):
        signs[:, q] = 1.0 - 2.0 * ((idx >> q) & 1)
    signs.setflags(write=False)
    return signs


# ---------------------------------------------------------------------------
# amplitude-array kernels (batch-aware: amps has shape (..., dim))
#
# The last axis is reshaped so a qubit's bit becomes its own axis; slicing
# that axis yields views, avoiding gather/scatter index arithmetic.


def _split1(arr: np.ndarray, q: int) -> np.ndarray:
    dim = arr.shape[-1]
    return arr.reshape(arr.shape[:-1] + (dim >> (q + 1), 2, 1 << q))


def _split2(arr: np.ndarray, hi: int, lo: int) -> np.ndarray:
    # requires hi > lo; axes -4 and -2 carry the hi and lo bits
    dim = arr.shape[-1]
    return arr.reshape(
        arr.shape[:-1]
        + (dim >> (hi + 1), 2, (1 << hi) >> (lo + 1), 2, 1 << lo)
    )


def _factor2(values):
    # aligns with a _split2 view after both bit axes have been sliced away
    arr = np.asarray(values)
    return arr[..., None, None, None] if arr.ndim else arr


def _fresh(amps: np.ndarray) -> np.ndarray:
    return np.empty(amps.shape, dtype=np.complex128)


def _apply_1q_matrix(amps: np.ndarray, q: int, u: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix on one qubit; ``u`` may carry leading batch axes.

    The amplitude axis is reshaped to expose the qubit bit as a length-2
    axis and the matrix is applied with a broadcast matmul, which keeps the
    inner loops in compiled code for every qubit position.
    """
    shape = amps.shape
    v = _split1(amps, q)
    if u.ndim > 2:
        # one matrix per batch row: (batch, 1, 2, 2) against (batch, G, 2, S)
        u = u[..., None, :, :]
    return np.matmul(u, v).reshape(shape)


def _ry_matrix(angle) -> np.ndarray:
    half = 0.5 * np.asarray(angle, dtype=float)
    c = np.cos(half)
    s = np.sin(half)
    u = np.empty(np.shape(half) + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = c
    u[..., 0, 1] = -s
    u[..., 1, 0] = s
    u[..., 1, 1] = c
    return u


def _rz_matrix(angle) -> np.ndarray:
    phase = np.exp(-0.5j * np.asarray(angle, dtype=float))
    u = np.zeros(np.shape(angle) + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = phase
    u[..., 1, 1] = np.conj(phase)
    return u


def _x_mixer_matrix(angle) -> np.ndarray:
    ang = np.asarray(angle, dtype=float)
    c = np.cos(ang)
    js = 1j * np.sin(ang)
    u = np.empty(np.shape(ang) + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = c
    u[..., 0, 1] = -js
    u[..., 1, 0] = -js
    u[..., 1, 1] = c
    return u


_H_MATRIX = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=np.complex128)
_X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def _apply_ry(amps, q, angle):
    return _apply_1q_matrix(amps, q, _ry_matrix(angle))


def _apply_rz(amps, q, angle):
    ang = np.asarray(angle)
    if ang.ndim == 0:
        phase = np.exp((-0.5j * float(ang)) * _z_sign_vector(amps.shape[-1], q))
        return amps * phase
    return _apply_1q_matrix(amps, q, _rz_matrix(ang))


def _apply_h(amps, q):
    return _apply_1q_matrix(amps, q, _H_MATRIX)


def _apply_x(amps, q):
    return _apply_1q_matrix(amps, q, _X_MATRIX)


def _apply_cnot(amps, control, target):
    hi, lo = (control, target) if control > target else (target, control)
    v = _split2(amps, hi, lo)
    out = _fresh(amps)
    vo = _split2(out, hi, lo)
    if control > target:  # control on the hi axis
        vo[..., 0, :, 0, :] = v[..., 0, :, 0, :]
        vo[..., 0, :, 1, :] = v[..., 0, :, 1, :]
        vo[..., 1, :, 0, :] = v[..., 1, :, 1, :]
        vo[..., 1, :, 1, :] = v[..., 1, :, 0, :]
    else:  # control on the lo axis, flip the hi bit where control is 1
        vo[..., 0, :, 0, :] = v[..., 0, :, 0, :]
        vo[..., 1, :, 0, :] = v[..., 1, :, 0, :]
        vo[..., 0, :, 1, :] = v[..., 1, :, 1, :]
        vo[..., 1, :, 1, :] = v[..., 0, :, 1, :]
    return out


def _apply_zz_phase(amps, qa, qb, angle):
    ang = np.asarray(angle)
    if ang.ndim == 0:
        phase = np.exp((-1j * float(ang)) * _zz_sign_vector(amps.shape[-1], qa, qb))
        return amps * phase
    hi, lo = (qa, qb) if qa > qb else (qb, qa)
    v = _split2(amps, hi, lo)
    out = _fresh(amps)
    vo = _split2(out, hi, lo)
    agree = _factor2(np.exp(-1j * ang))
    differ = np.conj(agree)
    vo[..., 0, :, 0, :] = agree * v[..., 0, :, 0, :]
    vo[..., 1, :, 1, :] = agree * v[..., 1, :, 1, :]
    vo[..., 0, :, 1, :] = differ * v[..., 0, :, 1, :]
    vo[..., 1, :, 0, :] = differ * v[..., 1, :, 0, :]
    return out


def _apply_x_mixer(amps, q, angle):
    return _apply_1q_matrix(amps, q, _x_mixer_matrix(angle))


def _check_targets(gate: GateOp, dim: int) -> None:
    for t in gate.targets:
        if (1 << t) >= dim:
            raise UsageError(
                f"{gate.kind.value} target {t} out of range for dimension {dim}"
            )


def apply_gate_amplitudes(amps: np.ndarray, gate: GateOp) -> np.ndarray:
    """Apply one gate to an amplitude array of shape ``(..., 2**n)``."""
    _check_targets(gate, amps.shape[-1])
    kind = gate.kind
    if kind is GateKind.RY:
        return _apply_ry(amps, gate.targets[0], gate.angle)
    if kind is GateKind.RZ:
        return _apply_rz(amps, gate.targets[0], gate.angle)
    if kind is GateKind.H:
        return _apply_h(amps, gate.targets[0])
    if kind is GateKind.X:
        return _apply_x(amps, gate.targets[0])
    if kind is GateKind.CNOT:
        return _apply_cnot(amps, gate.targets[0], gate.targets[1])
    if kind is GateKind.ZZPHASE:
        return _apply_zz_phase(amps, gate.targets[0], gate.targets[1], gate.angle)
    if kind is GateKind.XMIXER:
        return _apply_x_mixer(amps, gate.targets[0], gate.angle)
    raise UsageError(f"unsupported gate kind {kind!r}")


def ry_rows(amps: np.ndarray, qubit: int, angles: np.ndarray) -> np.ndarray:
    """RY on one qubit with a separate angle per batch row."""
    if (1 << qubit) >= amps.shape[-1]:
        raise UsageError(f"qubit {qubit} out of range")
    return _apply_ry(amps, qubit, np.asarray(angles, dtype=float))


def rz_rows(amps: np.ndarray, qubit: int, angles: np.ndarray) -> np.ndarray:
    """RZ on one qubit with a separate angle per batch row."""
    if (1 << qubit) >= amps.shape[-1]:
        raise UsageError(f"qubit {qubit} out of range")
    return _apply_rz(amps, qubit, np.asarray(angles, dtype=float))


def zz_phase_rows(amps: np.ndarray, qubit_a: int, qubit_b: int, angles) -> np.ndarray:
    """ZZPhase on a qubit pair with a separate angle per batch row."""
    if (1 << qubit_a) >= amps.shape[-1] or (1 << qubit_b) >= amps.shape[-1]:
        raise UsageError("qubit index out of range")
    return _apply_zz_phase(amps, qubit_a, qubit_b, np.asarray(angles, dtype=float))


def zero_amplitudes(n_qubits: int, batch: int | None = None) -> np.ndarray:
    """Amplitude array for |0...0>, optionally replicated over a batch."""
    _check_count(n_qubits)
    dim = 1 << n_qubits
    shape = (dim,) if batch is None else (batch, dim)
    amps = np.zeros(shape, dtype=np.complex128)
    amps[..., 0] = 1.0
    return amps


def plus_amplitudes(n_qubits: int, batch: int | None = None) -> np.ndarray:
    """Amplitude array for the uniform superposition |+...+>."""
    _check_count(n_qubits)
    dim = 1 << n_qubits
    shape = (dim,) if batch is None else (batch, dim)
    return np.full(shape, dim**-0.5, dtype=np.complex128)


def z_expectations(amps: np.ndarray, n_qubits: int) -> np.ndarray:
    """<Z_q> for every qubit; returns shape ``(..., n_qubits)``."""
    probs = amps.real**2 + amps.imag**2
    return np.clip(probs @ _z_signs(n_qubits), -1.0, 1.0)


def x_expectations(amps: np.ndarray, n_qubits: int) -> np.ndarray:
    """<X_q> for every qubit via amplitude pairing; shape ``(..., n_qubits)``."""
    out = np.empty(amps.shape[:-1] + (n_qubits,))
    conj = np.conj(amps)
    for q in range(n_qubits):
        a0 = _split1(conj, q)[..., 0, :]
        a1 = _split1(amps, q)[..., 1, :]
        out[..., q] = 2.0 * np.sum((a0 * a1).real, axis=(-2, -1))
    return np.clip(out, -1.0, 1.0)


def cross_overlap_sq(amps_a: np.ndarray, amps_b: np.ndarray) -> np.ndarray:
    """|<a_i|b_j>|**2 for two batches of states; returns shape (len_a, len_b)."""
    if amps_a.shape[-1] != amps_b.shape[-1]:
        raise UsageError("state dimensions differ")
    inner = np.conj(amps_a) @ amps_b.T
    return np.clip(inner.real**2 + inner.imag**2, 0.0, 1.0)


# ---------------------------------------------------------------------------
# state-level API


def _check_count(n_qubits: int) -> None:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")


def init_zero(n_qubits: int) -> QuantumState:
    """|0...0>: amplitude 1 at index 0."""
    return QuantumState(n_qubits, zero_amplitudes(n_qubits))


def init_plus(n_qubits: int) -> QuantumState:
    """|+...+>: all amplitudes equal to 1/sqrt(2**n)."""
    return QuantumState(n_qubits, plus_amplitudes(n_qubits))


def apply_gate(state: QuantumState, gate: GateOp) -> QuantumState:
    """Return the state after applying one gate; the input is untouched."""
    for t in gate.targets:
        if t >= state.n_qubits:
            raise UsageError(
                f"{gate.kind.value} target {t} out of range for {state.n_qubits} qubits"
            )
    return QuantumState(state.n_qubits, apply_gate_amplitudes(state.amplitudes, gate))


def apply_circuit(state: QuantumState, gates) -> QuantumState:
    """Apply a gate sequence left to right."""
    amps = state.amplitudes
    for gate in gates:
        for t in gate.targets:
            if t >= state.n_qubits:
                raise UsageError(
                    f"{gate.kind.value} target {t} out of range for "
                    f"{state.n_qubits} qubits"
                )
        amps = apply_gate_amplitudes(amps, gate)
    return QuantumState(state.n_qubits, amps)


def expectation_z(state: QuantumState, qubit: int) -> float:
    """<Z_qubit> = sum of |amp|**2 signed by the qubit's bit value."""
    if not 0 <= qubit < state.n_qubits:
        raise UsageError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    return float(z_expectations(state.amplitudes, state.n_qubits)[qubit])


def expectation_x(state: QuantumState, qubit: int) -> float:
    """<X_qubit>, computed by pairing amplitudes that differ in the qubit bit."""
    if not 0 <= qubit < state.n_qubits:
        raise UsageError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    return float(x_expectations(state.amplitudes, state.n_qubits)[qubit])


def overlap_sq(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>|**2."""
    if a.n_qubits != b.n_qubits:
        raise UsageError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    inner = np.vdot(a.amplitudes, b.amplitudes)
    return float(np.clip(abs(inner) ** 2, 0.0, 1.0))
