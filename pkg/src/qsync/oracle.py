"""Dense state-vector ground truth for small synchronizable codes.

Basis index bit ``j`` is qubit ``j``, the same ordering as the coefficient
of ``x^j``. Everything here is done gate by gate on amplitudes; the only
thing shared with the Pauli-frame simulator is the correction it prescribes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qsync.cyclic import CyclicCode, dual
from qsync.frame_sim import ChannelEffect, DecodeReport, run_pipeline
from qsync.gf2 import BitPoly
from qsync.qsync_code import QsyncCode

MAX_QUBITS = 20


class BudgetExceeded(ValueError):
    pass


def _check_budget(num_qubits: int):
    if num_qubits > MAX_QUBITS:
        raise BudgetExceeded(f"{num_qubits} qubits exceeds the state-vector budget of {MAX_QUBITS}")


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        _check_budget(self.num_qubits)
        if self.amps.shape != (1 << self.num_qubits,):
            raise ValueError("amplitude vector has the wrong length")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def support(self) -> set[int]:
        return set(np.flatnonzero(np.abs(self.amps) > 1e-12).tolist())


def basis_state(num_qubits: int, index: int) -> StateVector:
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def _popcount_parity(idx: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(idx & np.uint64(mask)) & 1


def coset_state(C: CyclicCode, rep: BitPoly | int, offset: BitPoly | int = 0) -> StateVector:
    """Uniform superposition over C^perp + rep + offset on n qubits."""
    _check_budget(C.n)
    shift = int(rep if isinstance(rep, int) else rep.bits) ^ int(offset if isinstance(offset, int) else offset.bits)
    words = list(dual(C).codewords())
    amps = np.zeros(1 << C.n, dtype=complex)
    amps[[w ^ shift for w in words]] = 1 / np.sqrt(len(words))
    return StateVector(C.n, amps)


def apply_pauli(state: StateVector, e_b: int = 0, e_p: int = 0) -> StateVector:
    """X^e_b Z^e_p: |v> -> (-1)^(v.e_p) |v + e_b>."""
    idx = np.arange(1 << state.num_qubits, dtype=np.uint64)
    signs = 1 - 2 * _popcount_parity(idx, e_p).astype(np.int8)
    out = np.empty_like(state.amps)
    out[idx ^ np.uint64(e_b)] = state.amps * signs
    return StateVector(state.num_qubits, out)


def cnot(state: StateVector, control: int, target: int) -> StateVector:
    idx = np.arange(1 << state.num_qubits, dtype=np.uint64)
    flip = ((idx >> np.uint64(control)) & np.uint64(1)) << np.uint64(target)
    out = np.empty_like(state.amps)
    out[idx ^ flip] = state.amps
    return StateVector(state.num_qubits, out)


def add_ancillas(state: StateVector, before: int, after: int) -> StateVector:
    """Tensor |0>^before (low positions) and |0>^after (high positions) around the state."""
    total = state.num_qubits + before + after
    _check_budget(total)
    amps = np.zeros(1 << total, dtype=complex)
    amps[np.arange(1 << state.num_qubits) << before] = state.amps
    return StateVector(total, amps)


def _copy_cnots(state: StateVector, n: int, a_l: int, a_r: int) -> StateVector:
    for i in range(a_l):
        state = cnot(state, a_l + n - a_l + i, i)
    for j in range(a_r):
        state = cnot(state, a_l + j, a_l + n + j)
    return state


def extend(state: StateVector, a_l: int, a_r: int) -> StateVector:
    """|v> -> |last a_l bits of v, v, first a_r bits of v> via ancillas and CNOTs."""
    n = state.num_qubits
    return _copy_cnots(add_ancillas(state, a_l, a_r), n, a_l, a_r)


def unextend(state: StateVector, a_l: int, a_r: int) -> StateVector:
    """Undo :func:`extend` and keep the component with every ancilla in |0>.

    The result is subnormalized when the ancillas were not returned to |0>.
    """
    n = state.num_qubits - a_l - a_r
    state = _copy_cnots(state, n, a_l, a_r)
    idx = np.arange(1 << n) << a_l
    return StateVector(n, state.amps[idx].copy())


def generic_amplitudes(k_logical: int) -> np.ndarray:
    """Fixed logical superposition with unequal magnitudes and relative phases.

    No single-qubit logical Pauli maps it to itself, so logical X, Y or Z
    errors all lower the fidelity.
    """
    i = np.arange(1 << k_logical)
    amps = (1.0 + i) * np.exp(0.7j * (i + 1))
    return amps / np.linalg.norm(amps)


def logical_state(code: QsyncCode, amplitudes: Sequence[complex]) -> StateVector:
    reps = code.representatives
    if len(amplitudes) != len(reps):
        raise ValueError(f"expected {len(reps)} logical amplitudes")
    total = np.zeros(1 << code.n, dtype=complex)
    for alpha, rep in zip(amplitudes, reps):
        total += alpha * coset_state(code.C, rep).amps
    return StateVector(code.n, total)


def encoded_state(code: QsyncCode, amplitudes: Sequence[complex]) -> StateVector:
    """Logical state, translated by g, then extended to n + a_l + a_r qubits."""
    _check_budget(code.n_ext)
    return extend(apply_pauli(logical_state(code, amplitudes), e_b=code.g.bits), code.a_l, code.a_r)


def _amplitudes_for(code: QsyncCode, logical) -> np.ndarray:
    if logical is None:
        return generic_amplitudes(code.k_logical)
    if isinstance(logical, (int, np.integer)):
        amps = np.zeros(1 << code.k_logical, dtype=complex)
        amps[int(logical)] = 1.0
        return amps
    amps = np.asarray(logical, dtype=complex)
    return amps / np.linalg.norm(amps)


def oracle_pipeline(
    code: QsyncCode,
    logical,
    eff: ChannelEffect,
    report: DecodeReport | None = None,
    branch_seed: int = 0,
) -> float:
    """|<ideal|final>| after errors and the corrections in ``report``.

    ``logical`` is a basis index, an amplitude vector, or ``None`` for
    :func:`generic_amplitudes`. Without a report, one is produced by the
    frame simulator (for a basis index) or for logical index 0.
    """
    _check_budget(code.n_ext)
    if report is None:
        idx = int(logical) if isinstance(logical, (int, np.integer)) else 0
        report = run_pipeline(code, idx, eff, branch_seed)
    if report.slip_estimate != eff.slip:
        raise ValueError("the oracle only certifies blocks whose slip was recovered")
    amps = _amplitudes_for(code, logical)
    ideal = logical_state(code, amps)

    state = encoded_state(code, amps)
    state = apply_pauli(state, e_b=eff.e_b, e_p=eff.e_p)
    state = apply_pauli(state, e_b=report.bit_correction)
    state = unextend(state, code.a_l, code.a_r)
    state = apply_pauli(state, e_b=code.g.bits)
    state = apply_pauli(state, e_p=report.phase_correction)
    return abs(ideal.inner(state))
