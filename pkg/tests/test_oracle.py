from __future__ import annotations

import numpy as np
import pytest

from qsync import oracle
from qsync.frame_sim import ChannelEffect, DecodeReport, Status, run_pipeline
from qsync.oracle import (
    BudgetExceeded,
    StateVector,
    apply_pauli,
    basis_state,
    cnot,
    coset_state,
    encoded_state,
    extend,
    generic_amplitudes,
    logical_state,
    oracle_pipeline,
    unextend,
)


def dense_pauli(n: int, e_b: int, e_p: int) -> np.ndarray:
    """X^e_b Z^e_p as an explicit 2^n x 2^n matrix built from Kronecker products."""
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.diag([1, -1]).astype(complex)
    out = np.array([[1]], dtype=complex)
    # qubit j is bit j of the index, so the last factor is qubit 0
    for j in reversed(range(n)):
        op = np.eye(2, dtype=complex)
        if (e_p >> j) & 1:
            op = Z @ op
        if (e_b >> j) & 1:
            op = X @ op
        out = np.kron(out, op)
    return out


def test_coset_state_amplitudes(code9):
    st = coset_state(code9.C, 0)
    assert st.support() == set(code9.C_perp.codewords())
    assert np.allclose(np.abs(st.amps[list(st.support())]), 1 / np.sqrt(8))
    assert st.norm() == pytest.approx(1.0)


def test_distinct_cosets_are_orthogonal(code9):
    reps = code9.representatives
    a, b = coset_state(code9.C, reps[0]), coset_state(code9.C, reps[1])
    assert abs(a.inner(b)) < 1e-12


def test_pauli_matches_dense_matrix():
    rng = np.random.default_rng(2)
    amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    st = StateVector(4, amps / np.linalg.norm(amps))
    for e_b, e_p in [(0b0001, 0), (0, 0b0100), (0b1010, 0b0110), (0b1111, 0b1111)]:
        got = apply_pauli(st, e_b, e_p).amps
        assert np.allclose(got, dense_pauli(4, e_b, e_p) @ st.amps)
        assert apply_pauli(st, e_b, e_p).norm() == pytest.approx(1.0)


def test_x_is_an_involution():
    st = StateVector(3, np.arange(8, dtype=complex) / np.linalg.norm(np.arange(8)))
    assert np.allclose(apply_pauli(apply_pauli(st, 0b101), 0b101).amps, st.amps)


def test_cnot_truth_table():
    for idx in range(4):
        out = cnot(basis_state(2, idx), control=0, target=1)
        expected = idx ^ (0b10 if idx & 1 else 0)
        assert out.support() == {expected}


def test_extend_basis_example():
    # |1000000> (qubit 0 set) with a_l = a_r = 1 -> |0 1000000 1>
    out = extend(basis_state(7, 0b0000001), 1, 1)
    assert out.num_qubits == 9
    assert out.support() == {0b100000010}


def test_unextend_inverts_extend():
    rng = np.random.default_rng(4)
    amps = rng.normal(size=32) + 1j * rng.normal(size=32)
    st = StateVector(5, amps / np.linalg.norm(amps))
    back = unextend(extend(st, 2, 3), 2, 3)
    assert np.allclose(back.amps, st.amps)


def test_unextend_projects_out_inconsistent_copies():
    st = extend(basis_state(3, 0b001), 1, 1)
    broken = apply_pauli(st, e_b=1)  # flip the left copy only
    assert unextend(broken, 1, 1).norm() == pytest.approx(0.0)


def test_logical_state_is_stabilized(code9):
    st = logical_state(code9, generic_amplitudes(1))
    for row in code9.C.parity_check.rows:
        assert np.allclose(apply_pauli(st, e_p=row).amps, st.amps)
        assert np.allclose(apply_pauli(st, e_b=row).amps, st.amps)


def test_encoded_state_norm(code9):
    assert encoded_state(code9, generic_amplitudes(1)).norm() == pytest.approx(1.0)


def test_generic_amplitudes_detect_every_logical_pauli(code9):
    amps = generic_amplitudes(1)
    r1 = code9.representatives[1].bits
    ideal = logical_state(code9, amps)
    z_logical = next(v for v in code9.C.codewords() if not code9.C_perp.contains_word(v) and (v & r1).bit_count() % 2)
    for e_b, e_p in [(r1, 0), (0, z_logical), (r1, z_logical)]:
        assert abs(ideal.inner(apply_pauli(ideal, e_b, e_p))) < 1 - 1e-3


def test_pipeline_fidelity_one_on_success(code9):
    for slip in code9.slips:
        for j in range(code9.n_ext):
            eff = ChannelEffect(e_p=1 << j, slip=slip)
            report = run_pipeline(code9, 0, eff, branch=0)
            assert report.status is Status.SUCCESS
            assert oracle_pipeline(code9, None, eff, report) == pytest.approx(1.0, abs=1e-9)


def test_off_by_one_correction_is_caught(code9):
    eff = ChannelEffect(e_p=1 << 3, slip=0)
    report = run_pipeline(code9, 0, eff, branch=0)
    wrong = DecodeReport(**{**report.__dict__, "phase_correction": report.phase_correction << 1})
    assert oracle_pipeline(code9, None, eff, wrong) < 1 - 1e-6


def test_phase_failure_has_low_fidelity(code9):
    eff = ChannelEffect(e_p=0b110, slip=0)
    report = run_pipeline(code9, 0, eff, branch=0)
    assert report.status is Status.PHASE_FAILURE
    assert oracle_pipeline(code9, None, eff, report) < 1 - 1e-6


def test_wrong_slip_is_not_certified(code9):
    eff = ChannelEffect(slip=0)
    report = DecodeReport(Status.SYNC_FAILURE, 0, slip_estimate=1)
    with pytest.raises(ValueError):
        oracle_pipeline(code9, 0, eff, report)


def test_budget(code40):
    with pytest.raises(BudgetExceeded):
        basis_state(oracle.MAX_QUBITS + 1, 0)
    with pytest.raises(BudgetExceeded):
        oracle_pipeline(code40, 0, ChannelEffect())
