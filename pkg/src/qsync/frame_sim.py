"""Pauli-frame simulation of encode -> noisy, misaligned channel -> decode.

CSS coset states under X/Z noise evolve classically: the simulator pins one
C^perp branch of the encoded superposition, tracks the bit content of the
extended block, and carries the phase-error vector separately until it is
folded back onto the n core qubits.

All vectors are integers; bit ``j`` is extended position ``j`` of the block
P = (p_0, ..., p_{n+a_l+a_r-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from qsync.qsync_code import QsyncCode, read_slip


class Status(str, Enum):
    SUCCESS = "success"
    DEGENERATE_SUCCESS = "degenerate_success"
    BIT_FAILURE = "bit_failure"
    SYNC_FAILURE = "sync_failure"
    PHASE_FAILURE = "phase_failure"

    def __str__(self) -> str:
        return self.value


def _mask(width: int) -> int:
    return (1 << width) - 1


def extend_bits(core: int, n: int, a_l: int, a_r: int) -> int:
    """(last a_l bits of core, core, first a_r bits of core)."""
    left = core >> (n - a_l) if a_l else 0
    right = core & _mask(a_r)
    return left | (core << a_l) | (right << (a_l + n))


def fold_phase(e_p: int, n: int, a_l: int, a_r: int) -> int:
    """Fold an extended phase-error vector onto the core.

    Z on an edge copy propagates through the copying CNOT onto the core qubit
    it was copied from: left copies land on the last a_l core positions,
    right copies on the first a_r.
    """
    left = e_p & _mask(a_l)
    core = (e_p >> a_l) & _mask(n)
    right = (e_p >> (a_l + n)) & _mask(a_r)
    return core ^ (left << (n - a_l)) ^ right


def window_weights(e_b: int, n: int, n_ext: int) -> list[int]:
    """Weight of e_b on every length-n window of the extended block."""
    return [((e_b >> off) & _mask(n)).bit_count() for off in range(n_ext - n + 1)]


@dataclass(frozen=True)
class EncodedFrame:
    code: QsyncCode
    logical_index: int
    branch: int
    core: int
    bits: int


@dataclass(frozen=True)
class ChannelEffect:
    e_b: int = 0
    e_p: int = 0
    slip: int = 0


@dataclass(frozen=True)
class NoisyFrame:
    frame: EncodedFrame
    bits: int
    e_b: int
    e_p: int
    slip: int
    before: int = 0
    after: int = 0

    def window(self, offset: int) -> int:
        """n bits starting at extended position ``offset`` (may reach into neighbours)."""
        code = self.frame.code
        n, n_ext = code.n, code.n_ext
        if not -n_ext <= offset <= 2 * n_ext - n:
            raise ValueError(f"window offset {offset} reaches past the neighbouring blocks")
        stream = self.before | (self.bits << n_ext) | (self.after << (2 * n_ext))
        return (stream >> (offset + n_ext)) & _mask(n)


@dataclass(frozen=True)
class DecodeReport:
    status: Status
    slip_true: int
    slip_estimate: int | None = None
    window_bit_correction: int = 0
    outer_bit_corrections: int = 0
    bit_correction: int = 0
    bit_residual: int = 0
    folded_phase: int = 0
    phase_correction: int = 0

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS


def random_c_perp(code: QsyncCode, rng: np.random.Generator) -> int:
    """Uniformly random codeword of C^perp."""
    word = 0
    rows = code.C_perp.generator_rows
    for row, bit in zip(rows, rng.integers(0, 2, size=len(rows))):
        if bit:
            word ^= row
    return word


def encode(code: QsyncCode, logical_index: int, c_perp_sample: int = 0) -> EncodedFrame:
    """Branch ``c_perp_sample + r_i + g`` of the encoded state, extended by edge copies."""
    if not 0 <= logical_index < (1 << code.k_logical):
        raise ValueError(f"logical index {logical_index} out of range for k={code.k_logical}")
    if not code.C_perp.contains_word(c_perp_sample):
        raise ValueError("branch sample is not a codeword of C^perp")
    core = c_perp_sample ^ code.representatives[logical_index].bits ^ code.g.bits
    return EncodedFrame(code, logical_index, c_perp_sample, core, extend_bits(core, code.n, code.a_l, code.a_r))


def apply_channel(frame: EncodedFrame, eff: ChannelEffect, neighbours: tuple[int, int] = (0, 0)) -> NoisyFrame:
    """XOR the bit flips into the block; Z errors are diagonal and only recorded."""
    if eff.e_b >> frame.code.n_ext or eff.e_p >> frame.code.n_ext:
        raise ValueError("error vector longer than the extended block")
    return NoisyFrame(frame, frame.bits ^ eff.e_b, eff.e_b, eff.e_p, eff.slip, *neighbours)


def decode_stage1_window(code: QsyncCode, noisy: NoisyFrame, slip: int) -> tuple[int, int] | None:
    """Decode the window a device misaligned by ``slip`` sees; ``None`` on decoder failure."""
    window = noisy.window(code.a_l + slip)
    leader = code.decoder_D.correct(window)
    if leader is None:
        return None
    return window ^ leader, leader


def decode_stage2_sync(code: QsyncCode, corrected_window: int) -> int | None:
    return read_slip(code, corrected_window)


def decode_stage3_outer(code: QsyncCode, bits: int, slip_estimate: int) -> tuple[int, int] | None:
    """Clean the last-n then the first-n window of the (realigned) block.

    ``bits`` is the block content after stage 1; returns the corrected block
    and the XOR of the corrections applied here.
    """
    if slip_estimate not in code.slips:
        raise ValueError(f"slip estimate {slip_estimate} outside the code's tolerance")
    n, a = code.n, code.a_l + code.a_r
    applied = 0
    for off in (a, 0):
        leader = code.decoder_D.correct((bits >> off) & _mask(n))
        if leader is None:
            return None
        bits ^= leader << off
        applied ^= leader << off
    return bits, applied


def decode_stage4_phase(code: QsyncCode, e_p: int) -> tuple[int, int, bool]:
    """Return (folded, correction, ok); ok iff folded + correction lies in C^perp."""
    folded = fold_phase(e_p, code.n, code.a_l, code.a_r)
    correction = code.decoder_C.correct(folded)
    if correction is None:
        return folded, 0, False
    return folded, correction, code.C_perp.contains_word(folded ^ correction)


def neighbour_blocks(code: QsyncCode, rng: np.random.Generator) -> tuple[int, int]:
    """Two independently encoded noiseless blocks to surround the frame."""
    out = []
    for _ in range(2):
        idx = int(rng.integers(0, 1 << code.k_logical))
        out.append(encode(code, idx, random_c_perp(code, rng)).bits)
    return out[0], out[1]


def run_pipeline(
    code: QsyncCode,
    logical_index: int,
    eff: ChannelEffect,
    branch_seed: int = 0,
    *,
    branch: int | None = None,
    rng: np.random.Generator | None = None,
) -> DecodeReport:
    """Encode, apply ``eff`` and run the four decoding stages.

    The C^perp branch is drawn from ``rng`` (or one seeded by ``branch_seed``)
    unless given explicitly. Neighbouring blocks are only materialized when
    the slip pushes the device window out of the block.
    """
    if rng is None:
        rng = np.random.default_rng(branch_seed)
    if branch is None:
        branch = random_c_perp(code, rng)
    frame = encode(code, logical_index, branch)
    n, a_l = code.n, code.a_l
    offset = a_l + eff.slip
    neighbours = (0, 0)
    if offset < 0 or offset + n > code.n_ext:
        neighbours = neighbour_blocks(code, rng)
    noisy = apply_channel(frame, eff, neighbours)

    stage1 = decode_stage1_window(code, noisy, eff.slip)
    if stage1 is None:
        return DecodeReport(Status.BIT_FAILURE, eff.slip)
    window, leader = stage1
    in_block = (leader << offset) & _mask(code.n_ext) if offset >= 0 else leader >> -offset

    slip_est = decode_stage2_sync(code, window)
    if slip_est is None or slip_est != eff.slip:
        return DecodeReport(Status.SYNC_FAILURE, eff.slip, slip_est, leader, bit_correction=in_block)

    stage3 = decode_stage3_outer(code, noisy.bits ^ in_block, slip_est)
    if stage3 is None:
        return DecodeReport(Status.BIT_FAILURE, eff.slip, slip_est, leader, bit_correction=in_block)
    _, outer = stage3
    total = in_block ^ outer
    residual = eff.e_b ^ total
    degenerate = False
    if residual:
        s = (residual >> a_l) & _mask(n)
        if residual != extend_bits(s, n, a_l, code.a_r) or not code.C_perp.contains_word(s):
            return DecodeReport(Status.BIT_FAILURE, eff.slip, slip_est, leader, outer, total, residual)
        degenerate = True

    folded, correction, ok = decode_stage4_phase(code, eff.e_p)
    if not ok:
        status = Status.PHASE_FAILURE
    elif degenerate:
        status = Status.DEGENERATE_SUCCESS
    else:
        status = Status.SUCCESS
    return DecodeReport(status, eff.slip, slip_est, leader, outer, total, residual, folded, correction)


def trial_rng(seed: int, trial_id: int) -> np.random.Generator:
    """PCG64 stream for one trial, keyed by (master seed, trial id)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial_id,))))


def draw_slip(code: QsyncCode, rng: np.random.Generator, policy: str | int) -> int:
    if policy == "uniform":
        return int(rng.integers(-code.a_l, code.a_r + 1))
    return int(policy)


def sample_iid_channel(
    code: QsyncCode, rng: np.random.Generator, p_bit: float, p_phase: float, slip_policy: str | int = "uniform"
) -> ChannelEffect:
    """Independent X and Z flips per qubit (Y = joint X and Z)."""
    n_ext = code.n_ext
    xs = rng.random(n_ext) < p_bit
    zs = rng.random(n_ext) < p_phase
    e_b = sum(1 << j for j in np.flatnonzero(xs))
    e_p = sum(1 << j for j in np.flatnonzero(zs))
    return ChannelEffect(int(e_b), int(e_p), draw_slip(code, rng, slip_policy))


def _random_positions(rng: np.random.Generator, n_ext: int, w: int) -> int:
    bits = 0
    for j in rng.choice(n_ext, size=w, replace=False):
        bits |= 1 << int(j)
    return bits


def sample_bounded_channel(
    code: QsyncCode,
    rng: np.random.Generator,
    slip_policy: str | int = "uniform",
    max_bit_per_window: int | None = None,
    max_phase: int | None = None,
    max_tries: int = 1000,
) -> ChannelEffect:
    """Random errors clamped to the given weights.

    Bit flips: a weight is drawn uniformly from 0..(max per window * number of
    disjoint windows that fit), and placements are resampled until no length-n
    window exceeds the per-window cap; the weight drops by one when a draw
    keeps failing. Phase flips: weight uniform in 0..max_phase, positions
    uniform over the extended block.
    """
    n, n_ext = code.n, code.n_ext
    tb = code.bit_radius if max_bit_per_window is None else max_bit_per_window
    tp = code.phase_radius if max_phase is None else max_phase
    w = int(rng.integers(0, tb * -(-n_ext // n) + 1))
    e_b = 0
    while w > 0:
        for _ in range(max_tries):
            cand = _random_positions(rng, n_ext, w)
            if max(window_weights(cand, n, n_ext)) <= tb:
                e_b = cand
                break
        else:
            w -= 1
            continue
        break
    e_p = _random_positions(rng, n_ext, int(rng.integers(0, tp + 1)))
    return ChannelEffect(e_b, e_p, draw_slip(code, rng, slip_policy))
