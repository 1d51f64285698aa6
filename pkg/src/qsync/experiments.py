"""Experiment drivers shared by the CLI and the test suite."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from qsync.frame_sim import (
    ChannelEffect,
    DecodeReport,
    Status,
    random_c_perp,
    run_pipeline,
    sample_bounded_channel,
    sample_iid_channel,
    trial_rng,
    window_weights,
)
from qsync.oracle import generic_amplitudes, oracle_pipeline
from qsync.qsync_code import QsyncCode

OK_STATUSES = (Status.SUCCESS, Status.DEGENERATE_SUCCESS)
RNG_NAME = f"numpy PCG64 seeded by SeedSequence(seed, spawn_key=(trial_id,)), numpy {np.__version__}"


class BudgetExceeded(ValueError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"estimated {estimate} cases exceeds the budget of {budget}")
        self.estimate = estimate
        self.budget = budget


def vectors_up_to_weight(length: int, max_weight: int) -> Iterator[int]:
    for w in range(max_weight + 1):
        for positions in combinations(range(length), w):
            v = 0
            for p in positions:
                v |= 1 << p
            yield v


def count_up_to_weight(length: int, max_weight: int) -> int:
    return sum(comb(length, w) for w in range(max_weight + 1))


def within_contract(code: QsyncCode, eff: ChannelEffect) -> bool:
    """Errors and slip fall inside the radii the construction guarantees."""
    if eff.slip not in code.slips:
        return False
    if eff.e_p.bit_count() > code.phase_radius:
        return False
    return max(window_weights(eff.e_b, code.n, code.n_ext)) <= code.bit_radius


@dataclass(frozen=True)
class Case:
    logical_index: int
    slip: int
    e_b: int
    e_p: int
    branch: int

    @property
    def effect(self) -> ChannelEffect:
        return ChannelEffect(self.e_b, self.e_p, self.slip)

    def describe(self, code: QsyncCode) -> dict:
        return {
            "logical_index": self.logical_index,
            "slip": self.slip,
            "e_b": format(self.e_b, f"0{code.n_ext}b")[::-1],
            "e_p": format(self.e_p, f"0{code.n_ext}b")[::-1],
            "branch_hex": format(self.branch, "x"),
        }


@dataclass
class ExhaustiveReport:
    cases: int = 0
    by_status: Counter = field(default_factory=Counter)
    within_contract: int = 0
    violations: list[dict] = field(default_factory=list)
    beyond_contract_failures: int = 0

    @property
    def contract_holds(self) -> bool:
        return not self.violations


def _branches(code: QsyncCode, branches) -> list[int]:
    if branches == "all":
        return list(code.C_perp.codewords())
    rng = np.random.default_rng(0)
    return [0] + [random_c_perp(code, rng) for _ in range(int(branches) - 1)]


def estimate_cases(code: QsyncCode, max_bit_weight: int, max_phase_weight: int, slips=None, branches="all") -> int:
    slips = list(code.slips) if slips is None else list(slips)
    nb = (1 << code.C_perp.k) if branches == "all" else int(branches)
    return (
        (1 << code.k_logical)
        * len(slips)
        * count_up_to_weight(code.n_ext, max_bit_weight)
        * count_up_to_weight(code.n_ext, max_phase_weight)
        * nb
    )


def exhaustive_cases(
    code: QsyncCode, max_bit_weight: int, max_phase_weight: int, slips=None, branches="all"
) -> Iterator[Case]:
    slips = list(code.slips) if slips is None else list(slips)
    branch_list = _branches(code, branches)
    for logical in range(1 << code.k_logical):
        for slip in slips:
            for e_b in vectors_up_to_weight(code.n_ext, max_bit_weight):
                for e_p in vectors_up_to_weight(code.n_ext, max_phase_weight):
                    for branch in branch_list:
                        yield Case(logical, slip, e_b, e_p, branch)


def run_exhaustive(
    code: QsyncCode,
    max_bit_weight: int = 0,
    max_phase_weight: int = 1,
    slips=None,
    branches="all",
    budget: int = 5_000_000,
) -> ExhaustiveReport:
    """Run every case; a violation is a non-success inside the guaranteed radii."""
    estimate = estimate_cases(code, max_bit_weight, max_phase_weight, slips, branches)
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)
    report = ExhaustiveReport()
    for case in exhaustive_cases(code, max_bit_weight, max_phase_weight, slips, branches):
        eff = case.effect
        result = run_pipeline(code, case.logical_index, eff, branch=case.branch)
        report.cases += 1
        report.by_status[result.status.value] += 1
        if within_contract(code, eff):
            report.within_contract += 1
            if result.status not in OK_STATUSES:
                report.violations.append({**case.describe(code), "status": result.status.value})
        elif result.status not in OK_STATUSES:
            report.beyond_contract_failures += 1
    return report


@dataclass
class AgreementReport:
    cases: int = 0
    certified: int = 0
    uncertifiable: int = 0
    max_success_deviation: float = 0.0
    min_failure_gap: float = 1.0
    disagreements: list[dict] = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return not self.disagreements


def check_agreement(
    code: QsyncCode,
    case: Case,
    report: DecodeReport,
    amplitudes: np.ndarray,
    agreement: AgreementReport,
    success_tol: float = 1e-9,
    failure_gap: float = 1e-6,
) -> float | None:
    """Compare one frame-simulator verdict with the state-vector fidelity."""
    agreement.cases += 1
    if report.slip_estimate != case.slip:
        agreement.uncertifiable += 1
        return None
    fid = oracle_pipeline(code, amplitudes, case.effect, report)
    agreement.certified += 1
    if report.status in OK_STATUSES:
        dev = abs(1.0 - fid)
        agreement.max_success_deviation = max(agreement.max_success_deviation, dev)
        if dev > success_tol:
            agreement.disagreements.append({**case.describe(code), "status": report.status.value, "fidelity": fid})
    else:
        gap = 1.0 - fid
        agreement.min_failure_gap = min(agreement.min_failure_gap, gap)
        if gap < failure_gap:
            agreement.disagreements.append({**case.describe(code), "status": report.status.value, "fidelity": fid})
    return fid


def run_agreement(
    code: QsyncCode,
    max_bit_weight: int = 0,
    max_phase_weight: int = 1,
    slips=None,
    branches="all",
    budget: int = 200_000,
    tamper=None,
) -> AgreementReport:
    """Frame simulator vs. state vector over an exhaustive case list.

    ``tamper`` optionally rewrites each DecodeReport before it is checked; it
    exists so negative controls can show that a wrong verdict is caught.
    """
    estimate = estimate_cases(code, max_bit_weight, max_phase_weight, slips, branches)
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)
    amps = generic_amplitudes(code.k_logical)
    agreement = AgreementReport()
    for case in exhaustive_cases(code, max_bit_weight, max_phase_weight, slips, branches):
        report = run_pipeline(code, case.logical_index, case.effect, branch=case.branch)
        if tamper is not None:
            report = tamper(code, case, report)
        check_agreement(code, case, report, amps, agreement)
    return agreement


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    seed: int
    p_bit: float = 0.0
    p_phase: float = 0.0
    slip_policy: str | int = "uniform"
    channel: str = "iid"
    max_bit_per_window: int | None = None
    max_phase: int | None = None

    def __post_init__(self):
        for name in ("p_bit", "p_phase"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.channel not in ("iid", "bounded"):
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.trials < 0:
            raise ValueError("trial count must be nonnegative")
        if self.slip_policy != "uniform" and not isinstance(self.slip_policy, int):
            raise ValueError("slip policy must be 'uniform' or an integer")


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    slip_true: int
    slip_est: int | None
    window_weights: tuple[int, ...]
    phase_weight: int
    status: str

    def row(self) -> list:
        return [
            self.trial_id,
            self.slip_true,
            "" if self.slip_est is None else self.slip_est,
            ";".join(map(str, self.window_weights)),
            self.phase_weight,
            self.status,
        ]


CSV_HEADER = ["trial_id", "slip_true", "slip_est", "bit_weight_in_each_window", "phase_weight", "status"]


def run_trial(code: QsyncCode, cfg: SimulationConfig, trial_id: int) -> TrialRecord:
    rng = trial_rng(cfg.seed, trial_id)
    logical = int(rng.integers(0, 1 << code.k_logical))
    if cfg.channel == "iid":
        eff = sample_iid_channel(code, rng, cfg.p_bit, cfg.p_phase, cfg.slip_policy)
    else:
        eff = sample_bounded_channel(code, rng, cfg.slip_policy, cfg.max_bit_per_window, cfg.max_phase)
    report = run_pipeline(code, logical, eff, rng=rng)
    return TrialRecord(
        trial_id,
        eff.slip,
        report.slip_estimate,
        tuple(window_weights(eff.e_b, code.n, code.n_ext)),
        eff.e_p.bit_count(),
        report.status.value,
    )


def _run_chunk(args) -> list[TrialRecord]:
    code, cfg, start, stop = args
    return [run_trial(code, cfg, t) for t in range(start, stop)]


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("QSYNC_THREADS", "1")))
    except ValueError:
        return 1


def run_simulation(code: QsyncCode, cfg: SimulationConfig, workers: int | None = None) -> list[TrialRecord]:
    """Seeded trial stream; results do not depend on the worker count."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or cfg.trials < 2 * workers:
        return [run_trial(code, cfg, t) for t in range(cfg.trials)]
    step = -(-cfg.trials // (4 * workers))
    chunks = [(code, cfg, s, min(s + step, cfg.trials)) for s in range(0, cfg.trials, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [rec for part in pool.map(_run_chunk, chunks) for rec in part]


def summarize(code: QsyncCode, cfg: SimulationConfig, records: list[TrialRecord]) -> dict:
    counts = Counter(r.status for r in records)
    total = len(records)
    return {
        "code": code.label,
        "descriptor_sha256": code.descriptor_hash(),
        "config": asdict(cfg),
        "rng": RNG_NAME,
        "trials": total,
        "counts": {s.value: counts.get(s.value, 0) for s in Status},
        "rates": {s.value: (counts.get(s.value, 0) / total if total else 0.0) for s in Status},
        "success_rate": counts.get(Status.SUCCESS.value, 0) / total if total else 0.0,
    }


BEYOND_SCENARIOS = ("slip_out_of_range", "bit_over_radius", "phase_over_radius")


def beyond_contract_effect(code: QsyncCode, scenario: str, rng: np.random.Generator) -> ChannelEffect:
    """One channel instance just outside the guaranteed region.

    * slip_out_of_range: no errors, slip 1-3 past either tolerance;
    * bit_over_radius: in-range slip, bit_radius + 1 flips inside the device window;
    * phase_over_radius: in-range slip, phase_radius + 1 phase flips anywhere.
    """
    n = code.n
    if scenario == "slip_out_of_range":
        choices = [-code.a_l - d for d in (1, 2, 3)] + [code.a_r + d for d in (1, 2, 3)]
        return ChannelEffect(0, 0, int(rng.choice(choices)))
    slip = int(rng.integers(-code.a_l, code.a_r + 1))
    if scenario == "bit_over_radius":
        e_b = 0
        for j in rng.choice(n, size=code.bit_radius + 1, replace=False):
            e_b |= 1 << (code.a_l + slip + int(j))
        return ChannelEffect(e_b, 0, slip)
    if scenario == "phase_over_radius":
        e_p = 0
        for j in rng.choice(code.n_ext, size=code.phase_radius + 1, replace=False):
            e_p |= 1 << int(j)
        return ChannelEffect(0, e_p, slip)
    raise ValueError(f"unknown scenario {scenario!r}")


def beyond_contract_rate(code: QsyncCode, scenario: str, trials: int, seed: int) -> float:
    """Fraction of trials that end in a failure status."""
    failures = 0
    for t in range(trials):
        rng = trial_rng(seed, t)
        logical = int(rng.integers(0, 1 << code.k_logical))
        eff = beyond_contract_effect(code, scenario, rng)
        if run_pipeline(code, logical, eff, rng=rng).status not in OK_STATUSES:
            failures += 1
    return failures / trials
