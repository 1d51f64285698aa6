from __future__ import annotations

import pytest

from qsync.experiments import (
    BEYOND_SCENARIOS,
    BudgetExceeded,
    SimulationConfig,
    beyond_contract_effect,
    count_up_to_weight,
    estimate_cases,
    run_exhaustive,
    run_simulation,
    vectors_up_to_weight,
    within_contract,
)
from qsync.frame_sim import ChannelEffect, trial_rng


def test_vector_enumeration_counts():
    vs = list(vectors_up_to_weight(6, 2))
    assert len(vs) == len(set(vs)) == count_up_to_weight(6, 2) == 22
    assert max(v.bit_count() for v in vs) == 2


def test_estimate_matches_enumeration(code9):
    assert estimate_cases(code9, 0, 1) == 480
    assert run_exhaustive(code9).cases == 480


def test_budget_enforced(code9):
    with pytest.raises(BudgetExceeded):
        run_exhaustive(code9, 2, 2, budget=1000)


def test_within_contract(code40):
    assert within_contract(code40, ChannelEffect(e_b=1, e_p=0b111, slip=-4))
    assert not within_contract(code40, ChannelEffect(slip=6))
    assert not within_contract(code40, ChannelEffect(e_p=0b1111))
    assert not within_contract(code40, ChannelEffect(e_b=0b11))


def test_small_code_with_one_bit_flip_is_all_ok_or_beyond(code9):
    report = run_exhaustive(code9, 1, 1)
    assert report.contract_holds


def test_simulation_worker_independence(code40):
    cfg = SimulationConfig(trials=64, seed=9, p_bit=0.01, p_phase=0.02)
    assert run_simulation(code40, cfg, workers=1) == run_simulation(code40, cfg, workers=2)


@pytest.mark.parametrize("kwargs", [{"p_bit": -0.1}, {"channel": "burst"}, {"trials": -1}, {"slip_policy": "gauss"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimulationConfig(**{"trials": 1, "seed": 0, **kwargs})


@pytest.mark.parametrize("scenario", BEYOND_SCENARIOS)
def test_beyond_effects_are_outside_contract(code40, scenario):
    for t in range(200):
        assert not within_contract(code40, beyond_contract_effect(code40, scenario, trial_rng(1, t)))


def test_unknown_scenario(code40):
    with pytest.raises(ValueError):
        beyond_contract_effect(code40, "gremlins", trial_rng(0, 0))
