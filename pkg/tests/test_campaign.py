import random

import pytest

from gapbound.campaign import CampaignConfig, draw_function, run_campaign, run_trial
from gapbound.errors import ConfigError
from gapbound.expr import parse_function
from gapbound.gaps import polynomial_in_x_check
from gapbound.places import PlaceCluster, valuation


@pytest.mark.parametrize(
    "kwargs",
    [
        {"trials": 0},
        {"order": 6, "max_degree": 6},
        {"parameter_family": ()},
        {"parameter_family": ("t^2",)},
        {"seed": 2**64},
        {"coeff_bound": 0},
    ],
)
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        CampaignConfig(**kwargs).validate()


def test_draws_are_admissible():
    cfg = CampaignConfig(max_degree=3, coeff_bound=2)
    family = [parse_function(x) for x in cfg.parameter_family]
    rng = random.Random(5)
    for _ in range(30):
        f = draw_function(rng, cfg, family)
        assert not f.is_constant()
        assert valuation(f, PlaceCluster.at(0)) == 0
        assert not any(polynomial_in_x_check(f, x, 0) for x in family)
        assert max(f.num.degree, f.den.degree) <= 3


def test_trials_are_independent_of_scheduling():
    cfg = CampaignConfig(trials=4, order=30, seed=3, lemma_n=2, prop_n=2)
    doc = run_campaign(cfg)
    assert doc["pass"]
    assert [t["trial"] for t in doc["trials"]] == [0, 1, 2, 3]
    assert doc["trials"][2] == run_trial(cfg, 2)


def test_parallel_matches_serial():
    cfg = CampaignConfig(trials=4, order=30, seed=9, lemma_n=1, prop_n=1)
    serial = run_campaign(cfg)
    parallel = run_campaign(CampaignConfig(trials=4, order=30, seed=9, lemma_n=1, prop_n=1, workers=2))
    assert serial["trials"] == parallel["trials"]


def test_forced_sharp_family():
    doc = run_campaign(CampaignConfig(trials=1, parameter_family=("t",), forced_f="1 + t^3/(1 - t^2)"))
    assert doc["pass"] and doc["all_sharp"] and doc["min_slack"] == doc["max_slack"] == 0


@pytest.mark.slow
def test_campaign_with_full_checks():
    doc = run_campaign(CampaignConfig(trials=20, order=60, seed=2024, lemma_n=3, prop_n=3))
    assert doc["pass"] and not doc["failures"]
    assert doc["min_slack"] >= 0
