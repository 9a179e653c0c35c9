"""Randomized verification campaigns.

Every trial draws a random reduced f with integer coefficients and runs
the full battery against each parameter in the family. Trial ``i`` uses
its own RNG seeded from ``(seed, i)``, so results do not depend on
scheduling and parallel runs merge back in trial order.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from . import __version__
from .algebra import Polynomial, RationalFunction, to_rational
from .errors import ConfigError, GapBoundError, VerificationFailure
from .expr import parse_function
from .gaps import polynomial_in_x_check, verify_bounds
from .lemmas import (
    check_height_decomposition,
    check_rr_identity,
    check_support_derivative,
    construct_auxiliary,
    derivative_valuation_sweep,
)
from .places import PlaceCluster, valuation
from .series import local_parameter_check

DEFAULT_FAMILY = ("t", "t + t^3", "t/(1 - t)")


@dataclass(frozen=True)
class CampaignConfig:
    trials: int = 100
    max_degree: int = 6
    coeff_bound: int = 10
    order: int = 100
    parameter_family: tuple = DEFAULT_FAMILY
    seed: int = 0
    point: object = 0
    lemma_n: int = 3
    prop_n: int = 3
    forced_f: Optional[str] = None
    workers: int = 1

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.max_degree < 1 or self.coeff_bound < 1:
            raise ConfigError("max_degree and coeff_bound must be positive")
        if self.order <= self.max_degree:
            raise ConfigError("order must exceed max_degree")
        if not self.parameter_family:
            raise ConfigError("parameter family is empty")
        if self.lemma_n < 0 or self.prop_n < 0 or self.workers < 1:
            raise ConfigError("lemma_n, prop_n must be non-negative and workers positive")
        if not -(2**63) <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        for text in self.parameter_family:
            try:
                local_parameter_check(parse_function(text), to_rational(self.point))
            except (GapBoundError, ValueError) as exc:
                raise ConfigError(f"bad parameter {text!r}: {exc}") from exc


def _random_poly(rng: random.Random, degree: int, bound: int) -> Polynomial:
    coeffs = [rng.randint(-bound, bound) for _ in range(degree)]
    lead = 0
    while not lead:
        lead = rng.randint(-bound, bound)
    return Polynomial(coeffs + [lead])


def draw_function(rng: random.Random, cfg: CampaignConfig, family: list) -> RationalFunction:
    """Random reduced f meeting the hypotheses for every parameter; degenerate
    draws are redrawn so that each trial counts a completed verification."""
    p = to_rational(cfg.point)
    while True:
        num = _random_poly(rng, rng.randint(0, cfg.max_degree), cfg.coeff_bound)
        den = _random_poly(rng, rng.randint(0, cfg.max_degree), cfg.coeff_bound)
        f = RationalFunction(num, den)
        if f.is_constant() or valuation(f, PlaceCluster.at(p)) != 0:
            continue
        if any(polynomial_in_x_check(f, x, p) for x in family):
            continue
        return f


def run_trial(cfg: CampaignConfig, index: int) -> dict:
    family = [parse_function(text) for text in cfg.parameter_family]
    rng = random.Random(f"{cfg.seed}:{index}")
    p = to_rational(cfg.point)
    f = parse_function(cfg.forced_f) if cfg.forced_f else draw_function(rng, cfg, family)
    record = {"trial": index, "f": f.to_string(), "results": [], "pass": True}
    for text, x in zip(cfg.parameter_family, family):
        entry = {"x": text}
        try:
            report = verify_bounds(f, x, p, cfg.order)
            entry.update(
                max_n=report.max_n,
                min_slack=report.min_slack,
                max_slack=report.max_slack,
                is_sharp=report.is_sharp,
                height=report.inputs.height_f,
                slope=report.inputs.slope,
            )
            ok = report.passed
            for n in range(1, min(cfg.lemma_n, report.max_n) + 1):
                res = construct_auxiliary(f, x, p, n, gaps=report.gaps)
                dec = check_height_decomposition(res.aux, f, x, n)
                ok = ok and res.holds and dec.holds
            if cfg.prop_n:
                ok = ok and all(c.holds for c in derivative_valuation_sweep(f, x, cfg.prop_n))
            entry["pass"] = ok
        except VerificationFailure as exc:
            entry.update(**{"pass": False, "error": str(exc), "dump": {k: str(v) for k, v in exc.dump.items()}})
        record["results"].append(entry)
        record["pass"] = record["pass"] and entry["pass"]
    return record


def _run_chunk(args):
    cfg, indices = args
    return [run_trial(cfg, i) for i in indices]


def run_campaign(cfg: CampaignConfig) -> dict:
    cfg.validate()
    family = [parse_function(text) for text in cfg.parameter_family]
    parameter_checks = []
    for text, x in zip(cfg.parameter_family, family):
        rr = check_rr_identity(x)
        support = check_support_derivative(x)
        parameter_checks.append(
            {
                "x": text,
                "rr_lhs": rr.lhs_sum,
                "rr_rhs": rr.rhs,
                "pass": rr.holds and all(s.holds for s in support),
            }
        )
    indices = list(range(cfg.trials))
    if cfg.workers > 1:
        chunks = [indices[i :: cfg.workers] for i in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_chunk, [(cfg, c) for c in chunks]))
        trials = sorted((t for part in parts for t in part), key=lambda t: t["trial"])
    else:
        trials = [run_trial(cfg, i) for i in indices]
    slacks = [
        (e["min_slack"], e["max_slack"])
        for t in trials
        for e in t["results"]
        if e.get("min_slack") is not None
    ]
    failures = [t["trial"] for t in trials if not t["pass"]]
    config = asdict(cfg)
    config["parameter_family"] = list(cfg.parameter_family)
    config["point"] = str(cfg.point)
    return {
        "version": __version__,
        "config": config,
        "parameter_checks": parameter_checks,
        "trials": trials,
        "min_slack": min((s[0] for s in slacks), default=None),
        "max_slack": max((s[1] for s in slacks), default=None),
        "all_sharp": all(e.get("is_sharp") for t in trials for e in t["results"]),
        "failures": failures,
        "pass": not failures and all(c["pass"] for c in parameter_checks),
    }


def campaign_text(doc: dict) -> str:
    cfg = doc["config"]
    lines = [
        f"gapbound {doc['version']} campaign: {cfg['trials']} trials, seed {cfg['seed']}, "
        f"order {cfg['order']}, degree <= {cfg['max_degree']}, |coeff| <= {cfg['coeff_bound']}",
    ]
    for c in doc["parameter_checks"]:
        lines.append(f"x = {c['x']}: Riemann-Roch {c['rr_lhs']} = {c['rr_rhs']}")
    lines.append(f"slack range over all trials: [{doc['min_slack']}, {doc['max_slack']}]")
    lines.append(f"failures: {len(doc['failures'])} {doc['failures'][:20]}")
    lines.append("PASS" if doc["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def campaign_csv(doc: dict) -> str:
    lines = ["trial,x,max_n,min_slack,max_slack,pass"]
    for t in doc["trials"]:
        for e in t["results"]:
            lines.append(
                f"{t['trial']},\"{e['x']}\",{e.get('max_n', '')},{e.get('min_slack', '')},"
                f"{e.get('max_slack', '')},{e['pass']}"
            )
    return "\n".join(lines) + "\n"
