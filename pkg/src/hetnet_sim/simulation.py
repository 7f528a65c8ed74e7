"""One Monte Carlo drop: deploy, fade, associate, admit, allocate, measure."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import access_control as ac
from .allocation import AllocationMap, allocate_all
from .association import AssociationOutcome, StrategySpec, associate_all
from .channel import distances, path_gain, sample_fading
from .config import ScenarioConfig
from .metrics import (
    OTHER,
    REJECTED,
    SUBSCRIBER,
    DropReport,
    class_averages,
    delta_grid,
    rate,
    rate_distribution,
    sinr_all,
    tier_load,
)
from .scenario import NetworkSnapshot, build_snapshot

SeedLike = int | np.random.SeedSequence


def drop_seed(base_seed: int, cell_index: int, drop_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(base_seed, spawn_key=(cell_index, drop_index))


@dataclass
class DropState:
    """Everything a drop computed, for inspection and tests."""

    snapshot: NetworkSnapshot
    fading: np.ndarray
    gains: np.ndarray
    association: AssociationOutcome
    admissions: list[ac.AdmissionResult]
    allocation: AllocationMap
    report: DropReport


def realize(config: ScenarioConfig, seed: SeedLike) -> tuple[NetworkSnapshot, np.ndarray]:
    """Snapshot and fading table for a seed; independent of bias and strategy."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    deploy_ss, fade_ss = ss.spawn(2)
    snapshot = build_snapshot(config, np.random.default_rng(deploy_ss))
    fading = sample_fading(np.random.default_rng(fade_ss), snapshot.n_users, snapshot.n_bs)
    return snapshot, fading


def link_gains(snapshot: NetworkSnapshot) -> np.ndarray:
    g = path_gain(
        distances(snapshot.user_positions, snapshot.bs_positions),
        snapshot.config.path_loss_exponent,
    )
    return np.asarray(g).reshape(snapshot.n_users, snapshot.n_bs)


def evaluate(
    snapshot: NetworkSnapshot, fading: np.ndarray, config: ScenarioConfig | None = None
) -> DropState:
    """Run association through measurement on a fixed realization.

    ``config`` overrides the snapshot's association/access/metric settings
    (strategy, bias, policy, interference and noise models) so several
    settings can share one realization.
    """
    cfg = config or snapshot.config
    gains = link_gains(snapshot)
    outcome = associate_all(snapshot, fading, StrategySpec.from_config(cfg))
    admissions = ac.admit_all(snapshot, outcome.serving, cfg.access_policy)
    alloc = allocate_all(snapshot, admissions)
    sinr = sinr_all(snapshot, alloc, fading, gains, cfg.interference_model, cfg.noise_model)
    rates = rate(alloc.alpha, cfg.prb_bandwidth_hz, sinr)
    rates = np.where(alloc.serving >= 0, rates, 0.0)

    reason = np.full(snapshot.n_users, "", dtype=object)
    reason[outcome.serving < 0] = "unassociated"
    n_access = 0
    for adm in admissions:
        for u, why in adm.rejected.items():
            reason[u] = why
            n_access += 1
    n_capacity = 0
    for users in alloc.capacity_rejected.values():
        reason[users] = ac.CAPACITY
        n_capacity += len(users)

    home = (alloc.serving >= 0) & (alloc.serving == snapshot.subscriber_of)
    user_class = np.where(alloc.serving >= 0, OTHER, REJECTED).astype(object)
    user_class[home] = SUBSCRIBER
    avg_all, avg_sub, ratio = class_averages(rates, home)
    deltas = delta_grid(cfg.delta_min_bps, cfg.delta_max_bps, cfg.delta_points)

    report = DropReport(
        serving=alloc.serving,
        requested=outcome.serving,
        reason=reason,
        alpha=alloc.alpha,
        sinr=sinr,
        rate=rates,
        user_class=user_class,
        psi=rate_distribution(rates, deltas),
        deltas=deltas,
        macro=tier_load(snapshot, outcome.serving, alloc, femto=False),
        femto=tier_load(snapshot, outcome.serving, alloc, femto=True),
        avg_rate_associated=avg_all,
        avg_rate_subscriber=avg_sub,
        ratio=ratio,
        rejected_access=n_access,
        rejected_capacity=n_capacity,
    )
    return DropState(snapshot, fading, gains, outcome, admissions, alloc, report)


def simulate_drop(config: ScenarioConfig, seed: SeedLike) -> DropReport:
    snapshot, fading = realize(config, seed)
    return evaluate(snapshot, fading).report


def femto_association_fraction(
    realizations: list[tuple[NetworkSnapshot, np.ndarray]], config: ScenarioConfig
) -> float:
    """Mean share of users whose association request goes to a femto."""
    strategy = StrategySpec.from_config(config)
    fracs = []
    for snap, fad in realizations:
        serving = associate_all(snap, fad, strategy).serving
        fracs.append(np.mean(serving >= snap.n_macros) if snap.n_users else 0.0)
    return float(np.mean(fracs))


def calibrate_bias(
    config: ScenarioConfig,
    target_fraction: float,
    seeds: list[SeedLike],
    max_rel: float = 1e6,
    iterations: int = 40,
) -> float:
    """Smallest modified-SINR bias (watts) whose mean femto association
    fraction over ``seeds`` reaches ``target_fraction``.

    The fraction is non-decreasing in the bias, so a log-domain bisection
    between ``1e-6`` and ``max_rel`` femto per-PRB powers suffices. Returns
    0 when no bias is needed.
    """
    cfg = config.replace(strategy="modified_sinr")
    reals = [realize(cfg, s) for s in seeds]

    def frac(bias: float) -> float:
        return femto_association_fraction(reals, cfg.replace(bias_w=bias))

    if frac(0.0) >= target_fraction:
        return 0.0
    p = cfg.femto_prb_power_w
    lo, hi = np.log(1e-6 * p), np.log(max_rel * p)
    if frac(float(np.exp(hi))) < target_fraction:
        raise ValueError(f"femto fraction {target_fraction} unreachable with bias <= {max_rel} x P_f,prb")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if frac(float(np.exp(mid))) >= target_fraction:
            hi = mid
        else:
            lo = mid
    return float(np.exp(hi))
