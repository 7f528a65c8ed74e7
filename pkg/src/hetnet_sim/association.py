"""User-to-BS association: ``k = argmax_i T_i * Z_i^-gamma`` over all BSs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import distances, path_gain
from .config import STRATEGIES, ScenarioConfig
from .scenario import NetworkSnapshot


@dataclass(frozen=True)
class StrategySpec:
    kind: str = "modified_sinr"
    range_bias_macro: float = 1.0
    range_bias_femto: float = 1.0
    bias_w: float = 0.0
    eq2_literal: bool = False

    def __post_init__(self) -> None:
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.range_bias_macro <= 0 or self.range_bias_femto <= 0:
            raise ValueError("range biases must be > 0")
        if self.bias_w < 0:
            raise ValueError("bias_w must be >= 0")

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "StrategySpec":
        return cls(
            kind=cfg.strategy,
            range_bias_macro=cfg.range_bias_macro,
            range_bias_femto=cfg.range_bias_femto,
            bias_w=cfg.bias_w,
            eq2_literal=cfg.eq2_literal,
        )


@dataclass
class AssociationOutcome:
    """``serving[u]`` is the chosen BS id (-1 if none), ``weight[u]`` its value."""

    serving: np.ndarray
    weight: np.ndarray

    def as_dict(self) -> dict[int, tuple[int, float]]:
        return {
            u: (int(b), float(w))
            for u, (b, w) in enumerate(zip(self.serving, self.weight))
            if b >= 0
        }


def _sum_excluding_self(terms: np.ndarray) -> np.ndarray:
    """``out[u, i] = sum_{j != i} terms[u, j]`` for non-negative terms.

    ``total - terms[u, i]`` cancels badly only where ``terms[u, i]``
    dominates the row, i.e. at the row maximum; that entry is summed
    directly instead.
    """
    n_users, n_bs = terms.shape
    if n_bs == 0:
        return np.zeros_like(terms)
    total = terms.sum(axis=1, keepdims=True)
    out = total - terms
    rows = np.arange(n_users)
    top = np.argmax(terms, axis=1)
    masked = terms.copy()
    masked[rows, top] = 0.0
    out[rows, top] = masked.sum(axis=1)
    return np.maximum(out, 0.0)


def modified_sinr_terms(
    snapshot: NetworkSnapshot,
    fading: np.ndarray,
    bias_w: float,
    gains: np.ndarray,
    eq2_literal: bool = False,
) -> np.ndarray:
    """Modified-SINR weight ``T_i`` for every (user, candidate BS) pair.

    Femtos transmit ``P_f/N_PRB,f + b`` in the weight, macros ``P_m/N_PRB``.
    Interferer terms carry path gain unless ``eq2_literal`` is set, in which
    case they are ``H_j * power_j`` only.
    """
    power = snapshot.prb_power_w + bias_w * snapshot.is_femto
    numer = fading * power
    interf = numer if eq2_literal else numer * gains
    return numer / (_sum_excluding_self(interf) + snapshot.config.noise_power_w)


def weight_matrix(
    snapshot: NetworkSnapshot, fading: np.ndarray, strategy: StrategySpec
) -> np.ndarray:
    """``T_i * Z_i^-gamma`` for every (user, BS) pair, shape (n_users, n_bs)."""
    cfg = snapshot.config
    gains = path_gain(
        distances(snapshot.user_positions, snapshot.bs_positions), cfg.path_loss_exponent
    )
    gains = np.asarray(gains).reshape(snapshot.n_users, snapshot.n_bs)
    if strategy.kind == "nearest":
        t = np.ones(snapshot.n_bs)
    elif strategy.kind == "max_power":
        t = snapshot.tx_power_w
    elif strategy.kind == "range_mod":
        bias = np.where(snapshot.is_femto, strategy.range_bias_femto, strategy.range_bias_macro)
        t = snapshot.tx_power_w * bias
    else:
        t = modified_sinr_terms(snapshot, fading, strategy.bias_w, gains, strategy.eq2_literal)
    return t * gains


def weight(
    strategy: StrategySpec, user: int, bs: int, snapshot: NetworkSnapshot, fading: np.ndarray
) -> float:
    return float(weight_matrix(snapshot, fading, strategy)[user, bs])


def modified_sinr_weight(
    user: int,
    bs: int,
    snapshot: NetworkSnapshot,
    fading: np.ndarray,
    b: float,
    eq2_literal: bool = False,
) -> float:
    """Modified-SINR association weight ``T_i`` alone (without the distance factor)."""
    gains = path_gain(
        distances(snapshot.user_positions, snapshot.bs_positions),
        snapshot.config.path_loss_exponent,
    )
    gains = np.asarray(gains).reshape(snapshot.n_users, snapshot.n_bs)
    return float(modified_sinr_terms(snapshot, fading, b, gains, eq2_literal)[user, bs])


def associate_all(
    snapshot: NetworkSnapshot, fading: np.ndarray, strategy: StrategySpec
) -> AssociationOutcome:
    """Argmax association; ties go to the lowest BS id."""
    if snapshot.n_bs == 0 or snapshot.n_users == 0:
        return AssociationOutcome(
            np.full(snapshot.n_users, -1, dtype=np.int64), np.zeros(snapshot.n_users)
        )
    w = weight_matrix(snapshot, fading, strategy)
    serving = np.argmax(w, axis=1).astype(np.int64)
    return AssociationOutcome(serving, w[np.arange(snapshot.n_users), serving])
