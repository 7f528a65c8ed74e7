"""Per-user SINR and rate, rate distribution, load factors and class averages."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import AllocationMap
from .scenario import NetworkSnapshot
from .spectrum import overlap_matrix

SUBSCRIBER = "subscriber"
OTHER = "other_associated"
REJECTED = "rejected"


class ConsistencyError(RuntimeError):
    """Allocation and snapshot disagree about who serves a user."""


def delta_grid(lo: float = 1e3, hi: float = 1e8, points: int = 50) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), points)


def received_prb_power(snapshot: NetworkSnapshot, fading: np.ndarray, gains: np.ndarray) -> np.ndarray:
    """Per-PRB received power ``P_j/N_PRB,j * |h|^2 * path gain`` for every link."""
    return fading * gains * snapshot.prb_power_w


def sinr_all(
    snapshot: NetworkSnapshot,
    allocation: AllocationMap,
    fading: np.ndarray,
    gains: np.ndarray,
    interference_model: str = "allocated",
    noise_model: str = "literal",
) -> np.ndarray:
    """SINR of every served user (0 for unserved users).

    Each interferer contributes its per-PRB received power times the number
    of the user's PRBs it is active on. ``noise_model="literal"`` adds N_0
    once regardless of the user's PRB count; ``"per_prb_scaled"`` adds
    ``alpha * N_0 / N_PRB``.
    """
    cfg = snapshot.config
    n_users = snapshot.n_users
    out = np.zeros(n_users)
    served = np.flatnonzero(allocation.serving >= 0)
    if served.size == 0:
        return out
    rx = received_prb_power(snapshot, fading[served], gains[served])
    active = allocation.active if interference_model == "allocated" else snapshot.prb_mask()
    beta = overlap_matrix(allocation.user_prbs[served], active).astype(float)
    rows = np.arange(served.size)
    serving = allocation.serving[served]
    beta[rows, serving] = 0.0
    alpha = allocation.alpha[served].astype(float)
    signal = alpha * rx[rows, serving]
    interference = (beta * rx).sum(axis=1)
    if noise_model == "literal":
        noise = cfg.noise_power_w
    else:
        noise = alpha * cfg.noise_power_w / cfg.total_prbs
    out[served] = signal / (interference + noise)
    return out


def sinr(
    user: int,
    bs: int,
    snapshot: NetworkSnapshot,
    allocation: AllocationMap,
    fading: np.ndarray,
    gains: np.ndarray,
    interference_model: str = "allocated",
    noise_model: str = "literal",
) -> float:
    if allocation.serving[user] != bs or allocation.alpha[user] < 1:
        raise ConsistencyError(f"user {user} is not served by BS {bs}")
    values = sinr_all(snapshot, allocation, fading, gains, interference_model, noise_model)
    return float(values[user])


def rate(alpha, prb_bandwidth: float, sinr_value):
    """Shannon rate over ``alpha`` PRBs in bits/s."""
    spectral = np.log1p(np.asarray(sinr_value, dtype=float)) / np.log(2.0)
    out = np.asarray(alpha, dtype=float) * prb_bandwidth * spectral
    return float(out) if out.ndim == 0 else out


def rate_distribution(rates, deltas) -> np.ndarray | None:
    """``Pr[R > delta | R > 0]`` at each threshold; ``None`` if nobody is served."""
    r = np.asarray(rates, dtype=float)
    served = np.sort(r[r > 0])
    if served.size == 0:
        return None
    deltas = np.asarray(deltas, dtype=float)
    above = served.size - np.searchsorted(served, deltas, side="right")
    return above / served.size


def class_averages(rates, subscriber_mask) -> tuple[float | None, float | None, float | None]:
    """Mean rate of all served users, of home-femto subscribers, and their ratio."""
    r = np.asarray(rates, dtype=float)
    sub = np.asarray(subscriber_mask, dtype=bool)
    served = r > 0
    if not served.any():
        return None, None, None
    avg_all = float(r[served].mean())
    sub_served = served & sub
    if not sub_served.any():
        return avg_all, None, None
    avg_sub = float(r[sub_served].mean())
    return avg_all, avg_sub, avg_sub / avg_all


@dataclass
class TierLoad:
    requests: int
    served: int
    rejected: int
    used_prbs: int
    capacity_prbs: int

    @property
    def used_prb_fraction(self) -> float:
        return self.used_prbs / self.capacity_prbs if self.capacity_prbs else 0.0


@dataclass
class DropReport:
    """Per-user records and aggregates of one drop."""

    serving: np.ndarray
    requested: np.ndarray
    reason: np.ndarray
    alpha: np.ndarray
    sinr: np.ndarray
    rate: np.ndarray
    user_class: np.ndarray
    psi: np.ndarray | None
    deltas: np.ndarray
    macro: TierLoad
    femto: TierLoad
    avg_rate_associated: float | None
    avg_rate_subscriber: float | None
    ratio: float | None
    rejected_access: int
    rejected_capacity: int

    @property
    def n_users(self) -> int:
        return len(self.serving)

    @property
    def rejected_total(self) -> int:
        return self.rejected_access + self.rejected_capacity

    @property
    def femto_association_fraction(self) -> float:
        return self.femto.requests / self.n_users if self.n_users else 0.0

    @property
    def femto_served_fraction(self) -> float:
        return self.femto.served / self.n_users if self.n_users else 0.0

    def served_rates(self) -> np.ndarray:
        return self.rate[self.serving >= 0]

    def psi_at(self, delta: float) -> float | None:
        return None if self.psi is None else float(rate_distribution(self.rate, [delta])[0])

    def records(self) -> list[dict]:
        return [
            {
                "user": u,
                "serving_bs": int(self.serving[u]),
                "reason": str(self.reason[u]),
                "alpha": int(self.alpha[u]),
                "sinr": float(self.sinr[u]),
                "rate_bps": float(self.rate[u]),
                "class": str(self.user_class[u]),
            }
            for u in range(self.n_users)
        ]


def tier_load(
    snapshot: NetworkSnapshot, requested: np.ndarray, allocation: AllocationMap, femto: bool
) -> TierLoad:
    cfg = snapshot.config
    is_tier = snapshot.is_femto if femto else ~snapshot.is_femto
    req = int(np.sum(is_tier[requested[requested >= 0]]))
    srv_bs = allocation.serving[allocation.serving >= 0]
    srv = int(np.sum(is_tier[srv_bs]))
    n_tier = int(is_tier.sum())
    capacity = n_tier * (cfg.femto_prbs if femto else cfg.total_prbs)
    used = int(allocation.active[is_tier].sum())
    return TierLoad(req, srv, req - srv, used, capacity)
