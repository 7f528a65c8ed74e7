"""Fair, equal-power PRB partitioning per base station."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .access_control import AdmissionResult


@dataclass
class AllocationMap:
    """Per-user PRB sets as a boolean (n_users, N_PRB) mask.

    ``serving[u]`` is -1 for users that are not served; ``alpha[u]`` is the
    PRB count. ``active`` is the (n_bs, N_PRB) mask of PRBs in use per BS.
    """

    serving: np.ndarray
    alpha: np.ndarray
    user_prbs: np.ndarray
    active: np.ndarray
    capacity_rejected: dict[int, list[int]] = field(default_factory=dict)

    def prb_indices(self, user: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.user_prbs[user]).tolist())

    def active_prbs(self, bs: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.active[bs]).tolist())


def allocate_fair(
    prb_set: Sequence[int], admitted: Sequence[int]
) -> tuple[dict[int, list[int]], list[int]]:
    """Split ``prb_set`` into contiguous blocks over ``admitted`` (ascending id).

    With U users and P PRBs: if U <= P the first ``P mod U`` users get
    ``ceil(P/U)`` PRBs and the rest ``floor(P/U)``; otherwise the first P
    users get one PRB each and the others are returned as rejected.
    """
    prbs = sorted(prb_set)
    users = sorted(admitted)
    p, u = len(prbs), len(users)
    if u == 0:
        return {}, []
    served, rejected = users[:p], users[p:]
    base, extra = divmod(p, len(served))
    out: dict[int, list[int]] = {}
    pos = 0
    for k, user in enumerate(served):
        n = base + (1 if k < extra else 0)
        out[user] = prbs[pos : pos + n]
        pos += n
    return out, rejected


def active_prbs(allocation: dict[int, list[int]]) -> frozenset[int]:
    return frozenset(i for block in allocation.values() for i in block)


def allocate_all(snapshot, admissions: list[AdmissionResult]) -> AllocationMap:
    n_users, n_prb = snapshot.n_users, snapshot.config.total_prbs
    serving = np.full(n_users, -1, dtype=np.int64)
    alpha = np.zeros(n_users, dtype=np.int64)
    user_prbs = np.zeros((n_users, n_prb), dtype=bool)
    active = np.zeros((snapshot.n_bs, n_prb), dtype=bool)
    rejected: dict[int, list[int]] = {}
    for adm in admissions:
        prb_range = snapshot.prb_range(adm.bs)
        blocks, over = allocate_fair(prb_range, adm.admitted)
        for user, block in blocks.items():
            serving[user] = adm.bs
            alpha[user] = len(block)
            user_prbs[user, block[0] : block[-1] + 1] = True
            active[adm.bs, block[0] : block[-1] + 1] = True
        if over:
            rejected[adm.bs] = over
    return AllocationMap(serving, alpha, user_prbs, active, rejected)

