"""Closed Subscriber Groups and femto admission policies."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

import numpy as np

if TYPE_CHECKING:
    from .scenario import NetworkSnapshot

ACCESS_DENIED = "access_denied"
CAPACITY = "capacity"


@dataclass
class CsgRegistry:
    members: dict[int, frozenset[int]] = field(default_factory=dict)

    def subscriber_of(self, n_users: int) -> np.ndarray:
        out = np.full(n_users, -1, dtype=np.int64)
        for bs, users in self.members.items():
            out[list(users)] = bs
        return out

    def csg(self, bs: int) -> frozenset[int]:
        return self.members.get(bs, frozenset())


@dataclass
class AdmissionResult:
    bs: int
    admitted: list[int]
    rejected: dict[int, str]


def build_csg(snapshot: "NetworkSnapshot", rng: np.random.Generator) -> CsgRegistry:
    """Pick up to ``csg_size`` unclaimed in-radius users per femto, in femto-id order.

    A user is claimed by at most one CSG.
    """
    cfg = snapshot.config
    registry = CsgRegistry()
    if snapshot.n_femtos == 0 or snapshot.n_users == 0:
        return registry
    claimed = np.zeros(snapshot.n_users, dtype=bool)
    radius2 = cfg.femto_radius_m**2
    for k, pos in enumerate(snapshot.femto_positions):
        bs = snapshot.n_macros + k
        d2 = ((snapshot.user_positions - pos) ** 2).sum(axis=1)
        eligible = np.flatnonzero((d2 <= radius2) & ~claimed)
        take = min(cfg.csg_size, len(eligible))
        chosen = rng.choice(eligible, size=take, replace=False) if take else eligible[:0]
        claimed[chosen] = True
        registry.members[bs] = frozenset(int(u) for u in chosen)
    return registry


def admit(
    bs: int,
    requests: Iterable[int],
    policy: str,
    csg: frozenset[int],
    is_femto: bool,
) -> AdmissionResult:
    """Filter one BS's association requests.

    Macros pass everything (capacity is enforced by allocation). Hybrid
    femtos serve only subscribers whenever at least one subscriber asks,
    and everyone otherwise.
    """
    requests = sorted(int(u) for u in requests)
    if not is_femto or policy == "open":
        return AdmissionResult(bs, requests, {})
    subs = [u for u in requests if u in csg]
    if policy == "hybrid" and not subs:
        return AdmissionResult(bs, requests, {})
    if policy not in ("closed", "hybrid"):
        raise ValueError(f"unknown access policy {policy!r}")
    rejected = {u: ACCESS_DENIED for u in requests if u not in csg}
    return AdmissionResult(bs, subs, rejected)


def admit_all(snapshot: "NetworkSnapshot", serving: np.ndarray, policy: str) -> list[AdmissionResult]:
    """Run admission for every BS; index of the result list is the BS id."""
    order = np.argsort(serving, kind="stable")
    counts = np.bincount(serving[serving >= 0], minlength=snapshot.n_bs)
    start = int(np.sum(serving < 0))
    results = []
    for bs in range(snapshot.n_bs):
        reqs = order[start : start + counts[bs]]
        start += counts[bs]
        femto = bs >= snapshot.n_macros
        csg = frozenset(np.flatnonzero(snapshot.subscriber_of == bs).tolist()) if femto else frozenset()
        results.append(admit(bs, reqs.tolist(), policy, csg, femto))
    return results
