"""Network realizations: hex-grid macros, PPP femtos and users."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import ScenarioConfig
from . import spectrum, access_control

# slack on the square boundary so lattice points computed in floating point
# at exactly x = side are kept
_EDGE_TOL = 1e-9


class Tier(str, Enum):
    MACRO = "macro"
    FEMTO = "femto"


@dataclass(frozen=True)
class BaseStation:
    id: int
    tier: Tier
    position: tuple[float, float]
    tx_power_w: float
    prb_set: frozenset[int]
    csg: frozenset[int] = frozenset()


@dataclass(frozen=True)
class User:
    id: int
    position: tuple[float, float]
    subscriber_of: int | None = None


@dataclass
class NetworkSnapshot:
    """One deployment, stored as arrays.

    Base-station ids are row indices of ``bs_positions``: macros first
    (``0 .. n_macros-1``), then femtos. ``femto_fragment[k]`` is the fragment
    index of femto ``n_macros + k``; ``subscriber_of[u]`` is the home femto
    BS id of user ``u`` or -1.
    """

    config: ScenarioConfig
    macro_positions: np.ndarray
    femto_positions: np.ndarray
    user_positions: np.ndarray
    femto_fragment: np.ndarray
    subscriber_of: np.ndarray
    fragments: list[spectrum.Fragment] = field(repr=False)

    @property
    def n_macros(self) -> int:
        return len(self.macro_positions)

    @property
    def n_femtos(self) -> int:
        return len(self.femto_positions)

    @property
    def n_bs(self) -> int:
        return self.n_macros + self.n_femtos

    @property
    def n_users(self) -> int:
        return len(self.user_positions)

    @property
    def bs_positions(self) -> np.ndarray:
        return np.vstack([self.macro_positions, self.femto_positions])

    @property
    def is_femto(self) -> np.ndarray:
        return np.arange(self.n_bs) >= self.n_macros

    @property
    def tx_power_w(self) -> np.ndarray:
        cfg = self.config
        return np.where(self.is_femto, cfg.femto_tx_power_w, cfg.macro_tx_power_w)

    @property
    def prb_count(self) -> np.ndarray:
        """PRBs each BS may use (N_PRB for macros, the fragment size for femtos)."""
        cfg = self.config
        return np.where(self.is_femto, cfg.femto_prbs, cfg.total_prbs)

    @property
    def prb_power_w(self) -> np.ndarray:
        return self.tx_power_w / self.prb_count

    def prb_mask(self) -> np.ndarray:
        """Boolean (n_bs, N_PRB) matrix of each BS's usable PRBs."""
        cfg = self.config
        mask = np.zeros((self.n_bs, cfg.total_prbs), dtype=bool)
        mask[: self.n_macros] = True
        for k, f in enumerate(self.femto_fragment):
            frag = self.fragments[f]
            mask[self.n_macros + k, frag.start : frag.stop] = True
        return mask

    def prb_range(self, bs: int) -> range:
        if bs < self.n_macros:
            return range(self.config.total_prbs)
        frag = self.fragments[self.femto_fragment[bs - self.n_macros]]
        return frag.prb_indices

    def csg(self, bs: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.subscriber_of == bs).tolist())

    def station(self, bs: int) -> BaseStation:
        femto = bs >= self.n_macros
        return BaseStation(
            id=bs,
            tier=Tier.FEMTO if femto else Tier.MACRO,
            position=tuple(self.bs_positions[bs].tolist()),
            tx_power_w=float(self.tx_power_w[bs]),
            prb_set=frozenset(self.prb_range(bs)),
            csg=self.csg(bs) if femto else frozenset(),
        )

    @property
    def stations(self) -> list[BaseStation]:
        return [self.station(i) for i in range(self.n_bs)]

    @property
    def users(self) -> list[User]:
        return [
            User(u, tuple(p), int(s) if s >= 0 else None)
            for u, (p, s) in enumerate(zip(self.user_positions.tolist(), self.subscriber_of))
        ]

    def equals(self, other: "NetworkSnapshot") -> bool:
        return (
            self.config == other.config
            and np.array_equal(self.macro_positions, other.macro_positions)
            and np.array_equal(self.femto_positions, other.femto_positions)
            and np.array_equal(self.user_positions, other.user_positions)
            and np.array_equal(self.femto_fragment, other.femto_fragment)
            and np.array_equal(self.subscriber_of, other.subscriber_of)
        )


def hex_lattice(side: float, spacing: float, origin: tuple[float, float]) -> np.ndarray:
    """Points ``origin + (j*d + (i mod 2)*d/2, i*d*sqrt(3)/2)`` inside ``[0, side]^2``."""
    row_pitch = spacing * math.sqrt(3) / 2
    x0, y0 = origin
    i_lo = math.floor((0 - y0) / row_pitch) - 1
    i_hi = math.ceil((side - y0) / row_pitch) + 1
    pts = []
    for i in range(i_lo, i_hi + 1):
        y = y0 + i * row_pitch
        if not -_EDGE_TOL <= y <= side + _EDGE_TOL:
            continue
        shift = (i % 2) * spacing / 2
        j_lo = math.floor((0 - x0 - shift) / spacing) - 1
        j_hi = math.ceil((side - x0 - shift) / spacing) + 1
        for j in range(j_lo, j_hi + 1):
            x = x0 + j * spacing + shift
            if -_EDGE_TOL <= x <= side + _EDGE_TOL:
                pts.append((min(max(x, 0.0), side), min(max(y, 0.0), side)))
    pts.sort(key=lambda p: (p[1], p[0]))
    return np.array(pts, dtype=float).reshape(-1, 2)


def place_macros(config: ScenarioConfig) -> np.ndarray:
    """Macro positions on a hexagonal lattice clipped to the square area.

    ``hex_anchor="corner"`` puts a lattice point at (0, 0) and keeps points
    on the closed square; for a 5 km side and 1 km spacing that is 33
    sites. ``"center"`` puts a lattice point at the area center.
    """
    side, d = config.area_side_m, config.macro_spacing_m
    origin = (0.0, 0.0) if config.hex_anchor == "corner" else (side / 2, side / 2)
    return hex_lattice(side, d, origin)


def sample_ppp(intensity: float, area_side: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on ``[0, area_side]^2`` as an (n, 2) array."""
    n = rng.poisson(intensity * area_side * area_side)
    return rng.uniform(0.0, area_side, size=(n, 2))


def build_snapshot(config: ScenarioConfig, rng: np.random.Generator) -> NetworkSnapshot:
    geo_rng, frag_rng, csg_rng = rng.spawn(3)
    macros = place_macros(config)
    femtos = sample_ppp(config.femto_intensity_per_m2, config.area_side_m, geo_rng)
    users = sample_ppp(config.user_intensity_per_m2, config.area_side_m, geo_rng)
    fragments = spectrum.fragment_band(config.total_prbs, config.n_fragments)
    femto_fragment = spectrum.assign_fragments(len(femtos), fragments, frag_rng)
    snap = NetworkSnapshot(
        config=config,
        macro_positions=macros,
        femto_positions=femtos,
        user_positions=users,
        femto_fragment=femto_fragment,
        subscriber_of=np.full(len(users), -1, dtype=np.int64),
        fragments=fragments,
    )
    registry = access_control.build_csg(snap, csg_rng)
    snap.subscriber_of = registry.subscriber_of(snap.n_users)
    return snap


def snapshot_from_arrays(
    config: ScenarioConfig,
    macros,
    femtos,
    users,
    femto_fragment=None,
    subscriber_of=None,
) -> NetworkSnapshot:
    """Hand-built snapshot for tests and toy instances."""
    macros = np.asarray(macros, dtype=float).reshape(-1, 2)
    femtos = np.asarray(femtos, dtype=float).reshape(-1, 2)
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    if femto_fragment is None:
        femto_fragment = np.zeros(len(femtos), dtype=np.int64)
    if subscriber_of is None:
        subscriber_of = np.full(len(users), -1, dtype=np.int64)
    return NetworkSnapshot(
        config=config,
        macro_positions=macros,
        femto_positions=femtos,
        user_positions=users,
        femto_fragment=np.asarray(femto_fragment, dtype=np.int64),
        subscriber_of=np.asarray(subscriber_of, dtype=np.int64),
        fragments=spectrum.fragment_band(config.total_prbs, config.n_fragments),
    )
