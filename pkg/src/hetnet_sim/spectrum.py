"""PRB grid, femto-tier fragmentation and overlap counting."""
from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet

import numpy as np

from .config import ConfigError


@dataclass(frozen=True)
class Fragment:
    index: int
    start: int
    stop: int

    @property
    def prb_indices(self) -> range:
        return range(self.start, self.stop)

    def __len__(self) -> int:
        return self.stop - self.start


def fragment_band(total_prbs: int, n_fragments: int) -> list[Fragment]:
    """Split ``0..total_prbs-1`` into equal contiguous fragments."""
    if total_prbs < 1 or n_fragments < 1 or total_prbs % n_fragments:
        raise ConfigError(
            "n_fragments",
            f"must be a positive divisor of total_prbs={total_prbs}, got {n_fragments}",
        )
    size = total_prbs // n_fragments
    return [Fragment(f, f * size, (f + 1) * size) for f in range(n_fragments)]


def assign_fragments(
    n_femtos: int, fragments: list[Fragment], rng: np.random.Generator
) -> np.ndarray:
    """Uniform, independent fragment index per femto (uncoordinated)."""
    return rng.integers(0, len(fragments), size=n_femtos, dtype=np.int64)


def overlap_count(user_prbs: AbstractSet[int], interferer_active: AbstractSet[int]) -> int:
    return len(user_prbs & interferer_active)


def overlap_matrix(user_masks: np.ndarray, active_masks: np.ndarray) -> np.ndarray:
    """Overlap counts for every (user, BS) pair from boolean PRB masks.

    ``user_masks`` is (n_users, N_PRB), ``active_masks`` is (n_bs, N_PRB).
    """
    return user_masks.astype(np.int64) @ active_masks.astype(np.int64).T
