"""Power-law path loss and Rayleigh power fading."""
from __future__ import annotations

import numpy as np

MIN_DISTANCE_M = 1.0


def path_gain(distance, exponent: float):
    """``max(distance, 1 m) ** -exponent``; works on scalars and arrays."""
    d = np.maximum(np.asarray(distance, dtype=float), MIN_DISTANCE_M)
    out = d ** (-exponent)
    return float(out) if out.ndim == 0 else out


def distances(user_positions: np.ndarray, bs_positions: np.ndarray) -> np.ndarray:
    diff = user_positions[:, None, :] - bs_positions[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def sample_fading(rng: np.random.Generator, n_users: int, n_bs: int) -> np.ndarray:
    """|h|^2 for every (user, BS) link: Exp(1), i.e. unit-variance complex Rayleigh.

    Drawn once per drop and shared by association and SINR evaluation.
    """
    return rng.standard_exponential(size=(n_users, n_bs))
