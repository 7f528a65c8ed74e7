"""Two-tier macro/femto OFDMA downlink Monte Carlo simulator."""

__version__ = "0.1.0"

from .config import ConfigError, ScenarioConfig, SweepSpec, desk_config, load_config
from .simulation import DropState, evaluate, realize, simulate_drop

__all__ = [
    "ConfigError",
    "DropState",
    "ScenarioConfig",
    "SweepSpec",
    "desk_config",
    "evaluate",
    "load_config",
    "realize",
    "simulate_drop",
]
