"""Scenario and sweep configuration, plus the key-value config file format.

A config file is a flat list of ``key = value`` lines (``#`` starts a
comment). Sweep keys (``n_fragments``, ``bias_w``, ``bias_rel``,
``strategy``, ``access_policy``) accept comma-separated lists; every other
key takes a single value.
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

STRATEGIES = ("nearest", "max_power", "range_mod", "modified_sinr")
ACCESS_POLICIES = ("open", "closed", "hybrid")
INTERFERENCE_MODELS = ("allocated", "full_band")
NOISE_MODELS = ("literal", "per_prb_scaled")
HEX_ANCHORS = ("corner", "center")

_SECTION = "hetnet"


class ConfigError(ValueError):
    """Raised when a configuration value violates its constraint."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Every tunable parameter of one simulation drop.

    Defaults reproduce the full-scale deployment (5 x 5 km, 33 macros,
    200 femtos and 5000 users on average, 100 PRBs of 180 kHz).
    """

    area_side_m: float = 5000.0
    macro_spacing_m: float = 1000.0
    macro_tx_power_dbm: float = 43.0
    femto_tx_power_dbm: float = 20.0
    femto_intensity_per_m2: float = 200.0 / 25e6
    user_intensity_per_m2: float = 5000.0 / 25e6
    total_prbs: int = 100
    prb_bandwidth_hz: float = 180e3
    n_fragments: int = 1
    path_loss_exponent: float = 3.0
    noise_power_w: float = 1e-12
    femto_radius_m: float = 200.0
    csg_size: int = 5
    bias_w: float = 0.0
    strategy: str = "modified_sinr"
    range_bias_macro: float = 1.0
    range_bias_femto: float = 1.0
    access_policy: str = "hybrid"
    interference_model: str = "allocated"
    noise_model: str = "literal"
    eq2_literal: bool = False
    hex_anchor: str = "corner"
    delta_min_bps: float = 1e3
    delta_max_bps: float = 1e8
    delta_points: int = 50
    rng_seed: int = 1
    num_drops: int = 1

    def __post_init__(self) -> None:
        validate_scenario(self)

    @property
    def macro_tx_power_w(self) -> float:
        return dbm_to_watts(self.macro_tx_power_dbm)

    @property
    def femto_tx_power_w(self) -> float:
        return dbm_to_watts(self.femto_tx_power_dbm)

    @property
    def femto_prbs(self) -> int:
        return self.total_prbs // self.n_fragments

    @property
    def macro_prb_power_w(self) -> float:
        return self.macro_tx_power_w / self.total_prbs

    @property
    def femto_prb_power_w(self) -> float:
        return self.femto_tx_power_w / self.femto_prbs

    @property
    def area_m2(self) -> float:
        return self.area_side_m**2

    def replace(self, **changes: Any) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def validate_scenario(cfg: ScenarioConfig) -> None:
    for key in (
        "area_side_m",
        "macro_spacing_m",
        "prb_bandwidth_hz",
        "noise_power_w",
        "femto_radius_m",
        "delta_min_bps",
        "delta_max_bps",
        "path_loss_exponent",
    ):
        if not getattr(cfg, key) > 0:
            raise ConfigError(key, "must be strictly positive")
    for key in ("femto_intensity_per_m2", "user_intensity_per_m2", "bias_w"):
        if not getattr(cfg, key) >= 0:
            raise ConfigError(key, "must be non-negative")
    for key in ("range_bias_macro", "range_bias_femto"):
        if not getattr(cfg, key) > 0:
            raise ConfigError(key, "must be strictly positive")
    if cfg.total_prbs < 1:
        raise ConfigError("total_prbs", "must be a positive integer")
    if cfg.n_fragments < 1 or cfg.total_prbs % cfg.n_fragments:
        raise ConfigError(
            "n_fragments",
            f"must be a positive divisor of total_prbs={cfg.total_prbs}, got {cfg.n_fragments}",
        )
    if cfg.csg_size < 0:
        raise ConfigError("csg_size", "must be >= 0")
    if cfg.num_drops < 1:
        raise ConfigError("num_drops", "must be >= 1")
    if cfg.delta_points < 1:
        raise ConfigError("delta_points", "must be >= 1")
    if cfg.delta_max_bps < cfg.delta_min_bps:
        raise ConfigError("delta_max_bps", "must be >= delta_min_bps")
    if not 0 <= cfg.rng_seed < 2**64:
        raise ConfigError("rng_seed", "must be a 64-bit unsigned integer")
    for key, allowed in (
        ("strategy", STRATEGIES),
        ("access_policy", ACCESS_POLICIES),
        ("interference_model", INTERFERENCE_MODELS),
        ("noise_model", NOISE_MODELS),
        ("hex_anchor", HEX_ANCHORS),
    ):
        if getattr(cfg, key) not in allowed:
            raise ConfigError(key, f"must be one of {', '.join(allowed)}")


@dataclass(frozen=True)
class SweepSpec:
    """Grid of sweep cells; each cell runs ``num_drops`` drops.

    ``bias_rel`` (multiples of the femto per-PRB power of each cell's
    fragment size) is an alternative to absolute ``bias_w``.
    """

    n_fragments: tuple[int, ...] = (1,)
    bias_w: tuple[float, ...] = (0.0,)
    strategy: tuple[str, ...] = ("modified_sinr",)
    access_policy: tuple[str, ...] = ("hybrid",)
    bias_rel: tuple[float, ...] | None = None
    num_drops: int = 1
    base_seed: int = 1

    def cells(self, base: ScenarioConfig) -> list[ScenarioConfig]:
        out = []
        biases = self.bias_rel if self.bias_rel is not None else self.bias_w
        for n_f in self.n_fragments:
            for bias in biases:
                for strategy in self.strategy:
                    for policy in self.access_policy:
                        cfg = base.replace(
                            n_fragments=n_f, strategy=strategy, access_policy=policy
                        )
                        bias_w = bias * cfg.femto_prb_power_w if self.bias_rel is not None else bias
                        out.append(cfg.replace(bias_w=bias_w))
        return out


SWEEP_KEYS = ("n_fragments", "bias_w", "bias_rel", "strategy", "access_policy")

_FIELD_TYPES: dict[str, type] = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def _field_kind(name: str) -> type:
    default = ScenarioConfig.__dataclass_fields__[name].default
    return type(default)


def _coerce(key: str, raw: str, kind: type) -> Any:
    text = raw.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            try:
                return int(text)
            except ValueError:
                as_float = float(text)
                if not as_float.is_integer():
                    raise
                return int(as_float)
        if kind is float:
            return float(text)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r} as {kind.__name__}") from None
    return text


def parse_text(text: str) -> dict[str, str]:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), delimiters=("=", ":")
    )
    parser.optionxform = str  # keep key case so typos are reported verbatim
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError("<file>", str(exc).replace("\n", " ")) from None
    return dict(parser[_SECTION])


def resolve(raw: Mapping[str, str]) -> tuple[ScenarioConfig, SweepSpec]:
    """Type-check raw string values and build the base config and sweep grid."""
    scalars: dict[str, Any] = {}
    sweep: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in _FIELD_TYPES and key != "bias_rel":
            raise ConfigError(key, "unknown key")
        if key in SWEEP_KEYS:
            kind = float if key == "bias_rel" else _field_kind(key)
            items = [v for v in value.split(",") if v.strip()]
            if not items:
                raise ConfigError(key, "list must be nonempty")
            sweep[key] = tuple(_coerce(key, v, kind) for v in items)
        else:
            scalars[key] = _coerce(key, value, _field_kind(key))
    if "bias_w" in sweep and "bias_rel" in sweep:
        raise ConfigError("bias_rel", "give either bias_w or bias_rel, not both")

    firsts = {k: v[0] for k, v in sweep.items() if k != "bias_rel"}
    base = ScenarioConfig(**scalars, **firsts)
    spec = SweepSpec(
        n_fragments=sweep.get("n_fragments", (base.n_fragments,)),
        bias_w=sweep.get("bias_w", (base.bias_w,)),
        strategy=sweep.get("strategy", (base.strategy,)),
        access_policy=sweep.get("access_policy", (base.access_policy,)),
        bias_rel=sweep.get("bias_rel"),
        num_drops=base.num_drops,
        base_seed=base.rng_seed,
    )
    # validate every cell up front so a bad list entry fails before any drop runs
    for key, values in sweep.items():
        for v in values:
            if key == "bias_rel":
                if v < 0:
                    raise ConfigError(key, "must be non-negative")
                continue
            try:
                base.replace(**{key: v})
            except ConfigError as exc:
                raise ConfigError(key, f"{v!r}: {exc}") from None
    return base, spec


def apply_overrides(raw: dict[str, str], overrides: Iterable[str]) -> dict[str, str]:
    out = dict(raw)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(item, "override must look like key=value")
        out[key.strip()] = value.strip()
    return out


def load_config(
    path: str | Path, overrides: Iterable[str] = ()
) -> tuple[ScenarioConfig, SweepSpec, dict[str, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from None
    raw = apply_overrides(parse_text(text), overrides)
    base, spec = resolve(raw)
    return base, spec, raw


def validate_config(text: str) -> tuple[ScenarioConfig, SweepSpec]:
    return resolve(parse_text(text))


def shipped_config(name: str) -> Path:
    """Path of a config bundled with the package (``table1`` or ``desk``)."""
    return Path(__file__).parent / "configs" / f"{name}.cfg"


def desk_config(**changes: Any) -> ScenarioConfig:
    """2 x 2 km scenario at the full-scale femto and user densities."""
    cfg = ScenarioConfig(area_side_m=2000.0)
    return cfg.replace(**changes) if changes else cfg

