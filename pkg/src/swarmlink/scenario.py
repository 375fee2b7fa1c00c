"""Scenario files: strict parsing, validation, and content digests.

A scenario is a TOML file with nested sections mapping 1:1 onto
:class:`ScenarioConfig`. Unknown keys are errors, as are missing required
keys. Physical quantities are converted to SI on load; sweep axis values
keep their interface units (km, dBW, or degrees, depending on the axis) so
results are labeled exactly like the input file.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import DEFAULT_SHADOW_SIGMA_TABLE_DB, ArrayConfig, LossConfig
from .errors import InvalidConfig
from .geometry import OrbitConfig
from .units import EARTH_RADIUS_M, dbw_to_watt, deg_to_rad, km_to_m

AXIS_INTER_SAT_DISTANCE = "inter_sat_distance"
AXIS_TRANSMIT_POWER = "transmit_power"
AXIS_MEAN_ELEVATION = "mean_elevation"
_AXES = (AXIS_INTER_SAT_DISTANCE, AXIS_TRANSMIT_POWER, AXIS_MEAN_ELEVATION)

AXIS_UNITS = {
    AXIS_INTER_SAT_DISTANCE: "km",
    AXIS_TRANSMIT_POWER: "dBW",
    AXIS_MEAN_ELEVATION: "deg",
}

_DIGEST_LENGTH = 12


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis with its grid.

    ``values`` are in the axis' interface unit (km for distance, dBW for
    power, degrees for mean elevation). ``time_average`` replaces the fixed
    mean elevation by an average over ``time_grid_points`` uniform points of
    the visible pass.
    """

    axis: str
    values: tuple[float, ...]
    theta_mean_deg: float | None = None
    time_average: bool = False
    time_grid_points: int = 121

    def __post_init__(self) -> None:
        if self.axis not in _AXES:
            raise InvalidConfig(
                f"unknown sweep axis {self.axis!r}; expected one of {_AXES}"
            )
        if len(self.values) == 0:
            raise InvalidConfig("sweep values must be nonempty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidConfig("sweep values must be strictly increasing")
        if self.time_average and self.time_grid_points < 2:
            raise InvalidConfig("time averaging needs at least 2 grid points")
        if self.axis == AXIS_MEAN_ELEVATION and self.time_average:
            raise InvalidConfig("a mean-elevation sweep cannot also time-average")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full experiment description, physical fields in SI units."""

    orbit: OrbitConfig
    num_rx_antennas: int
    total_tx_antennas: int
    carrier_freq_hz: float
    num_satellites: int
    inter_sat_distance_m: float | None
    min_elevation_rad: float
    total_tx_power_w: float
    noise_power_w: float
    loss: LossConfig
    sweep: SweepSpec
    seed: int
    trials: int

    def __post_init__(self) -> None:
        if self.num_satellites < 1:
            raise InvalidConfig("need at least one satellite")
        if self.total_tx_antennas % self.num_satellites != 0:
            raise InvalidConfig(
                f"total transmit antennas ({self.total_tx_antennas}) must be "
                f"divisible by the number of satellites ({self.num_satellites})"
            )
        if self.num_rx_antennas < self.num_satellites:
            raise InvalidConfig(
                f"need at least as many receive antennas "
                f"({self.num_rx_antennas}) as satellites ({self.num_satellites})"
            )
        if self.trials < 1:
            raise InvalidConfig("trial count must be at least 1")
        if self.total_tx_power_w <= 0.0 or self.noise_power_w <= 0.0:
            raise InvalidConfig("transmit and noise powers must be positive")
        if not 0.0 < self.min_elevation_rad <= math.pi / 2.0:
            raise InvalidConfig("minimum elevation must be in (0, 90] degrees")
        if self.sweep.axis != AXIS_INTER_SAT_DISTANCE and self.inter_sat_distance_m is None:
            raise InvalidConfig(
                "swarm.inter_sat_distance_km is required unless sweeping it"
            )
        if (
            self.sweep.axis != AXIS_MEAN_ELEVATION
            and not self.sweep.time_average
            and self.sweep.theta_mean_deg is None
        ):
            raise InvalidConfig(
                "sweep.theta_mean_deg is required unless time averaging or "
                "sweeping the mean elevation"
            )

    @property
    def arrays(self) -> ArrayConfig:
        return ArrayConfig(
            num_tx_per_sat=self.total_tx_antennas // self.num_satellites,
            num_rx=self.num_rx_antennas,
            carrier_freq_hz=self.carrier_freq_hz,
        )

    @property
    def per_sat_power_w(self) -> float:
        return self.total_tx_power_w / self.num_satellites

    def pass_grid_rad(self) -> tuple[float, ...]:
        """Uniform mean-elevation grid spanning the visible pass."""
        n = self.sweep.time_grid_points
        lo = self.min_elevation_rad
        hi = math.pi - self.min_elevation_rad
        return tuple(lo + (hi - lo) * i / (n - 1) for i in range(n))


# TOML schema: section -> key -> (required, type). Booleans must be bool;
# ints are accepted where floats are expected.
_SCHEMA: dict[str, dict[str, tuple[bool, type]]] = {
    "": {"seed": (True, int), "trials": (True, int)},
    "orbit": {
        "altitude_km": (True, float),
        "earth_radius_km": (False, float),
    },
    "arrays": {
        "num_rx_antennas": (True, int),
        "total_tx_antennas": (True, int),
        "carrier_freq_ghz": (True, float),
    },
    "swarm": {
        "num_satellites": (True, int),
        "inter_sat_distance_km": (False, float),
        "min_elevation_deg": (True, float),
    },
    "power": {
        "total_tx_power_dbw": (True, float),
        "noise_power_dbw": (True, float),
    },
    "loss": {
        "tx_gain_dbi": (False, float),
        "rx_gain_dbi": (False, float),
        "shadow_sigma_table_db": (False, list),
        "shadow_fading_enabled": (False, bool),
        "gas_zenith_db": (False, float),
        "gas_enabled": (False, bool),
        "scintillation_sigma_db": (False, float),
        "scintillation_enabled": (False, bool),
        "clutter_db": (False, float),
        "gain_power_override": (False, float),
    },
    "sweep": {
        "axis": (True, str),
        "values": (True, list),
        "theta_mean_deg": (False, float),
        "time_average": (False, bool),
        "time_grid_points": (False, int),
    },
}


def _check_value(path: str, value, expected: type):
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidConfig(f"key {path!r} must be a number, got {value!r}")
        return float(value)
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidConfig(f"key {path!r} must be an integer, got {value!r}")
        return value
    if expected is bool:
        if not isinstance(value, bool):
            raise InvalidConfig(f"key {path!r} must be a boolean, got {value!r}")
        return value
    if expected is str:
        if not isinstance(value, str):
            raise InvalidConfig(f"key {path!r} must be a string, got {value!r}")
        return value
    if expected is list:
        if not isinstance(value, list):
            raise InvalidConfig(f"key {path!r} must be an array, got {value!r}")
        return value
    raise InvalidConfig(f"unsupported schema type for {path!r}")


def _validate_tree(raw: dict) -> dict:
    """Check the parsed TOML tree against the schema, returning it typed."""
    if not isinstance(raw, dict):
        raise InvalidConfig("scenario file must contain key/value sections")
    result: dict = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            if key not in _SCHEMA:
                raise InvalidConfig(f"unknown section {key!r}")
            section = {}
            for sub, sub_value in value.items():
                if sub not in _SCHEMA[key]:
                    raise InvalidConfig(f"unknown key {key + '.' + sub!r}")
                section[sub] = _check_value(f"{key}.{sub}", sub_value, _SCHEMA[key][sub][1])
            result[key] = section
        else:
            if key not in _SCHEMA[""]:
                raise InvalidConfig(f"unknown key {key!r}")
            result[key] = _check_value(key, value, _SCHEMA[""][key][1])
    for section, keys in _SCHEMA.items():
        for sub, (required, _) in keys.items():
            if not required:
                continue
            if section == "":
                if sub not in result:
                    raise InvalidConfig(f"missing required key {sub!r}")
            else:
                if section not in result or sub not in result[section]:
                    raise InvalidConfig(f"missing required key {section + '.' + sub!r}")
    return result


def build_scenario(raw: dict) -> ScenarioConfig:
    """Construct a validated :class:`ScenarioConfig` from a parsed tree."""
    tree = _validate_tree(raw)
    orbit_sec = tree["orbit"]
    arrays_sec = tree["arrays"]
    swarm_sec = tree["swarm"]
    power_sec = tree["power"]
    loss_sec = tree.get("loss", {})
    sweep_sec = tree["sweep"]

    orbit = OrbitConfig(
        altitude_m=km_to_m(orbit_sec["altitude_km"]),
        earth_radius_m=km_to_m(orbit_sec.get("earth_radius_km", EARTH_RADIUS_M / 1000.0)),
    )
    table = loss_sec.get("shadow_sigma_table_db")
    if table is not None:
        table = tuple(_check_value("loss.shadow_sigma_table_db[]", v, float) for v in table)
    else:
        table = DEFAULT_SHADOW_SIGMA_TABLE_DB
    loss = LossConfig(
        tx_gain_dbi=loss_sec.get("tx_gain_dbi", 17.8),
        rx_gain_dbi=loss_sec.get("rx_gain_dbi", 20.0),
        shadow_sigma_table_db=table,
        shadow_fading_enabled=loss_sec.get("shadow_fading_enabled", True),
        gas_zenith_db=loss_sec.get("gas_zenith_db", 0.5),
        gas_enabled=loss_sec.get("gas_enabled", True),
        scintillation_sigma_db=loss_sec.get("scintillation_sigma_db", 0.3),
        scintillation_enabled=loss_sec.get("scintillation_enabled", True),
        clutter_db=loss_sec.get("clutter_db", 0.0),
        gain_power_override=loss_sec.get("gain_power_override"),
    )
    values = tuple(
        _check_value("sweep.values[]", v, float) for v in sweep_sec["values"]
    )
    sweep = SweepSpec(
        axis=sweep_sec["axis"],
        values=values,
        theta_mean_deg=sweep_sec.get("theta_mean_deg"),
        time_average=sweep_sec.get("time_average", False),
        time_grid_points=sweep_sec.get("time_grid_points", 121),
    )
    distance_km = swarm_sec.get("inter_sat_distance_km")
    return ScenarioConfig(
        orbit=orbit,
        num_rx_antennas=arrays_sec["num_rx_antennas"],
        total_tx_antennas=arrays_sec["total_tx_antennas"],
        carrier_freq_hz=arrays_sec["carrier_freq_ghz"] * 1e9,
        num_satellites=swarm_sec["num_satellites"],
        inter_sat_distance_m=None if distance_km is None else km_to_m(distance_km),
        min_elevation_rad=deg_to_rad(swarm_sec["min_elevation_deg"]),
        total_tx_power_w=dbw_to_watt(power_sec["total_tx_power_dbw"]),
        noise_power_w=dbw_to_watt(power_sec["noise_power_dbw"]),
        loss=loss,
        sweep=sweep,
        seed=tree["seed"],
        trials=tree["trials"],
    )


def parse_scenario(text: str) -> ScenarioConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"scenario file is not valid TOML: {exc}") from exc
    return build_scenario(raw)


def load_scenario(path: "str | Path", overrides: "list[str] | None" = None) -> ScenarioConfig:
    """Load a scenario file, applying ``key=value`` overrides after parsing."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read scenario file {path}: {exc}") from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"{path}: not valid TOML: {exc}") from exc
    if overrides:
        raw = apply_overrides(raw, overrides)
    return build_scenario(raw)


def _parse_override_value(text: str):
    """Parse an override value as a TOML literal, falling back to a string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(raw: dict, overrides: "list[str]") -> dict:
    """Apply dotted-path ``key=value`` overrides onto a parsed tree."""
    tree = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise InvalidConfig(f"override {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        parts = key.strip().split(".")
        node = tree
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise InvalidConfig(f"override {key!r} does not address a section")
        node[parts[-1]] = _parse_override_value(value.strip())
    return tree


def _canonical(value):
    if isinstance(value, dict):
        return {k: _canonical(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return value


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Canonical nested-dict form of a scenario (SI units)."""
    return {
        "orbit": {
            "altitude_m": config.orbit.altitude_m,
            "earth_radius_m": config.orbit.earth_radius_m,
        },
        "arrays": {
            "num_rx_antennas": config.num_rx_antennas,
            "total_tx_antennas": config.total_tx_antennas,
            "carrier_freq_hz": config.carrier_freq_hz,
        },
        "swarm": {
            "num_satellites": config.num_satellites,
            "inter_sat_distance_m": config.inter_sat_distance_m,
            "min_elevation_rad": config.min_elevation_rad,
        },
        "power": {
            "total_tx_power_w": config.total_tx_power_w,
            "noise_power_w": config.noise_power_w,
        },
        "loss": {
            "tx_gain_dbi": config.loss.tx_gain_dbi,
            "rx_gain_dbi": config.loss.rx_gain_dbi,
            "shadow_sigma_table_db": list(config.loss.shadow_sigma_table_db),
            "shadow_fading_enabled": config.loss.shadow_fading_enabled,
            "gas_zenith_db": config.loss.gas_zenith_db,
            "gas_enabled": config.loss.gas_enabled,
            "scintillation_sigma_db": config.loss.scintillation_sigma_db,
            "scintillation_enabled": config.loss.scintillation_enabled,
            "clutter_db": config.loss.clutter_db,
            "gain_power_override": config.loss.gain_power_override,
        },
        "sweep": {
            "axis": config.sweep.axis,
            "values": list(config.sweep.values),
            "theta_mean_deg": config.sweep.theta_mean_deg,
            "time_average": config.sweep.time_average,
            "time_grid_points": config.sweep.time_grid_points,
        },
        "seed": config.seed,
        "trials": config.trials,
    }


def config_digest(config: ScenarioConfig) -> str:
    """Short content hash of a scenario; changes iff any field changes."""
    payload = json.dumps(_canonical(scenario_to_dict(config)), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:_DIGEST_LENGTH]
