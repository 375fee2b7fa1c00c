"""Link-level simulator for cooperative LEO satellite swarm downlink.

A trail-formation swarm transmits jointly to a multi-antenna ground
station. The package models the in-plane pass geometry, LOS channels with a
configurable link budget, a distributed geometry-based precoder and
equalizer next to their centralized CSI baselines, the orthogonal
inter-satellite spacing design, and a reproducible Monte Carlo sweep
engine with CSV/JSON output.
"""

from .channel import ArrayConfig, ChannelSet, LinkBudget, LossConfig, channel_set
from .equalization import Equalizer, geometric_equalizer, optimal_equalizer
from .errors import (
    InvalidConfig,
    InvalidInput,
    NoConvergence,
    NoRoot,
    NumericalError,
    SwarmLinkError,
)
from .geometry import (
    OrbitConfig,
    PointingPolicy,
    SatelliteState,
    SwarmGeometry,
    elevation_from_polar,
    place_swarm,
    polar_from_elevation,
    slant_range,
)
from .precoding import PowerAllocation, Precoder, geometric_precoder, svd_precoder, waterfilling
from .rates import RateReport, capacity, rate_ideal_rx, rate_linear, rate_upper_geo, sinr_per_stream
from .scenario import ScenarioConfig, SweepSpec, config_digest, load_scenario, parse_scenario
from .sim import SweepRecord, parse_results_csv, run_point, run_sweep, serialize_results
from .spacing import (
    SpacingQuery,
    SpacingResult,
    delta_phi,
    optimal_spacing,
    orthogonality_defect,
    relaxed_check,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "ChannelSet",
    "Equalizer",
    "InvalidConfig",
    "InvalidInput",
    "LinkBudget",
    "LossConfig",
    "NoConvergence",
    "NoRoot",
    "NumericalError",
    "OrbitConfig",
    "PointingPolicy",
    "PowerAllocation",
    "Precoder",
    "RateReport",
    "SatelliteState",
    "ScenarioConfig",
    "SpacingQuery",
    "SpacingResult",
    "SwarmGeometry",
    "SwarmLinkError",
    "SweepRecord",
    "SweepSpec",
    "capacity",
    "channel_set",
    "config_digest",
    "delta_phi",
    "elevation_from_polar",
    "geometric_equalizer",
    "geometric_precoder",
    "load_scenario",
    "optimal_equalizer",
    "optimal_spacing",
    "orthogonality_defect",
    "parse_results_csv",
    "parse_scenario",
    "place_swarm",
    "polar_from_elevation",
    "rate_ideal_rx",
    "rate_linear",
    "rate_upper_geo",
    "relaxed_check",
    "run_point",
    "run_sweep",
    "serialize_results",
    "sinr_per_stream",
    "slant_range",
    "svd_precoder",
    "waterfilling",
]
