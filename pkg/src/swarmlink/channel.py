"""Steering vectors, link budgets, and LOS channel realizations.

Two channel models live here. The rank-one geometric approximation builds
each satellite's matrix as ``gain * outer(a, conj(b))`` from the receive and
transmit steering vectors. The "true" channel evaluates per-antenna-pair
distances from exact 2-D Cartesian antenna coordinates, so the approximation
error stays measurable instead of being zero by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig
from .geometry import SatelliteState, SwarmGeometry
from .units import SPEED_OF_LIGHT

# Shadow-fading sigma per 10-degree elevation bin (10..90 deg), dB. Rural
# LOS-like defaults; override through LossConfig for other environments.
DEFAULT_SHADOW_SIGMA_TABLE_DB = (1.79, 1.14, 1.14, 0.92, 1.42, 1.56, 0.85, 0.72, 0.72)
_SHADOW_BIN_DEG = 10.0


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear arrays on both ends of the link.

    Antennas are spaced half a wavelength apart: ``antenna_spacing_m =
    c0 / (2 fc)``.
    """

    num_tx_per_sat: int
    num_rx: int
    carrier_freq_hz: float

    def __post_init__(self) -> None:
        if self.num_tx_per_sat < 1 or self.num_rx < 1:
            raise InvalidConfig("antenna counts must be at least 1")
        if self.carrier_freq_hz <= 0.0:
            raise InvalidConfig("carrier frequency must be positive")

    @property
    def antenna_spacing_m(self) -> float:
        return SPEED_OF_LIGHT / (2.0 * self.carrier_freq_hz)

    @property
    def wavenumber_rad_per_m(self) -> float:
        return 2.0 * math.pi * self.carrier_freq_hz / SPEED_OF_LIGHT


@dataclass(frozen=True)
class LossConfig:
    """Link-budget composition: antenna gains plus atmospheric surrogates.

    The gas term is deterministic (zenith value scaled by the cosecant of
    the elevation above the horizon); shadow fading and scintillation are
    zero-mean Gaussian in dB, drawn per satellite per trial. Each stochastic
    term can be disabled. ``gain_power_override`` fixes the mean squared
    channel gain used by the receiver instead of the geometry-based estimate.
    """

    tx_gain_dbi: float = 17.8
    rx_gain_dbi: float = 20.0
    shadow_sigma_table_db: tuple[float, ...] = DEFAULT_SHADOW_SIGMA_TABLE_DB
    shadow_fading_enabled: bool = True
    gas_zenith_db: float = 0.5
    gas_enabled: bool = True
    scintillation_sigma_db: float = 0.3
    scintillation_enabled: bool = True
    clutter_db: float = 0.0
    gain_power_override: float | None = None

    def __post_init__(self) -> None:
        if len(self.shadow_sigma_table_db) < 1:
            raise InvalidConfig("shadow fading table must have at least one bin")
        if any(s < 0.0 for s in self.shadow_sigma_table_db):
            raise InvalidConfig("shadow fading sigmas must be nonnegative")
        if self.scintillation_sigma_db < 0.0:
            raise InvalidConfig("scintillation sigma must be nonnegative")


@dataclass(frozen=True)
class LinkBudget:
    """Loss decomposition for one satellite at one instant, in dB.

    ``total_db`` follows the LOS budget convention: free-space path loss
    minus antenna gains plus shadow fading, clutter, gas absorption, and
    tropospheric scintillation. ``atm_phase_rad`` is the common atmospheric
    phase rotation of all antenna pairs of this satellite.
    """

    fspl_db: float
    tx_gain_db: float
    rx_gain_db: float
    shadow_fading_db: float
    clutter_db: float
    gas_db: float
    scintillation_db: float
    atm_phase_rad: float

    @property
    def total_db(self) -> float:
        return (
            self.fspl_db
            - (self.tx_gain_db + self.rx_gain_db)
            + self.shadow_fading_db
            + self.clutter_db
            + self.gas_db
            + self.scintillation_db
        )


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """All channel quantities for one swarm realization.

    ``stacked_true`` is the horizontal concatenation of the per-satellite
    true matrices; ``rx_steering_matrix`` has one steering column per
    satellite; ``gain_power`` is the receiver-side estimate of the mean
    squared complex gain (sigma_alpha^2).
    """

    per_satellite_true: tuple[np.ndarray, ...]
    per_satellite_approx: tuple[np.ndarray, ...]
    stacked_true: np.ndarray
    rx_steering_matrix: np.ndarray
    tx_steering_vectors: tuple[np.ndarray, ...]
    complex_gains: tuple[complex, ...]
    gain_power: float
    budgets: tuple[LinkBudget, ...] = field(repr=False, default=())


def rx_steering(theta_rad: float, num_rx: int) -> np.ndarray:
    """Receive steering vector: entry m is exp(j pi m cos(theta))."""
    m = np.arange(num_rx)
    return np.exp(1j * math.pi * m * math.cos(theta_rad))


def tx_steering(aod_rad: float, num_tx: int) -> np.ndarray:
    """Transmit steering vector: entry n is exp(-j pi n sin(aod))."""
    n = np.arange(num_tx)
    return np.exp(-1j * math.pi * n * math.sin(aod_rad))


def approx_channel(gain: complex, rx_vec: np.ndarray, tx_vec: np.ndarray) -> np.ndarray:
    """Rank-one channel matrix ``gain * rx_vec tx_vec^H``."""
    return gain * np.outer(rx_vec, tx_vec.conj())


def shadow_sigma_db(elevation_rad: float, table_db: tuple[float, ...]) -> float:
    """Shadow-fading sigma for the given angle of arrival.

    The table is keyed by 10-degree bins of the elevation above the local
    horizon, starting at 10 degrees; the arrival angle is folded onto
    [0, pi/2] and rounded to the nearest bin.
    """
    elev = min(elevation_rad, math.pi - elevation_rad)
    elev_deg = math.degrees(elev)
    bin_index = round(elev_deg / _SHADOW_BIN_DEG)
    if bin_index < 1:
        raise InvalidConfig(
            f"elevation {elev_deg:.2f} deg below the shadow-fading table domain"
        )
    if bin_index > len(table_db):
        raise InvalidConfig(
            f"elevation {elev_deg:.2f} deg above the shadow-fading table domain"
        )
    return table_db[bin_index - 1]


def gas_loss_db(elevation_rad: float, cfg: LossConfig) -> float:
    """Deterministic gas absorption: zenith value with cosecant scaling."""
    if not cfg.gas_enabled:
        return 0.0
    elev = min(elevation_rad, math.pi - elevation_rad)
    return cfg.gas_zenith_db / math.sin(elev)


def fspl_db(distance_m: float, wavenumber_rad_per_m: float) -> float:
    """Free-space path loss ``20 log10(2 nu d)`` in dB."""
    return 20.0 * math.log10(2.0 * wavenumber_rad_per_m * distance_m)


def link_budget(
    sat: SatelliteState,
    arrays: ArrayConfig,
    cfg: LossConfig,
    rng: np.random.Generator,
) -> LinkBudget:
    """Draw one link-budget realization for a satellite.

    Free-space and gas terms are deterministic functions of the geometry;
    shadow fading and scintillation are drawn from the configured Gaussian
    surrogates, and the atmospheric phase is uniform on [0, 2 pi). The draw
    order (shadow, scintillation, phase) is part of the determinism contract.
    """
    if sat.slant_range_m <= 0.0:
        raise InvalidConfig("slant range must be positive")
    if cfg.shadow_fading_enabled:
        sigma_sf = shadow_sigma_db(sat.elevation_rad, cfg.shadow_sigma_table_db)
        shadow = float(rng.normal(0.0, sigma_sf))
    else:
        shadow = 0.0
    scint = (
        float(rng.normal(0.0, cfg.scintillation_sigma_db))
        if cfg.scintillation_enabled
        else 0.0
    )
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    return LinkBudget(
        fspl_db=fspl_db(sat.slant_range_m, arrays.wavenumber_rad_per_m),
        tx_gain_db=cfg.tx_gain_dbi,
        rx_gain_db=cfg.rx_gain_dbi,
        shadow_fading_db=shadow,
        clutter_db=cfg.clutter_db,
        gas_db=gas_loss_db(sat.elevation_rad, cfg),
        scintillation_db=scint,
        atm_phase_rad=phase,
    )


def _antenna_pair_distances_m(sat: SatelliteState, arrays: ArrayConfig) -> np.ndarray:
    """Exact distances from each transmit antenna to each receive antenna.

    Receiver-centered coordinates: the ground array runs along the local
    tangent (+x) from the origin; the satellite's first antenna sits at
    ``slant_range * (cos theta, sin theta)`` and its array extends along the
    direction rotated by the satellite rotation from +x.
    """
    da = arrays.antenna_spacing_m
    sat_x = sat.slant_range_m * math.cos(sat.elevation_rad)
    sat_y = sat.slant_range_m * math.sin(sat.elevation_rad)
    n = np.arange(arrays.num_tx_per_sat)
    tx_x = sat_x + n * da * math.cos(sat.rotation_rad)
    tx_y = sat_y + n * da * math.sin(sat.rotation_rad)
    rx_x = np.arange(arrays.num_rx) * da
    return np.hypot(tx_x[None, :] - rx_x[:, None], tx_y[None, :])


def true_channel(
    sat: SatelliteState,
    arrays: ArrayConfig,
    budget: LinkBudget,
) -> np.ndarray:
    """LOS channel matrix with exact per-pair distances.

    Entry (m, n) has magnitude ``10**(-L_mn/20)`` where ``L_mn`` replaces
    the budget's reference free-space term by the pair's own, and phase
    ``-(nu d_mn + atm_phase)``.
    """
    nu = arrays.wavenumber_rad_per_m
    d_mn = _antenna_pair_distances_m(sat, arrays)
    loss_db = 20.0 * np.log10(2.0 * nu * d_mn) + (budget.total_db - budget.fspl_db)
    magnitude = 10.0 ** (-loss_db / 20.0)
    return magnitude * np.exp(-1j * (nu * d_mn + budget.atm_phase_rad))


def complex_gain(sat: SatelliteState, arrays: ArrayConfig, budget: LinkBudget) -> complex:
    """Reference complex gain of the rank-one approximation.

    Anchored at the first antenna pair: magnitude from the budget total,
    phase ``-(nu d + atm_phase)`` at the reference slant range.
    """
    magnitude = 10.0 ** (-budget.total_db / 20.0)
    phase = -(arrays.wavenumber_rad_per_m * sat.slant_range_m + budget.atm_phase_rad)
    return magnitude * complex(math.cos(phase), math.sin(phase))


def deterministic_gain_power(swarm: SwarmGeometry, arrays: ArrayConfig, cfg: LossConfig) -> float:
    """Mean squared gain over satellites with stochastic terms zeroed.

    This is the pilot-free, geometry-based estimate of sigma_alpha^2
    available to the receiver from position knowledge alone.
    """
    total = 0.0
    for sat in swarm.satellites:
        det_db = (
            fspl_db(sat.slant_range_m, arrays.wavenumber_rad_per_m)
            - (cfg.tx_gain_dbi + cfg.rx_gain_dbi)
            + cfg.clutter_db
            + gas_loss_db(sat.elevation_rad, cfg)
        )
        total += 10.0 ** (-det_db / 10.0)
    return total / swarm.num_satellites


def channel_set(
    swarm: SwarmGeometry,
    arrays: ArrayConfig,
    cfg: LossConfig,
    rng: np.random.Generator,
) -> ChannelSet:
    """Build true and approximate channels for every satellite of the swarm."""
    ns = swarm.num_satellites
    if arrays.num_rx < ns:
        raise InvalidConfig(
            f"need at least as many receive antennas as satellites "
            f"({arrays.num_rx} < {ns})"
        )
    budgets = tuple(link_budget(sat, arrays, cfg, rng) for sat in swarm.satellites)
    true_mats = tuple(
        true_channel(sat, arrays, budget) for sat, budget in zip(swarm.satellites, budgets)
    )
    rx_vecs = [rx_steering(sat.elevation_rad, arrays.num_rx) for sat in swarm.satellites]
    tx_vecs = tuple(tx_steering(sat.aod_rad, arrays.num_tx_per_sat) for sat in swarm.satellites)
    gains = tuple(
        complex_gain(sat, arrays, budget) for sat, budget in zip(swarm.satellites, budgets)
    )
    approx_mats = tuple(
        approx_channel(g, a, b) for g, a, b in zip(gains, rx_vecs, tx_vecs)
    )
    if cfg.gain_power_override is not None:
        gain_power = cfg.gain_power_override
    else:
        gain_power = deterministic_gain_power(swarm, arrays, cfg)
    return ChannelSet(
        per_satellite_true=true_mats,
        per_satellite_approx=approx_mats,
        stacked_true=np.hstack(true_mats),
        rx_steering_matrix=np.column_stack(rx_vecs),
        tx_steering_vectors=tx_vecs,
        complex_gains=gains,
        gain_power=gain_power,
        budgets=budgets,
    )
