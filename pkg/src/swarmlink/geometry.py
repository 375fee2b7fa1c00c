"""In-plane geometry between a trail-formation satellite swarm and the receiver.

The model is two dimensional: satellites share one circular orbit in the
xy-plane at radius ``r0 = earth_radius + altitude`` and the receiver sits on
the ground at polar angle pi/2, i.e. at Cartesian ``(0, earth_radius)``.
A satellite at polar angle ``vartheta`` is seen from the receiver under the
elevation angle ``theta`` (equivalently, the angle of arrival), measured in
``[0, pi]`` with pi/2 at zenith. All angles are radians, all lengths meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidConfig, NoConvergence
from .units import EARTH_RADIUS_M

# Pointing modes for the satellite array rotation during a pass.
TRACK_RECEIVER = "track_receiver"
NADIR = "nadir"
FIXED_ROTATION = "fixed_rotation"

_MEAN_ELEVATION_TOL_RAD = 1e-9
_PLACEMENT_MAX_ITER = 200


@dataclass(frozen=True)
class OrbitConfig:
    """Circular-orbit parameters.

    The orbital radius is derived: ``orbital_radius_m = earth_radius_m +
    altitude_m``.
    """

    altitude_m: float
    earth_radius_m: float = EARTH_RADIUS_M

    def __post_init__(self) -> None:
        if self.altitude_m <= 0.0:
            raise InvalidConfig(f"orbit altitude must be positive, got {self.altitude_m} m")
        if self.earth_radius_m <= 0.0:
            raise InvalidConfig("earth radius must be positive")

    @property
    def orbital_radius_m(self) -> float:
        return self.earth_radius_m + self.altitude_m


@dataclass(frozen=True)
class PointingPolicy:
    """How each satellite orients its array while flying over the receiver.

    ``track_receiver`` keeps the beam on the receiver (departure angle 0 at
    every instant), ``nadir`` points the array boresight at the Earth's
    center, and ``fixed_rotation`` freezes the rotation at ``eta_rad``.
    """

    mode: str = TRACK_RECEIVER
    eta_rad: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in (TRACK_RECEIVER, NADIR, FIXED_ROTATION):
            raise InvalidConfig(f"unknown pointing mode {self.mode!r}")

    @staticmethod
    def track_receiver() -> "PointingPolicy":
        return PointingPolicy(TRACK_RECEIVER)

    @staticmethod
    def nadir() -> "PointingPolicy":
        return PointingPolicy(NADIR)

    @staticmethod
    def fixed_rotation(eta_rad: float) -> "PointingPolicy":
        return PointingPolicy(FIXED_ROTATION, eta_rad)


@dataclass(frozen=True)
class SatelliteState:
    """Angles and range of one satellite at one instant.

    ``rotation_rad`` is zero when the satellite array is parallel to the
    ground array; ``aod_rad = elevation_rad - rotation_rad - pi/2`` is the
    angle of departure relative to the array boresight.
    """

    polar_angle_rad: float
    elevation_rad: float
    slant_range_m: float
    rotation_rad: float
    aod_rad: float


@dataclass(frozen=True)
class SwarmGeometry:
    """A placed swarm: satellites ordered by increasing polar angle."""

    orbit: OrbitConfig
    satellites: tuple[SatelliteState, ...]
    inter_sat_distance_m: float
    polar_step_rad: float

    @property
    def num_satellites(self) -> int:
        return len(self.satellites)

    @property
    def elevations_rad(self) -> tuple[float, ...]:
        return tuple(s.elevation_rad for s in self.satellites)

    @property
    def is_degenerate(self) -> bool:
        """True when two satellites coincide (zero spacing)."""
        thetas = self.elevations_rad
        return any(t2 <= t1 for t1, t2 in zip(thetas, thetas[1:]))


def polar_from_elevation(theta_rad: float, orbit: OrbitConfig) -> float:
    """Polar angle of a satellite seen under elevation ``theta_rad``.

    Law of sines in the triangle satellite / receiver / Earth center:
    ``vartheta = theta + arcsin(rE cos(theta) / r0)``.
    """
    r0 = orbit.orbital_radius_m
    return theta_rad + math.asin(orbit.earth_radius_m * math.cos(theta_rad) / r0)


def slant_range(vartheta_rad: float, orbit: OrbitConfig) -> float:
    """Distance from a satellite at polar angle ``vartheta_rad`` to the receiver."""
    r0 = orbit.orbital_radius_m
    re = orbit.earth_radius_m
    d0 = orbit.altitude_m
    return math.sqrt(d0 * d0 + 2.0 * re * r0 * (1.0 - math.sin(vartheta_rad)))


def satellite_position_m(vartheta_rad: float, orbit: OrbitConfig) -> tuple[float, float]:
    """Cartesian position of a satellite in the Earth-centered frame."""
    r0 = orbit.orbital_radius_m
    return (r0 * math.cos(vartheta_rad), r0 * math.sin(vartheta_rad))


def elevation_from_polar(vartheta_rad: float, orbit: OrbitConfig) -> float:
    """Elevation angle of a satellite at polar angle ``vartheta_rad``.

    Exact closed-form inverse of :func:`polar_from_elevation`: the receiver
    frame is translated by ``(0, rE)``, so ``theta = atan2(r0 sin(vartheta) -
    rE, r0 cos(vartheta))``. No iteration is required.
    """
    theta = _elevation_from_polar_unchecked(vartheta_rad, orbit)
    if theta < 0.0 or theta > math.pi:
        raise InvalidConfig(
            f"satellite at polar angle {vartheta_rad:.6f} rad is below the horizon"
        )
    return theta


def _elevation_from_polar_unchecked(vartheta_rad: float, orbit: OrbitConfig) -> float:
    """Monotone elevation extension; below-horizon comes out <0 or >pi.

    Unwraps the atan2 branch cut behind the far horizon so bisection over
    the placement bracket sees a continuous increasing function.
    """
    r0 = orbit.orbital_radius_m
    theta = math.atan2(
        r0 * math.sin(vartheta_rad) - orbit.earth_radius_m,
        r0 * math.cos(vartheta_rad),
    )
    if theta < -math.pi / 2.0 and vartheta_rad > math.pi / 2.0:
        theta += 2.0 * math.pi
    return theta


def polar_step_for_chord(distance_m: float, orbit: OrbitConfig) -> float:
    """Polar-angle step between satellites separated by chord ``distance_m``.

    Evaluated as ``2 asin(D / (2 r0))``, the cancellation-free form of
    ``arccos(1 - D^2 / (2 r0^2))``.
    """
    r0 = orbit.orbital_radius_m
    half = distance_m / (2.0 * r0)
    if half > 1.0:
        raise InvalidConfig(f"inter-satellite distance {distance_m} m exceeds orbit diameter")
    return 2.0 * math.asin(half)


def rotation_bounds_rad(theta_rad: float) -> tuple[float, float]:
    """Admissible rotation interval keeping the departure angle in [-pi/2, pi/2]."""
    return (min(-math.pi / 2.0, theta_rad - math.pi), min(math.pi / 2.0, theta_rad))


def _rotation_for(policy: PointingPolicy, vartheta_rad: float, theta_rad: float) -> float:
    if policy.mode == TRACK_RECEIVER:
        return theta_rad - math.pi / 2.0
    if policy.mode == NADIR:
        return vartheta_rad - math.pi / 2.0
    return policy.eta_rad


def satellite_state(
    vartheta_rad: float,
    orbit: OrbitConfig,
    pointing: PointingPolicy = PointingPolicy(),
) -> SatelliteState:
    """Build the full state of a satellite at polar angle ``vartheta_rad``."""
    theta = elevation_from_polar(vartheta_rad, orbit)
    eta = _rotation_for(pointing, vartheta_rad, theta)
    lo, hi = rotation_bounds_rad(theta)
    if not (lo - 1e-12 <= eta <= hi + 1e-12):
        raise InvalidConfig(
            f"rotation {eta:.6f} rad outside admissible interval "
            f"[{lo:.6f}, {hi:.6f}] at elevation {theta:.6f} rad"
        )
    return SatelliteState(
        polar_angle_rad=vartheta_rad,
        elevation_rad=theta,
        slant_range_m=slant_range(vartheta_rad, orbit),
        rotation_rad=eta,
        aod_rad=theta - eta - math.pi / 2.0,
    )


def place_swarm(
    theta_mean_rad: float,
    inter_sat_distance_m: float,
    num_satellites: int,
    orbit: OrbitConfig,
    pointing: PointingPolicy = PointingPolicy(),
) -> SwarmGeometry:
    """Place a trail swarm so the mean elevation equals ``theta_mean_rad``.

    Satellites are spaced by a constant polar-angle step (chord length equal
    to the inter-satellite distance). The swarm center angle is found by
    bisection on the monotone map from center angle to mean elevation;
    the mean matches the target to 1e-9 rad.

    Raises ``InvalidConfig`` when the swarm cannot be placed with every
    satellite above the horizon, ``NoConvergence`` if the bisection stalls.
    """
    if num_satellites < 1:
        raise InvalidConfig(f"need at least one satellite, got {num_satellites}")
    if inter_sat_distance_m < 0.0:
        raise InvalidConfig("inter-satellite distance must be nonnegative")

    step = polar_step_for_chord(inter_sat_distance_m, orbit)
    offsets = [(i - (num_satellites - 1) / 2.0) * step for i in range(num_satellites)]

    # Horizon-limited polar range; sin(vartheta) >= rE/r0 keeps elevation >= 0.
    horizon = math.asin(orbit.earth_radius_m / orbit.orbital_radius_m)
    lo = horizon - offsets[0]
    hi = (math.pi - horizon) - offsets[-1]
    if lo >= hi:
        raise InvalidConfig(
            f"swarm of {num_satellites} satellites spaced {inter_sat_distance_m} m "
            "does not fit above the horizon"
        )

    def mean_elevation_offset(center: float) -> float:
        total = 0.0
        for off in offsets:
            total += _elevation_from_polar_unchecked(center + off, orbit)
        return total / num_satellites - theta_mean_rad

    f_lo = mean_elevation_offset(lo)
    f_hi = mean_elevation_offset(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise InvalidConfig(
            f"mean elevation {theta_mean_rad:.6f} rad not reachable with all "
            f"{num_satellites} satellites above the horizon"
        )

    center = lo
    residual = f_lo
    for _ in range(_PLACEMENT_MAX_ITER):
        center = 0.5 * (lo + hi)
        residual = mean_elevation_offset(center)
        if abs(residual) < 1e-13:
            break
        if residual < 0.0:
            lo = center
        else:
            hi = center
    if abs(residual) > _MEAN_ELEVATION_TOL_RAD:
        raise NoConvergence(
            f"swarm placement did not reach mean elevation within "
            f"{_MEAN_ELEVATION_TOL_RAD} rad (residual {residual:.3e})"
        )

    satellites = tuple(satellite_state(center + off, orbit, pointing) for off in offsets)
    return SwarmGeometry(
        orbit=orbit,
        satellites=satellites,
        inter_sat_distance_m=inter_sat_distance_m,
        polar_step_rad=step,
    )
