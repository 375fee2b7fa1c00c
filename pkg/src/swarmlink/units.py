"""Physical constants and unit conversions.

Internally everything is SI: meters, radians, watts, hertz. Decibel and
degree/kilometer conversions live here so interface code (CLI, scenario
files) has a single place to go through.
"""

import math

SPEED_OF_LIGHT = 299_792_458.0
"""Speed of light in vacuum, m/s."""

EARTH_RADIUS_M = 6_371_000.0
"""Mean Earth radius, m."""


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio from dB to linear."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    return 10.0 * math.log10(value)


def dbw_to_watt(power_dbw: float) -> float:
    """Convert power in dBW to watts."""
    return 10.0 ** (power_dbw / 10.0)


def watt_to_dbw(power_w: float) -> float:
    """Convert power in watts to dBW."""
    return 10.0 * math.log10(power_w)


def deg_to_rad(angle_deg: float) -> float:
    return math.radians(angle_deg)


def rad_to_deg(angle_rad: float) -> float:
    return math.degrees(angle_rad)


def km_to_m(length_km: float) -> float:
    return length_km * 1000.0


def m_to_km(length_m: float) -> float:
    return length_m / 1000.0
