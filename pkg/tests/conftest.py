import textwrap

import pytest

SMALL_SCENARIO = textwrap.dedent(
    """
    seed = 1234
    trials = 4

    [orbit]
    altitude_km = 600.0

    [arrays]
    num_rx_antennas = 24
    total_tx_antennas = 12
    carrier_freq_ghz = 20.0

    [swarm]
    num_satellites = 3
    inter_sat_distance_km = 70.0
    min_elevation_deg = 30.0

    [power]
    total_tx_power_dbw = 10.0
    noise_power_dbw = -120.0

    [sweep]
    axis = "inter_sat_distance"
    values = [20.0, 50.0, 80.0]
    theta_mean_deg = 90.0
    """
)


@pytest.fixture
def small_scenario_path(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text(SMALL_SCENARIO)
    return path
