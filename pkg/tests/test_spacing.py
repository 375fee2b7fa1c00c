import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swarmlink.channel import rx_steering
from swarmlink.errors import InvalidConfig, NoRoot
from swarmlink.geometry import OrbitConfig, place_swarm, polar_from_elevation, elevation_from_polar, polar_step_for_chord
from swarmlink.spacing import (
    SpacingQuery,
    delta_phi,
    optimal_spacing,
    orthogonality_defect,
    relaxed_check,
)

ORBIT = OrbitConfig(altitude_m=600e3)


def solve(theta_deg, nr=100, k=1):
    query = SpacingQuery(
        elevation_rad=math.radians(theta_deg), num_rx=nr, orbit=ORBIT, harmonic=k
    )
    return optimal_spacing(query)


class TestDeltaPhi:
    def test_zero_spacing(self):
        assert delta_phi(math.radians(60), 0.0, ORBIT) == pytest.approx(0.0, abs=1e-14)

    def test_symmetric_pair_around_zenith(self):
        # Lead placed so the trailing partner mirrors it across the zenith.
        step = polar_step_for_chord(30e3, ORBIT)
        lead_polar = math.pi / 2 - step / 2
        theta_lead = elevation_from_polar(lead_polar, ORBIT)
        gap = delta_phi(theta_lead, 30e3, ORBIT)
        assert gap == pytest.approx(2.0 * abs(math.cos(theta_lead)), rel=1e-12)

    def test_zenith_12km_near_dft_gap(self):
        # 12 km at zenith closes one DFT bin of a 100-element array.
        gap = delta_phi(math.pi / 2, 12e3, ORBIT)
        assert gap == pytest.approx(0.02, rel=5e-3)

    def test_trailing_below_horizon_rejected(self):
        with pytest.raises(InvalidConfig):
            delta_phi(math.radians(170), 2000e3, ORBIT)

    @given(
        theta_deg=st.floats(30.0, 150.0),
        ds_a=st.floats(1e3, 200e3),
        ds_b=st.floats(1e3, 200e3),
    )
    @settings(max_examples=150, deadline=None)
    def test_strictly_increasing_in_spacing(self, theta_deg, ds_a, ds_b):
        lo, hi = sorted((ds_a, ds_b))
        if hi - lo < 1.0:
            return
        theta = math.radians(theta_deg)
        assert delta_phi(theta, hi, ORBIT) > delta_phi(theta, lo, ORBIT)


class TestOptimalSpacing:
    def test_zenith_pin_12km(self):
        result = solve(90.0)
        assert result.spacing_m == pytest.approx(12.002e3, rel=1e-3)
        assert abs(result.delta_phi_achieved - 0.02) < 1e-12

    def test_second_harmonic_doubles(self):
        ds1 = solve(90.0, k=1).spacing_m
        ds2 = solve(90.0, k=2).spacing_m
        assert ds2 == pytest.approx(24.0e3, rel=2e-2)
        assert ds2 / ds1 == pytest.approx(2.0, rel=1e-2)

    def test_doubling_antennas_halves_spacing(self):
        ds100 = solve(90.0, nr=100).spacing_m
        ds200 = solve(90.0, nr=200).spacing_m
        assert ds100 / ds200 == pytest.approx(2.0, rel=1e-2)

    def test_low_elevation_pin_65km(self):
        result = solve(30.0)
        assert result.spacing_m == pytest.approx(65.24e3, rel=1e-3)

    def test_root_consistent_with_delta_phi(self):
        result = solve(120.0)
        assert delta_phi(math.radians(120), result.spacing_m, ORBIT) == pytest.approx(
            0.02, abs=1e-12
        )

    def test_solved_spacing_orthogonalizes_steering(self):
        nr = 100
        result = solve(75.0, nr=nr)
        theta_lead = math.radians(75.0)
        lead_polar = polar_from_elevation(theta_lead, ORBIT)
        trail_polar = lead_polar + polar_step_for_chord(result.spacing_m, ORBIT)
        theta_trail = elevation_from_polar(trail_polar, ORBIT)
        inner = np.vdot(rx_steering(theta_lead, nr), rx_steering(theta_trail, nr))
        assert abs(inner) < 1e-6 * nr

    def test_infeasible_geometry_raises(self):
        # A 3-element array needs a cosine gap of 2/3; not reachable within
        # the search bracket at zenith.
        with pytest.raises(NoRoot):
            solve(90.0, nr=3)

    def test_harmonic_multiple_of_antennas_rejected(self):
        with pytest.raises(InvalidConfig):
            SpacingQuery(elevation_rad=math.pi / 2, num_rx=4, orbit=ORBIT, harmonic=8)

    def test_runtime_budget(self):
        import time

        start = time.perf_counter()
        solve(90.0)
        assert time.perf_counter() - start < 1.0


class TestRelaxedCheck:
    def test_single_satellite_vacuous(self):
        swarm = place_swarm(math.pi / 2, 0.0, 1, ORBIT)
        ok, gap = relaxed_check(swarm, 100)
        assert ok
        assert gap == math.inf

    def test_by_construction_at_zenith(self):
        ds = solve(90.0).spacing_m
        for ns in (2, 3):
            swarm = place_swarm(math.pi / 2, ds, ns, ORBIT)
            ok, gap = relaxed_check(swarm, 100)
            assert ok, f"ns={ns}: min gap {gap} below 0.02"

    def test_70km_true_over_central_pass(self):
        # 70 km exceeds the orthogonality requirement except in a narrow
        # sliver at the pass edges where the leading pair dips below the
        # design elevation.
        for theta_deg in np.linspace(33.0, 147.0, 58):
            swarm = place_swarm(math.radians(theta_deg), 70e3, 3, ORBIT)
            ok, _ = relaxed_check(swarm, 100)
            assert ok, f"failed at theta_mean={theta_deg}"

    def test_70km_marginally_fails_at_pass_edge(self):
        # Pinned behavior: the swarm-mean variant misses 2/Nr by ~0.6 % at
        # exactly 30 degrees; the pair anchored at 30 degrees passes.
        swarm = place_swarm(math.radians(30), 70e3, 2, ORBIT)
        ok, gap = relaxed_check(swarm, 100)
        assert not ok
        assert gap == pytest.approx(0.02, rel=1e-2)
        assert delta_phi(math.radians(30), 70e3, ORBIT) > 0.02

    def test_10km_fails_at_30deg(self):
        swarm = place_swarm(math.radians(30), 10e3, 3, ORBIT)
        ok, gap = relaxed_check(swarm, 100)
        assert not ok
        assert gap < 0.004


class TestOrthogonalityDefect:
    def test_orthogonal_construction(self):
        nr = 64
        cosines = [0.1 + 2.0 * i / nr for i in range(4)]
        a = np.column_stack([rx_steering(math.acos(c), nr) for c in cosines])
        assert orthogonality_defect(a) < 1e-9

    def test_identical_angles_closed_form(self):
        nr, ns = 32, 3
        a = np.column_stack([rx_steering(1.0, nr)] * ns)
        expected = math.sqrt(ns * ns - ns) / math.sqrt(ns)
        assert orthogonality_defect(a) == pytest.approx(expected, rel=1e-12)

    def test_decreases_toward_orthogonal_spacing(self):
        ds_orth = solve(90.0).spacing_m
        nr = 100
        defects = []
        for ds in np.linspace(0.0, ds_orth, 13):
            swarm = place_swarm(math.pi / 2, ds, 2, ORBIT)
            a = np.column_stack(
                [rx_steering(t, nr) for t in swarm.elevations_rad]
            )
            defects.append(orthogonality_defect(a))
        assert all(b < a + 1e-12 for a, b in zip(defects, defects[1:]))
        assert defects[-1] < 1e-3
