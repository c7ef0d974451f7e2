"""
Unit tests for the medium containers
Tests grids, spinwave profiles, input pulses and recorded fields
"""
import logging

import numpy as np
import pytest
from scipy.integrate import trapezoid

from dipolar_eit.errors import GridError, ScenarioError
from dipolar_eit.models.medium import (
    Grid, InputPulse, PairAmplitudeField, ProbeField, constant_input_pulse, default_pulse_width,
    gaussian_input_pulse, make_grid, max_frequency, scenario_pulse, uniform_spinwave
)
from tests.factories import ScenarioParamsFactory


@pytest.mark.unit
class TestGrid:
    """Test the space-time grid"""

    def test_intervals_cover_medium(self, grid):
        """Test n_z intervals of dz span the medium"""
        assert grid.n_z * grid.dz == pytest.approx(1.0)
        assert grid.z.size == grid.n_z + 1
        assert grid.z[-1] == pytest.approx(1.0)

    def test_trapezoid_weights(self, grid):
        """Test the quadrature weights integrate a constant exactly"""
        assert grid.weights.sum() == pytest.approx(1.0, rel=1e-14)

    def test_coarse_grid_rejected(self, reference_params):
        """Test a grid that cannot resolve z_d raises GridError"""
        with pytest.raises(GridError, match='does not resolve'):
            make_grid(reference_params, 4, n_t=1)

    def test_coarse_grid_allowed_when_unchecked(self, reference_params):
        """Test the resolution rule can be switched off"""
        grid = make_grid(reference_params, 2, n_t=1, check_resolution=False)

        assert grid.n_z == 2

    def test_marginal_resolution_warns(self, reference_params, caplog):
        """Test fewer than 20 points across z_d logs a warning"""
        with caplog.at_level(logging.WARNING):
            make_grid(reference_params, 32, n_t=1)

        assert 'recommended' in caplog.text

    def test_default_time_step(self, reference_params):
        """Test the default dt keeps dt times the fastest frequency at 0.5"""
        pulse = gaussian_input_pulse(5.0, 1.0, [1.0, 0.0])

        grid = make_grid(reference_params, 32, pulse=pulse)

        assert grid.dt * max_frequency(reference_params) <= 0.5 + 1e-12
        assert grid.t_max == pytest.approx(pulse.end + 10.0)

    def test_time_axis_required(self, reference_params):
        """Test a grid needs a pulse, n_t or t_max"""
        with pytest.raises(GridError):
            make_grid(reference_params, 32)

    def test_invalid_grid(self):
        """Test non-positive sizes are rejected"""
        with pytest.raises(GridError):
            Grid(n_z=0, n_t=1, dt=0.1)
        with pytest.raises(GridError):
            Grid(n_z=8, n_t=1, dt=0.0)

    def test_max_frequency(self, reference_params):
        """Test the frequency bound adds detunings, drive, coupling and kappa"""
        expected = abs(complex(-6.5, 1.0)) + 6.5 + 20.0 + 10.0 + 9.0

        assert max_frequency(reference_params) == pytest.approx(expected)


@pytest.mark.unit
class TestSpinwave:
    """Test spinwave profiles"""

    def test_single_excitation(self, reference_params, grid):
        """Test the spinwave holds exactly one excitation"""
        spinwave = uniform_spinwave(reference_params, grid)

        assert spinwave.norm() == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(spinwave.cloud_weights(), [0.5, 0.5])

    def test_custom_weights(self, grid):
        """Test per-cloud weights are normalized to one excitation"""
        params = ScenarioParamsFactory(spinwave_weights=(3.0, 1.0))

        spinwave = uniform_spinwave(params, grid)

        np.testing.assert_allclose(spinwave.cloud_weights(), [0.75, 0.25])

    def test_spinwave_phase(self, grid):
        """Test the spinwave winds with k_s"""
        params = ScenarioParamsFactory(k_s=2.0)

        spinwave = uniform_spinwave(params, grid)

        np.testing.assert_allclose(np.angle(spinwave.amp[0, 1:4]), 2.0 * grid.z[1:4])

    def test_padded_profile(self, spinwave):
        """Test padding extends the grid and holds the edge density"""
        padded = spinwave.padded(5)

        assert padded.z.size == spinwave.z.size + 10
        assert padded.z[0] == pytest.approx(-5 * (spinwave.z[1] - spinwave.z[0]))
        np.testing.assert_allclose(padded.density, 0.5)

    def test_interpolation(self, spinwave):
        """Test the profile can be read between nodes"""
        values = spinwave.at(0, [0.01, 0.5])

        np.testing.assert_allclose(np.abs(values), np.sqrt(0.5))


@pytest.mark.unit
class TestInputPulse:
    """Test input pulses"""

    def test_gaussian_normalization(self):
        """Test the Gaussian pulse carries unit energy summed over clouds"""
        pulse = gaussian_input_pulse(20.0, 3.0, [1.0, 1.0j])
        t = np.linspace(0.0, 40.0, 4001)

        energy = trapezoid(np.sum(np.abs(pulse(t)) ** 2, axis=0), t)

        assert energy == pytest.approx(1.0, rel=1e-8)

    def test_shapes(self):
        """Test scalar time gives one value per cloud and arrays add a time axis"""
        pulse = constant_input_pulse([1.0, 0.0, 0.5], 10.0)

        assert pulse(3.0).shape == (3,)
        assert pulse(np.zeros(7)).shape == (3, 7)

    def test_scaled(self):
        """Test scaling multiplies every amplitude"""
        pulse = constant_input_pulse([1.0, 2.0], 10.0).scaled(2j)

        np.testing.assert_allclose(pulse(0.0), [2j, 4j])

    def test_flat_top_plateau(self):
        """Test the flat-top pulse is flat in its middle"""
        pulse = InputPulse('flat_top', (1.0,), center=50.0, width=60.0, rise=1.0)

        assert pulse.envelope(50.0) == pytest.approx(1.0, abs=1e-12)
        assert pulse.envelope(0.0) == pytest.approx(0.0, abs=1e-12)

    def test_invalid_pulse(self):
        """Test unknown shapes and non-positive widths are rejected"""
        with pytest.raises(ScenarioError):
            InputPulse('triangle', (1.0,), 0.0, 1.0)
        with pytest.raises(ScenarioError):
            gaussian_input_pulse(0.0, 0.0, [1.0])

    def test_default_width(self, reference_params):
        """Test the default width resolves the narrowest feature"""
        # min(gamma, Omega_c^2 gamma/|Delta_p|^2) = gamma here
        assert default_pulse_width(reference_params) == pytest.approx(10.0)

    def test_scenario_pulse(self):
        """Test the scenario pulse block sets width and centre"""
        params = ScenarioParamsFactory(pulse_width=4.0, pulse_center=30.0)

        pulse = scenario_pulse(params, [1.0, 0.0])

        assert pulse.shape == 'gaussian'
        assert pulse.width == 4.0
        assert pulse.center == 30.0


@pytest.mark.unit
class TestFieldContainers:
    """Test pair amplitudes and recorded probe fields"""

    def test_pair_field_vector_layout(self):
        """Test the flat state vector holds every block"""
        pair = PairAmplitudeField.zeros(2, 5, [(0, 1), (1, 0)])

        vector = pair.to_vector()
        unpacked = PairAmplitudeField.from_vector(vector + 1.0, 2, 5, [(0, 1), (1, 0)])

        assert vector.size == pair.size == 2 * 2 * 25 + 2 * 2 * 5
        assert unpacked.a24.shape == (2, 5, 5)
        assert unpacked.g34.shape == (2, 5)
        assert np.all(unpacked.a34 == 1.0)

    def test_non_finite_detected(self):
        """Test is_finite flags NaN amplitudes"""
        pair = PairAmplitudeField.zeros(1, 3, [])
        pair.g24[0, 1] = np.nan

        assert not pair.is_finite()

    def test_probe_history(self):
        """Test recorded snapshots stack into (clouds, z, times)"""
        probe = ProbeField.zeros(2, np.linspace(0.0, 1.0, 5))
        probe.record(0.0, np.ones((2, 5)))
        probe.record(0.5, 2.0 * np.ones((2, 5)))

        assert probe.history.shape == (2, 5, 2)
        np.testing.assert_allclose(probe.time_axis, [0.0, 0.5])

    def test_unknown_position(self):
        """Test asking for a position off the grid raises GridError"""
        probe = ProbeField.zeros(2, np.linspace(0.0, 1.0, 5))

        assert probe.z_index(0.25) == 1
        with pytest.raises(GridError):
            probe.z_index(0.3)
