"""
Time-domain solver for the pair-amplitude equations coupled to probe propagation.

Amplitudes are marched with classic RK4. At every stage the probe field is
rebuilt by z-marching the propagation equation in the retarded frame:
Omega_p(z) = Omega_p(0, t) + running trapezoid integral of the source.

Each stage runs as one compiled kernel (rk4_kernels) over preallocated
buffers. field_rhs, amplitude_rhs and derivative give the same linear
operator in plain numpy form.
"""
import logging
import time

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from dipolar_eit.errors import ScenarioError, SolverAbort
from dipolar_eit.models.medium import (
    PairAmplitudeField, ProbeField, PropagationResult, SolverState, max_frequency, uniform_spinwave
)
from dipolar_eit.models.scenario import control_detunings, probe_detunings
from dipolar_eit.services import rk4_kernels
from dipolar_eit.services.spectral import control_field, coupled_pairs, coupling_matrices, prob_pm

logger = logging.getLogger(__name__)

STABILITY_LIMIT = 0.5


class BlochMaxwellSolver:
    """
    Linear Bloch-Maxwell system of N clouds on a shared grid.

    Coupled cloud pairs carry full (z, z') amplitude blocks. All uncoupled
    pairs of a cloud are carried by the reduced amplitudes g24 and g34, whose
    source weight is W_mu, the spinwave weight of the uncoupled partners.
    """

    def __init__(self, params, grid, kernel, pulse, spinwave=None, collapse=True):
        """
        Args:
            params: ScenarioParams (retarded frame required)
            grid: Grid
            kernel: DdiKernel
            pulse: InputPulse with one amplitude per cloud
            spinwave: SpinwaveProfile on grid.z (default uniform)
            collapse: Use reduced amplitudes for uncoupled pairs
        """
        if not params.retarded_frame:
            raise ScenarioError("The time-domain solver runs in the retarded frame only")
        if pulse.cloud_count != params.cloud_count:
            raise ScenarioError(
                f"Input pulse has {pulse.cloud_count} amplitude(s), expected {params.cloud_count}"
            )
        self.params = params
        self.grid = grid
        self.kernel = kernel
        self.pulse = pulse
        self.spinwave = spinwave if spinwave is not None else uniform_spinwave(params, grid)

        z = grid.z
        self.n_clouds = params.cloud_count
        self.n_nodes = z.size
        self.pairs = tuple(coupled_pairs(params, kernel, collapse))
        self.weights = grid.weights

        self._mu = np.array([p[0] for p in self.pairs], dtype=int)
        self._nu = np.array([p[1] for p in self.pairs], dtype=int)
        self._partner = np.array([self.pairs.index((nu, mu)) for mu, nu in self.pairs], dtype=int)
        matrices = coupling_matrices(kernel, z, z, self.pairs)
        self._coupling = np.ascontiguousarray(
            np.array([matrices[p] for p in self.pairs], dtype=float).reshape(
                len(self.pairs), self.n_nodes, self.n_nodes
            )
        )

        self._dp = np.ascontiguousarray(probe_detunings(params), dtype=complex)
        self._dc = np.ascontiguousarray(control_detunings(params), dtype=complex)
        self._kappa = np.asarray(params.kappa, dtype=float)
        self._ctrl = np.ascontiguousarray(control_field(params, z), dtype=complex)
        self._alpha = np.ascontiguousarray(self.spinwave.amp, dtype=complex)
        self._alpha_weighted = np.ascontiguousarray(self.weights[None, :] * np.conj(self._alpha))

        weights = self.spinwave.cloud_weights()
        self._reduced_weight = np.array([
            sum(weights[nu] for nu in range(self.n_clouds) if (mu, nu) not in self.pairs)
            for mu in range(self.n_clouds)
        ], dtype=float)

        # RK4 work buffers: two stage inputs and the weighted rate sum
        self._stage_a = np.zeros(self.state_size, dtype=complex)
        self._stage_b = np.zeros(self.state_size, dtype=complex)
        self._rate_sum = np.zeros(self.state_size, dtype=complex)
        self._field_buffer = np.zeros((self.n_clouds, self.n_nodes), dtype=complex)

        limit = grid.dt * max_frequency(params)
        if limit > STABILITY_LIMIT * (1.0 + 1e-9):
            logger.warning(
                f"Time step dt={grid.dt:.4g} exceeds the RK4 stability guideline "
                f"(dt * max frequency = {limit:.3g} > {STABILITY_LIMIT})"
            )
        logger.debug(f"Solver set up with {len(self.pairs)} coupled block(s) on {self.n_nodes} nodes")

    @property
    def state_size(self):
        return 2 * len(self.pairs) * self.n_nodes ** 2 + 2 * self.n_clouds * self.n_nodes

    def _unpack(self, y):
        return PairAmplitudeField.from_vector(y, self.n_clouds, self.n_nodes, self.pairs)

    def _views(self, vector):
        """(a24, a34, g24, g34) views into a flat state vector"""
        nb, n, nc = len(self.pairs), self.n_nodes, self.n_clouds
        block = nb * n * n
        reduced = nc * n
        return (
            vector[:block].reshape(nb, n, n),
            vector[block:2 * block].reshape(nb, n, n),
            vector[2 * block:2 * block + reduced].reshape(nc, n),
            vector[2 * block + reduced:].reshape(nc, n)
        )

    def _inlet(self, t):
        return np.ascontiguousarray(self.pulse(t), dtype=complex).reshape(self.n_clouds)

    def _probe(self, t, y):
        """Probe field of a flat state through the compiled kernel"""
        a24, _, g24, _ = self._views(y)
        rk4_kernels.probe_field(
            a24, g24, self._mu, self._nu, self._alpha_weighted, self._reduced_weight,
            self._kappa, self.grid.dz, self._inlet(t), self._field_buffer
        )
        return self._field_buffer.copy()

    def _advance(self, t, y):
        """One RK4 step of size dt applied to the flat state y in place"""
        dt = self.grid.dt
        half = 0.5 * dt
        y_views = self._views(y)
        rate_sum = self._views(self._rate_sum)
        stages = (
            (y, self._stage_a, t, 1.0, half, True, False),
            (self._stage_a, self._stage_b, t + half, 2.0, half, False, False),
            (self._stage_b, self._stage_a, t + half, 2.0, dt, False, False),
            (self._stage_a, self._stage_b, t + dt, 1.0, dt / 6.0, False, True),
        )
        for cur, nxt, at, weight, h, first, final in stages:
            rk4_kernels.rk4_stage(
                *self._views(cur), *y_views, *rate_sum, *self._views(nxt),
                self._field_buffer, self._inlet(at), self._alpha, self._alpha_weighted, self._ctrl,
                self._dp, self._dc, self._kappa, self._reduced_weight, self._coupling,
                self._mu, self._nu, self._partner, self.grid.dz, weight, h, first, final
            )

    def initial_state(self):
        pair = PairAmplitudeField.zeros(self.n_clouds, self.n_nodes, self.pairs)
        return SolverState(pair=pair, probe=ProbeField.zeros(self.n_clouds, self.grid.z))

    def field_rhs(self, pair):
        """
        z-derivative of the probe envelope.

        d Omega_mu/dz = i kappa_mu sum_nu int a24^{mu nu}(z, z') conj(alpha_nu(z')) dz'
        """
        source = self._reduced_weight[:, None] * pair.g24
        for b, mu in enumerate(self._mu):
            source[mu] = source[mu] + pair.a24[b] @ self._alpha_weighted[self._nu[b]]
        return 1j * self._kappa[:, None] * source

    def field(self, t, pair, include_input=True):
        """Probe field implied by the amplitudes at time t, shape (clouds, z nodes)"""
        grown = cumulative_trapezoid(self.field_rhs(pair), dx=self.grid.dz, axis=1, initial=0.0)
        if include_input:
            grown = grown + np.asarray(self.pulse(t))[:, None]
        return grown

    def amplitude_rhs(self, pair, omega_p):
        """
        Time derivatives of the pair amplitudes for a given probe field.

        Returns:
            PairAmplitudeField of derivatives
        """
        mu, nu = self._mu, self._nu
        ctrl = self._ctrl
        d24 = (
            1j * self._dp[mu][:, None, None] * pair.a24
            + 1j * omega_p[mu][:, :, None] * self._alpha[nu][:, None, :]
            + 1j * np.conj(ctrl[mu])[:, :, None] * pair.a34
        )
        d34 = (
            1j * self._dc[mu][:, None, None] * pair.a34
            + 1j * ctrl[mu][:, :, None] * pair.a24
            - 1j * self._coupling * pair.a34[self._partner].transpose(0, 2, 1)
        )
        g24 = 1j * self._dp[:, None] * pair.g24 + 1j * omega_p + 1j * np.conj(ctrl) * pair.g34
        g34 = 1j * self._dc[:, None] * pair.g34 + 1j * ctrl * pair.g24
        return PairAmplitudeField(pairs=self.pairs, a24=d24, a34=d34, g24=g24, g34=g34)

    def derivative(self, t, y, include_input=True):
        """Right-hand side of the full linear system as a flat vector"""
        pair = self._unpack(y)
        omega_p = self.field(t, pair, include_input)
        return self.amplitude_rhs(pair, omega_p).to_vector()

    def step(self, t, y):
        """One classic RK4 step of size dt, returning a new state vector"""
        state = np.array(y, dtype=complex, copy=True)
        self._advance(t, state)
        return state

    def propagate(self, stride=1):
        """
        March the system over the whole time axis.

        Args:
            stride: Record the field every stride steps (the last step is
                always recorded)

        Returns:
            PropagationResult
        """
        if stride < 1:
            raise ScenarioError("stride must be at least 1")
        started = time.perf_counter()
        state = self.initial_state()
        y = state.pair.to_vector()
        dt = self.grid.dt
        n_t = self.grid.n_t
        logger.info(
            f"Propagating {self.n_clouds} cloud(s): n_z={self.grid.n_z}, n_t={n_t}, dt={dt:.4g}, "
            f"{len(self.pairs)} coupled block(s)"
        )

        state.probe.record(0.0, self._probe(0.0, y))
        for step in range(1, n_t + 1):
            self._advance(state.t, y)
            state.t = step * dt
            state.step_count = step
            if not rk4_kernels.all_finite(y):
                logger.error(f"Non-finite amplitudes at step {step} (t={state.t:.6g})")
                raise SolverAbort(
                    f"Non-finite amplitudes at step {step}, t={state.t:.6g}", step=step, time=state.t
                )
            if step % stride == 0 or step == n_t:
                state.probe.record(state.t, self._probe(state.t, y))

        state.pair = self._unpack(y)
        result = self._result(state, time.perf_counter() - started)
        logger.info(f"Propagation finished in {result.wall_time:.2f}s, transmission {result.transmission:.4g}")
        return result

    def _result(self, state, wall_time):
        probe = state.probe
        times = probe.time_axis
        energy = trapezoid(np.abs(probe.history) ** 2, times, axis=-1)
        p_plus = p_minus = None
        if self.n_clouds == 2:
            p_plus, p_minus = prob_pm(probe, self.params.phi_ab)
        return PropagationResult(
            grid=self.grid,
            probe=probe,
            transmitted=energy[:, -1],
            input_energy=energy[:, 0],
            p_plus=p_plus,
            p_minus=p_minus,
            steps=state.step_count,
            wall_time=wall_time
        )


def propagate(params, grid, kernel, spinwave, input_pulse, stride=1, collapse=True):
    """
    Run the time-domain solver once.

    Returns:
        PropagationResult
    """
    solver = BlochMaxwellSolver(params, grid, kernel, input_pulse, spinwave, collapse)
    return solver.propagate(stride)
