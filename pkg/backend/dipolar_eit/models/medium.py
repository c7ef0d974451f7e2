"""
Medium state containers: space-time grid, spinwave profile, input pulses,
pair amplitudes and the recorded probe field.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from dipolar_eit.errors import GridError, ScenarioError
from dipolar_eit.models.kernel import fwhm_halfwidth
from dipolar_eit.models.scenario import control_detunings, probe_detunings

logger = logging.getLogger(__name__)

PULSE_SHAPES = ('gaussian', 'flat_top', 'constant')


@dataclass(frozen=True)
class Grid:
    """
    Space-time grid shared by all clouds.

    The axis [0, length] is split into n_z intervals (n_z + 1 nodes), so
    n_z * dz equals the medium length. Time runs over n_t steps of dt.
    """
    n_z: int
    n_t: int
    dt: float
    length: float = 1.0
    retarded_frame: bool = True

    def __post_init__(self):
        if self.n_z < 1:
            raise GridError("n_z must be at least 1")
        if self.n_t < 1:
            raise GridError("n_t must be at least 1")
        if not self.dt > 0:
            raise GridError("dt must be positive")

    @property
    def dz(self):
        return self.length / self.n_z

    @property
    def z(self):
        return np.linspace(0.0, self.length, self.n_z + 1)

    @property
    def n_nodes(self):
        return self.n_z + 1

    @property
    def weights(self):
        """Composite trapezoid weights on the z nodes"""
        w = np.full(self.n_z + 1, self.dz)
        w[0] = w[-1] = 0.5 * self.dz
        return w

    @property
    def t_max(self):
        return self.n_t * self.dt

    def check_resolution(self, z_d):
        """Reject grids that cannot resolve the kernel half width"""
        if z_d < 5.0 * self.dz:
            raise GridError(
                f"Grid spacing dz={self.dz:.4g} does not resolve the kernel half width "
                f"z_d={z_d:.4g} (need z_d >= 5 dz, n_z >= {int(np.ceil(5.0 * self.length / z_d))})"
            )
        if self.dz > z_d / 20.0:
            logger.warning(
                f"Kernel half width resolved by only {z_d / self.dz:.1f} points (20 recommended)"
            )

    def to_dict(self):
        return {
            'n_z': self.n_z,
            'n_t': self.n_t,
            'dz': self.dz,
            'dt': self.dt,
            't_max': self.t_max,
            'retarded_frame': self.retarded_frame
        }


def max_frequency(params):
    """Upper bound on the fastest amplitude frequency of the linear system"""
    dp = np.abs(probe_detunings(params))
    dc = np.abs(control_detunings(params))
    oc = np.abs(np.asarray(params.omega_c))
    coupling = params.v0 if params.cloud_count >= 2 else 0.0
    return float(np.max(dp + dc + 2.0 * oc) + coupling + np.max(params.kappa))


def make_grid(params, n_z, pulse=None, n_t=None, dt=None, t_max=None, check_resolution=True):
    """
    Build the simulation grid for a scenario.

    Args:
        params: ScenarioParams
        n_z: Number of z intervals
        pulse: InputPulse used to pick the default time span
        n_t: Number of time steps (default from t_max and dt)
        dt: Time step (default 0.5 / max_frequency)
        t_max: Total time (default pulse end plus a settling time of 10/gamma)
        check_resolution: Enforce the kernel-resolution rule

    Returns:
        Grid
    """
    if dt is None:
        dt = 0.5 / max_frequency(params)
    if t_max is None:
        if n_t is not None:
            t_max = n_t * dt
        elif pulse is not None:
            t_max = pulse.end + 10.0 / params.gamma
        else:
            raise GridError("Need a pulse, n_t or t_max to size the time axis")
    if n_t is None:
        n_t = max(1, int(np.ceil(t_max / dt - 1e-9)))
        dt = t_max / n_t
    grid = Grid(n_z=int(n_z), n_t=int(n_t), dt=float(dt), length=params.length_L,
                retarded_frame=params.retarded_frame)
    if check_resolution and params.cloud_count >= 2:
        grid.check_resolution(fwhm_halfwidth(params.separation_ell))
    return grid


@dataclass(frozen=True)
class SpinwaveProfile:
    """Spinwave amplitudes alpha_4 per cloud on the z nodes"""
    z: np.ndarray
    amp: np.ndarray
    k_s: float = 0.0

    @property
    def cloud_count(self):
        return self.amp.shape[0]

    @property
    def density(self):
        return np.abs(self.amp) ** 2

    def cloud_weights(self):
        """Integral of |alpha_4|^2 over each cloud"""
        return trapezoid(self.density, self.z, axis=1)

    def norm(self):
        return float(np.sum(self.cloud_weights()))

    def at(self, cloud, z):
        """alpha_4 of one cloud at arbitrary positions, magnitude interpolated"""
        z = np.asarray(z, dtype=float)
        return np.interp(z, self.z, np.abs(self.amp[cloud])) * np.exp(1j * self.k_s * z)

    def padded(self, n_pad):
        """
        Profile continued n_pad nodes beyond each end of the medium.

        The density is held at its edge value and the phase keeps winding
        with k_s.
        """
        if n_pad <= 0:
            return self
        dz = self.z[1] - self.z[0]
        left = self.z[0] - dz * np.arange(n_pad, 0, -1)
        right = self.z[-1] + dz * np.arange(1, n_pad + 1)
        z_ext = np.concatenate([left, self.z, right])
        mag = np.abs(self.amp)
        mag_ext = np.concatenate([
            np.repeat(mag[:, :1], n_pad, axis=1), mag, np.repeat(mag[:, -1:], n_pad, axis=1)
        ], axis=1)
        return SpinwaveProfile(z=z_ext, amp=mag_ext * np.exp(1j * self.k_s * z_ext)[None, :],
                               k_s=self.k_s)


def uniform_spinwave(params, grid):
    """
    Constant-density spinwave with |alpha_4|^2 = rho/N per cloud.

    Per-cloud weights from the scenario replace the equal split when given.
    """
    n = params.cloud_count
    if params.spinwave_weights is not None:
        weights = np.asarray(params.spinwave_weights, dtype=float)
        weights = weights / weights.sum()
    else:
        weights = np.full(n, 1.0 / n)
    z = grid.z
    magnitude = np.sqrt(params.rho * weights)[:, None] * np.ones_like(z)[None, :]
    amp = magnitude * np.exp(1j * params.k_s * z)[None, :]
    return SpinwaveProfile(z=z, amp=amp, k_s=params.k_s)


@dataclass(frozen=True)
class InputPulse:
    """Probe envelope entering the medium at z = 0, one complex amplitude per cloud"""
    shape: str
    amplitudes: Tuple[complex, ...]
    center: float
    width: float
    rise: float = 1.0

    def __post_init__(self):
        if self.shape not in PULSE_SHAPES:
            raise ScenarioError(f"Unknown pulse shape: {self.shape}")
        if not self.width > 0:
            raise ScenarioError("pulse width must be positive")
        object.__setattr__(self, 'amplitudes', tuple(complex(a) for a in self.amplitudes))

    @property
    def cloud_count(self):
        return len(self.amplitudes)

    @property
    def end(self):
        """Time after which the envelope is negligible"""
        if self.shape == 'gaussian':
            return self.center + 6.0 * self.width
        if self.shape == 'flat_top':
            return self.center + 0.5 * self.width + 10.0 * self.rise
        return self.width

    def envelope(self, t):
        t = np.asarray(t, dtype=float)
        if self.shape == 'gaussian':
            return np.exp(-(t - self.center) ** 2 / (2.0 * self.width ** 2))
        if self.shape == 'flat_top':
            t_on = self.center - 0.5 * self.width
            t_off = self.center + 0.5 * self.width
            return 0.5 * (np.tanh((t - t_on) / self.rise) - np.tanh((t - t_off) / self.rise))
        return np.ones_like(t)

    def __call__(self, t):
        """Boundary values Omega_p(0, t); shape (N,) for scalar t, (N, len(t)) otherwise"""
        amps = np.asarray(self.amplitudes)
        env = self.envelope(t)
        if np.ndim(env) == 0:
            return amps * env
        return amps[:, None] * env[None, :]

    def scaled(self, factor):
        return InputPulse(self.shape, tuple(factor * a for a in self.amplitudes),
                          self.center, self.width, self.rise)

    def to_dict(self):
        return {
            'shape': self.shape,
            'amplitudes': [[a.real, a.imag] for a in self.amplitudes],
            'center': self.center,
            'width': self.width,
            'rise': self.rise
        }


def gaussian_input_pulse(center_t, width_t, amplitudes, normalize=True):
    """
    Gaussian probe pulse entering every cloud at z = 0.

    Args:
        center_t: Pulse centre
        width_t: Temporal width (standard deviation of the amplitude envelope)
        amplitudes: Complex amplitude per cloud, defining the input path superposition
        normalize: Scale so the summed input energy over all clouds is 1

    Returns:
        InputPulse
    """
    if not width_t > 0:
        raise ScenarioError("pulse width must be positive")
    amps = np.asarray(amplitudes, dtype=complex)
    total = float(np.sum(np.abs(amps) ** 2))
    if normalize and total > 0:
        amps = amps / np.sqrt(total * width_t * np.sqrt(np.pi))
    return InputPulse('gaussian', tuple(amps), float(center_t), float(width_t))


def flat_top_input_pulse(center_t, plateau, amplitudes, rise=1.0):
    """Flat-top pulse with tanh edges, used for CW plateau comparisons"""
    return InputPulse('flat_top', tuple(np.asarray(amplitudes, dtype=complex)),
                      float(center_t), float(plateau), float(rise))


def constant_input_pulse(amplitudes, duration):
    """Probe switched on at t = 0 and held constant"""
    return InputPulse('constant', tuple(np.asarray(amplitudes, dtype=complex)),
                      0.0, float(duration))


def default_pulse_width(params):
    """
    Temporal width whose bandwidth is a tenth of the narrowest spectral feature.

    The feature width is min(gamma, Im Delta_s(0)), Im Delta_s(0) being the
    half width of the interaction-shifted resonances.
    """
    oc2 = np.abs(np.asarray(params.omega_c)) ** 2
    dp = probe_detunings(params)
    widths = [params.gamma]
    widths += [float(w) for w in oc2 * params.gamma / np.abs(dp) ** 2 if w > 0]
    return 10.0 / min(widths)


def scenario_pulse(params, amplitudes):
    """Input pulse configured by the scenario, with defaults filled in"""
    width = params.pulse_width or default_pulse_width(params)
    if params.pulse_shape == 'gaussian':
        center = params.pulse_center if params.pulse_center is not None else 6.0 * width
        return gaussian_input_pulse(center, width, amplitudes)
    if params.pulse_shape == 'flat_top':
        center = params.pulse_center if params.pulse_center is not None else 10.0 + 0.5 * width
        return flat_top_input_pulse(center, width, amplitudes)
    return constant_input_pulse(amplitudes, width)


@dataclass
class PairAmplitudeField:
    """
    Pair amplitudes alpha_24 and alpha_34 on the (z, z') grid.

    Only coupled cloud pairs get full (z, z') blocks. Every uncoupled pair
    (mu, nu) factorizes as g_mu(z) * alpha_4^nu(z'), so one reduced amplitude
    per cloud stands for all of them.
    """
    pairs: Tuple[Tuple[int, int], ...]
    a24: np.ndarray
    a34: np.ndarray
    g24: np.ndarray
    g34: np.ndarray

    @classmethod
    def zeros(cls, cloud_count, n_nodes, pairs):
        nb = len(pairs)
        return cls(
            pairs=tuple(pairs),
            a24=np.zeros((nb, n_nodes, n_nodes), dtype=complex),
            a34=np.zeros((nb, n_nodes, n_nodes), dtype=complex),
            g24=np.zeros((cloud_count, n_nodes), dtype=complex),
            g34=np.zeros((cloud_count, n_nodes), dtype=complex)
        )

    @property
    def size(self):
        return 2 * self.a24.size + 2 * self.g24.size

    def to_vector(self):
        return np.concatenate([self.a24.ravel(), self.a34.ravel(),
                               self.g24.ravel(), self.g34.ravel()])

    @classmethod
    def from_vector(cls, vector, cloud_count, n_nodes, pairs):
        nb = len(pairs)
        block = nb * n_nodes * n_nodes
        red = cloud_count * n_nodes
        parts = np.split(np.asarray(vector), np.cumsum([block, block, red]))
        return cls(
            pairs=tuple(pairs),
            a24=parts[0].reshape(nb, n_nodes, n_nodes),
            a34=parts[1].reshape(nb, n_nodes, n_nodes),
            g24=parts[2].reshape(cloud_count, n_nodes),
            g34=parts[3].reshape(cloud_count, n_nodes)
        )

    def is_finite(self):
        return all(np.all(np.isfinite(a)) for a in (self.a24, self.a34, self.g24, self.g34))


@dataclass
class ProbeField:
    """Probe envelope per cloud at the current time slice plus decimated history"""
    omega_p: np.ndarray
    z: np.ndarray
    times: List[float] = field(default_factory=list)
    snapshots: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def zeros(cls, cloud_count, z):
        z = np.asarray(z, dtype=float)
        return cls(omega_p=np.zeros((cloud_count, z.size), dtype=complex), z=z)

    @property
    def cloud_count(self):
        return self.omega_p.shape[0]

    def z_index(self, z):
        idx = int(np.argmin(np.abs(self.z - z)))
        if abs(self.z[idx] - z) > 1e-9 * max(1.0, abs(z)):
            raise GridError(f"No recorded history at z={z}")
        return idx

    def record(self, t, omega_p):
        self.omega_p = omega_p
        self.times.append(float(t))
        self.snapshots.append(np.array(omega_p, copy=True))

    @property
    def history(self):
        """Recorded field, shape (clouds, z nodes, recorded times)"""
        if not self.snapshots:
            return np.zeros(self.omega_p.shape + (0,), dtype=complex)
        return np.stack(self.snapshots, axis=-1)

    @property
    def time_axis(self):
        return np.asarray(self.times)



@dataclass
class SolverState:
    pair: PairAmplitudeField
    probe: ProbeField
    t: float = 0.0
    step_count: int = 0


@dataclass
class PropagationResult:
    """
    Outcome of a time-domain run.

    p_plus and p_minus are the normal-mode probabilities along z for two
    clouds and None otherwise; transmitted and input_energy hold the time
    integral of |Omega_p|^2 per cloud at z = L and z = 0.
    """
    grid: Grid
    probe: ProbeField
    transmitted: np.ndarray
    input_energy: np.ndarray
    p_plus: Optional[np.ndarray] = None
    p_minus: Optional[np.ndarray] = None
    steps: int = 0
    wall_time: float = 0.0

    @property
    def z(self):
        return self.probe.z

    @property
    def times(self):
        return self.probe.time_axis

    @property
    def history(self):
        return self.probe.history

    @property
    def transmission(self):
        """Fraction of the input energy leaving the medium"""
        total = float(np.sum(self.input_energy))
        return float(np.sum(self.transmitted)) / total if total > 0 else 0.0

    def to_dict(self):
        return {
            'grid': self.grid.to_dict(),
            'steps': self.steps,
            'wall_time': self.wall_time,
            'transmitted': [float(e) for e in self.transmitted],
            'input_energy': [float(e) for e in self.input_energy],
            'transmission': self.transmission
        }
