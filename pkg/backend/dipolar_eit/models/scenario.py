"""
Scenario parameters in gamma-normalized units.
Frequencies are in units of gamma, lengths in units of L, hbar = 1.
"""
import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from dipolar_eit.errors import ScenarioError

MAGIC_ANGLE = float(np.arccos(1.0 / np.sqrt(3.0)))

PER_CLOUD_FIELDS = ('omega_c', 'delta_p', 'delta_c', 'kappa', 'phi_c')


@dataclass(frozen=True)
class UnitScale:
    """Physical values of the two normalization units, kept for output labels"""
    frequency: float = 1.0
    length: float = 1.0
    frequency_label: str = 'gamma'
    length_label: str = 'L'

    def to_dict(self):
        return {
            'frequency': self.frequency,
            'length': self.length,
            'frequency_label': self.frequency_label,
            'length_label': self.length_label
        }


@dataclass(frozen=True)
class ScenarioParams:
    cloud_count: int
    separation_ell: float
    c3: float
    omega_c: Tuple[float, ...]
    delta_p: Tuple[float, ...]
    kappa: Tuple[float, ...]
    delta_c: Tuple[float, ...] = ()
    phi_c: Tuple[float, ...] = ()
    gamma: float = 1.0
    length_L: float = 1.0
    beta: float = MAGIC_ANGLE
    k_c: float = 0.0
    k_s: float = 0.0
    rho: Optional[float] = None
    c_light: Optional[float] = None
    retarded_frame: bool = True
    spinwave_weights: Optional[Tuple[float, ...]] = None
    pulse_shape: str = 'gaussian'
    pulse_width: Optional[float] = None
    pulse_center: Optional[float] = None
    name: str = 'custom'
    units: UnitScale = field(default_factory=UnitScale)

    def __post_init__(self):
        n = self.cloud_count
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ScenarioError("cloud_count must be an integer >= 1")
        if not self.gamma > 0:
            raise ScenarioError("gamma must be positive")
        if not self.length_L > 0:
            raise ScenarioError("length_L must be positive")
        if n >= 2 and not self.separation_ell > 0:
            raise ScenarioError("separation_ell must be positive for two or more clouds")

        # Broadcast the optional per-cloud arrays before checking lengths
        if not self.delta_c:
            object.__setattr__(self, 'delta_c', (0.0,) * n)
        if not self.phi_c:
            object.__setattr__(self, 'phi_c', (0.0,) * n)
        for name in PER_CLOUD_FIELDS:
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != n:
                raise ScenarioError(
                    f"{name} has {len(values)} entries, expected {n} (one per cloud)"
                )
            object.__setattr__(self, name, values)

        if self.rho is None:
            object.__setattr__(self, 'rho', 1.0 / self.length_L)
        elif abs(self.rho * self.length_L - 1.0) > 1e-9:
            raise ScenarioError("rho must equal 1/L for a single shared excitation")

        if self.spinwave_weights is not None:
            weights = tuple(float(w) for w in self.spinwave_weights)
            if len(weights) != n:
                raise ScenarioError(
                    f"spinwave_weights has {len(weights)} entries, expected {n} (one per cloud)"
                )
            if min(weights) < 0 or sum(weights) <= 0:
                raise ScenarioError("spinwave_weights must be non-negative with a positive sum")
            object.__setattr__(self, 'spinwave_weights', weights)

        if self.pulse_width is not None and not self.pulse_width > 0:
            raise ScenarioError("pulse width must be positive")
        if self.pulse_shape not in ('gaussian', 'flat_top', 'constant'):
            raise ScenarioError(f"Unknown pulse shape: {self.pulse_shape}")
        if not self.retarded_frame and not (self.c_light and self.c_light > 0):
            raise ScenarioError("c_light must be positive when the retarded frame is disabled")

    @property
    def v0(self):
        """Peak inter-cloud coupling C3/ell^3"""
        if self.separation_ell <= 0:
            return 0.0
        return self.c3 / self.separation_ell ** 3

    @property
    def phi_ab(self):
        """Control phase difference between the first two clouds"""
        if self.cloud_count < 2:
            return 0.0
        return self.phi_c[0] - self.phi_c[1]

    @property
    def is_uniform(self):
        """True when every per-cloud drive parameter is the same in all clouds"""
        return all(len(set(getattr(self, name))) == 1 for name in PER_CLOUD_FIELDS[:-1])

    @property
    def inverse_c(self):
        """1/c in simulation units, zero in the retarded frame"""
        if self.retarded_frame or not self.c_light:
            return 0.0
        return 1.0 / self.c_light

    def replace(self, **changes):
        """Return a validated copy with some fields changed"""
        if 'v0' in changes:
            ell = changes.get('separation_ell', self.separation_ell)
            changes['c3'] = changes.pop('v0') * ell ** 3
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return {
            'name': self.name,
            'gamma': self.gamma,
            'length_L': self.length_L,
            'cloud_count': self.cloud_count,
            'separation_ell': self.separation_ell,
            'c3': self.c3,
            'v0': self.v0,
            'beta': self.beta,
            'omega_c': list(self.omega_c),
            'delta_p': list(self.delta_p),
            'delta_c': list(self.delta_c),
            'kappa': list(self.kappa),
            'phi_c': list(self.phi_c),
            'k_c': self.k_c,
            'k_s': self.k_s,
            'rho': self.rho,
            'c_light': self.c_light,
            'retarded_frame': self.retarded_frame,
            'spinwave_weights': list(self.spinwave_weights) if self.spinwave_weights else None,
            'pulse': {
                'shape': self.pulse_shape,
                'width': self.pulse_width,
                'center': self.pulse_center
            },
            'units': self.units.to_dict()
        }


@dataclass(frozen=True)
class ComplexDetuning:
    """Probe detuning with the decay of state |2> folded into its imaginary part"""
    delta_p_complex: complex

    @property
    def real(self):
        return self.delta_p_complex.real

    @property
    def imag(self):
        return self.delta_p_complex.imag

    def __complex__(self):
        return complex(self.delta_p_complex)


def complex_probe_detuning(params, cloud=0):
    """
    Complex probe detuning of one cloud.

    Args:
        params: ScenarioParams
        cloud: Cloud index

    Returns:
        ComplexDetuning delta_p + i*gamma
    """
    if not 0 <= cloud < params.cloud_count:
        raise IndexError(f"Cloud index {cloud} out of range for {params.cloud_count} clouds")
    return ComplexDetuning(complex(params.delta_p[cloud], params.gamma))


def probe_detunings(params):
    """Array of complex probe detunings, one per cloud"""
    return np.asarray(params.delta_p, dtype=float) + 1j * params.gamma


def control_detunings(params):
    """Two-photon detunings delta_p + delta_c, one per cloud"""
    return np.asarray(params.delta_p, dtype=float) + np.asarray(params.delta_c, dtype=float)
