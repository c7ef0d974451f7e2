"""
Frequency-domain results: susceptibilities, normal-mode coefficients,
optical depths and absorption peaks.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid


@dataclass(frozen=True)
class Susceptibility:
    """
    Local and non-local susceptibilities on the grid at one frequency.

    chi_l[mu] is a z profile; chi_n[(mu, nu)] is a (z, z') matrix, stored
    only for coupled cloud pairs (it vanishes wherever the coupling does).
    z_prime is the source grid, longer than z when the spinwave is extended
    past the medium ends.
    """
    z: np.ndarray
    z_prime: np.ndarray
    omega: float
    chi_l: np.ndarray
    chi_n: Dict[Tuple[int, int], np.ndarray]

    def nonlocal_integral(self, pair):
        """Integral of chi_n over z' for every z"""
        if pair not in self.chi_n:
            return np.zeros(self.z.size, dtype=complex)
        return trapezoid(self.chi_n[pair], self.z_prime, axis=1)


@dataclass(frozen=True)
class NormalModeCoeffs:
    """
    Square-well wavenumbers and inverse group velocities of the two normal modes.

    Without a control field the inverse velocities are zero and v_plus,
    v_minus are infinite.
    """
    eta_plus: complex
    eta_minus: complex
    inv_v_plus: complex
    inv_v_minus: complex

    @property
    def v_plus(self):
        return _velocity(self.inv_v_plus)

    @property
    def v_minus(self):
        return _velocity(self.inv_v_minus)


def _velocity(inverse):
    if inverse == 0:
        return complex(np.inf, 0.0)
    return 1.0 / complex(inverse)


@dataclass(frozen=True)
class OpticalDepth:
    """Integrated-susceptibility densities X+/-(z) and their totals over the medium"""
    z: np.ndarray
    x_plus: np.ndarray
    x_minus: np.ndarray
    total_plus: complex
    total_minus: complex

    def cumulative(self):
        """Running integrals of X+ and X- from 0 to each z"""
        plus = cumulative_trapezoid(self.x_plus, self.z, initial=0.0)
        minus = cumulative_trapezoid(self.x_minus, self.z, initial=0.0)
        return plus, minus


@dataclass(frozen=True)
class AbsorptionPeak:
    position: float
    height: float
    width: float
    prominence: float

    def to_dict(self):
        return {
            'position': self.position,
            'height': self.height,
            'width': self.width,
            'prominence': self.prominence
        }
