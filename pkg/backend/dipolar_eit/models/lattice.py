"""
N-cloud lattice propagation matrix and its continuum (complex-mass) limit.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LatticeSystem:
    """
    Tridiagonal Toeplitz propagation matrix with chi_d on the diagonal and
    chi_s on both off-diagonals, open ends.
    """
    n_clouds: int
    chi_d: complex
    chi_s: complex

    @property
    def modes(self):
        return np.arange(1, self.n_clouds + 1)

    @property
    def matrix(self):
        n = self.n_clouds
        return (self.chi_d * np.eye(n, dtype=complex)
                + self.chi_s * (np.eye(n, k=1, dtype=complex) + np.eye(n, k=-1, dtype=complex)))

    @property
    def eigenvalues(self):
        """epsilon_k = chi_d + 2 chi_s cos(k pi/(N+1)), k = 1..N"""
        k = self.modes
        return self.chi_d + 2.0 * self.chi_s * np.cos(k * np.pi / (self.n_clouds + 1))

    @property
    def eigenvectors(self):
        """Row k-1 holds u^k, with u^k_mu = sqrt(2/(N+1)) sin(k mu pi/(N+1))"""
        n = self.n_clouds
        k = self.modes[:, None]
        mu = self.modes[None, :]
        return np.sqrt(2.0 / (n + 1)) * np.sin(k * mu * np.pi / (n + 1))

    def to_dict(self):
        return {
            'n_clouds': self.n_clouds,
            'chi_d': [self.chi_d.real, self.chi_d.imag],
            'chi_s': [self.chi_s.real, self.chi_s.imag]
        }


@dataclass(frozen=True)
class DiffusionParams:
    """
    Continuum parameters: 1/m = 2 chi_s ell^2 and Gamma = chi_d + 2 chi_s.

    m_r_inv and m_i_inv are the real and imaginary parts of 1/m.
    """
    m_r_inv: float
    m_i_inv: float
    gamma_cap: complex

    @property
    def inv_mass(self):
        return complex(self.m_r_inv, self.m_i_inv)

    @property
    def gamma_i(self):
        return self.gamma_cap.imag

    def to_dict(self):
        return {
            'm_r_inv': self.m_r_inv,
            'm_i_inv': self.m_i_inv,
            'gamma_cap': [self.gamma_cap.real, self.gamma_cap.imag]
        }
