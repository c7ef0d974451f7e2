"""
Anisotropic dipole-dipole exchange kernel between atoms of parallel clouds.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from dipolar_eit.errors import KernelDomainError
from dipolar_eit.models.scenario import MAGIC_ANGLE

PROFILES = ('actual', 'square')


def magic_angle():
    """Alignment angle at which the collinear (intra-cloud) coupling vanishes"""
    return MAGIC_ANGLE


def fwhm_halfwidth(ell):
    """
    Half width z_d of the inter-cloud kernel at the magic angle.

    Args:
        ell: Inter-cloud separation

    Returns:
        z_d = ell * sqrt(4**(1/5) - 1)
    """
    if not ell > 0:
        raise KernelDomainError("ell must be positive")
    return ell * np.sqrt(4.0 ** 0.2 - 1.0)


@dataclass(frozen=True)
class DdiKernel:
    c3: float
    beta: float
    ell: float
    profile: str = 'actual'

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise KernelDomainError(f"Unknown kernel profile: {self.profile}")

    @classmethod
    def from_params(cls, params, profile='actual'):
        return cls(c3=params.c3, beta=params.beta, ell=params.separation_ell, profile=profile)

    @property
    def v0(self):
        return self.c3 / self.ell ** 3

    @property
    def z_d(self):
        return fwhm_halfwidth(self.ell)

    @property
    def is_magic(self):
        return abs(self.beta - MAGIC_ANGLE) < 1e-12

    @property
    def anisotropy(self):
        """1 - 3cos^2(beta), snapped to zero at the magic angle"""
        if self.is_magic:
            return 0.0
        return 1.0 - 3.0 * np.cos(self.beta) ** 2

    def with_profile(self, profile):
        return DdiKernel(self.c3, self.beta, self.ell, profile)

    def to_dict(self):
        return {
            'c3': self.c3,
            'beta': self.beta,
            'ell': self.ell,
            'v0': self.v0,
            'z_d': self.z_d,
            'profile': self.profile
        }


def _actual(kernel, dz, offset):
    dz2 = dz * dz
    r2 = dz2 + offset * offset
    # [1 - 3cos^2(b) dz^2/r^2] rewritten so the magic angle cancels exactly
    return kernel.c3 * (offset * offset + kernel.anisotropy * dz2) / r2 ** 2.5


def ddi_strength(kernel, z1, z2, same_cloud=False):
    """
    Exchange coupling between atoms at axial positions z1 and z2.

    Args:
        kernel: DdiKernel
        z1, z2: Axial positions (scalars or broadcastable arrays)
        same_cloud: Evaluate the collinear (transverse offset 0) coupling

    Returns:
        Coupling strength in units of gamma
    """
    dz = np.subtract(z1, z2, dtype=float)
    if same_cloud:
        if np.any(dz == 0.0):
            raise KernelDomainError("coincident atoms")
        value = _actual(kernel, dz, 0.0)
    else:
        value = _actual(kernel, dz, kernel.ell)
    return float(value) if np.ndim(value) == 0 else value


def square_well_strength(kernel, z1, z2):
    """V0 inside the half-width window, zero outside"""
    dz = np.abs(np.subtract(z1, z2, dtype=float))
    value = np.where(dz < kernel.z_d, kernel.v0, 0.0)
    return float(value) if np.ndim(value) == 0 else value


def kernel_matrix(kernel, z, z_prime, same_cloud=False):
    """
    Dense coupling matrix V[i, j] between grid points z[i] and z_prime[j].

    The square-well profile replaces the inter-cloud kernel only; same-cloud
    pairs keep the collinear kernel and coincident points are set to zero.
    """
    dz = np.asarray(z, dtype=float)[:, None] - np.asarray(z_prime, dtype=float)[None, :]
    if same_cloud:
        matrix = np.zeros_like(dz)
        if kernel.anisotropy != 0.0:
            off = dz != 0.0
            matrix[off] = _actual(kernel, dz[off], 0.0)
        return matrix
    if kernel.profile == 'square':
        return np.where(np.abs(dz) < kernel.z_d, kernel.v0, 0.0)
    return _actual(kernel, dz, kernel.ell)


def integrated_strength(kernel):
    """Area under the inter-cloud profile over all separations"""
    if kernel.profile == 'square':
        return 2.0 * kernel.z_d * kernel.v0
    return kernel.c3 * (4.0 + 2.0 * kernel.anisotropy) / (3.0 * kernel.ell ** 2)


def kernel_fwhm(kernel):
    """Full width at half maximum of the inter-cloud kernel, found numerically"""
    peak = ddi_strength(kernel, 0.0, 0.0)
    half = lambda x: ddi_strength(kernel, x, 0.0) - 0.5 * peak  # noqa: E731
    upper = kernel.ell
    while half(upper) > 0:
        upper *= 2.0
    return 2.0 * brentq(half, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)
