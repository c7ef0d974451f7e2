"""
N-cloud lattice: nearest-neighbour propagation matrix, its closed-form
eigensystem, and the continuum complex-mass diffusion of a wide Gaussian.
"""
import logging

import numpy as np
import pandas as pd
from scipy.linalg import expm

from dipolar_eit.errors import KernelDomainError, ScenarioError
from dipolar_eit.models.lattice import DiffusionParams, LatticeSystem
from dipolar_eit.services.spectral import delta_s, require_uniform

logger = logging.getLogger(__name__)


def lattice_chis(params, kernel, coordination=None):
    """
    Diagonal and off-diagonal susceptibilities of the lattice matrix.

    chi_D = -kappa/Delta_p - K [Delta_s c 2 z_d rho_N/(Delta_s^2 - V0^2) + (1 - c 2 z_d rho_N)/Delta_s]
    chi_S = -K V0 2 z_d rho_N/(Delta_s^2 - V0^2)

    with K = kappa Omega_c^2/Delta_p^2, rho_N = rho/N and c the number of
    neighbours per cloud: 2 in the bulk, 1 for a two-cloud lattice, where
    chi_D +- chi_S reduces to eta+-.

    Returns:
        (chi_d, chi_s)
    """
    n = params.cloud_count
    if n < 2:
        raise ScenarioError("A lattice needs at least two clouds")
    require_uniform(params, "The lattice susceptibilities")
    if coordination is None:
        coordination = 1 if n == 2 else 2
    dp = complex(params.delta_p[0], params.gamma)
    ds = complex(delta_s(0.0, params))
    k = params.kappa[0] * params.omega_c[0] ** 2 / dp ** 2
    window = 2.0 * kernel.z_d * params.rho / n
    v0 = kernel.v0
    resonant = ds ** 2 - v0 ** 2
    chi_d = -params.kappa[0] / dp - k * (ds * coordination * window / resonant
                                          + (1.0 - coordination * window) / ds)
    chi_s = -k * v0 * window / resonant
    return complex(chi_d), complex(chi_s)


def lattice_system(params, kernel, coordination=None):
    chi_d, chi_s = lattice_chis(params, kernel, coordination)
    return LatticeSystem(n_clouds=params.cloud_count, chi_d=chi_d, chi_s=chi_s)


def mode_decomposition(system, w0):
    """Projections <u^k, W(0)> on the eigenvectors, k = 1..N"""
    return system.eigenvectors @ np.asarray(w0, dtype=complex)


def lattice_propagate(w0, z, system, method='closed'):
    """
    Solve dW/dz = i X W for the lattice.

    Args:
        w0: Field per cloud at z = 0
        z: Position or array of positions
        system: LatticeSystem
        method: 'closed' (Toeplitz eigensystem) or 'dense' (matrix exponential)

    Returns:
        (N,) array for scalar z, (len(z), N) otherwise
    """
    w0 = np.asarray(w0, dtype=complex)
    if w0.shape != (system.n_clouds,):
        raise ScenarioError(f"Expected {system.n_clouds} input amplitudes, got {w0.shape}")
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if method == 'closed':
        coeffs = mode_decomposition(system, w0)
        phases = np.exp(1j * zs[:, None] * system.eigenvalues[None, :])
        out = (coeffs[None, :] * phases) @ system.eigenvectors
    elif method == 'dense':
        out = np.array([expm(1j * zi * system.matrix) @ w0 for zi in zs])
    else:
        raise ScenarioError(f"Unknown lattice propagation method: {method}")
    return out[0] if np.ndim(z) == 0 else out


def eigenmode_table(system):
    """Eigenvalue and eigenvector components of every lattice mode"""
    eps = system.eigenvalues
    table = pd.DataFrame({'k': system.modes, 're_eps': eps.real, 'im_eps': eps.imag})
    vectors = system.eigenvectors
    for mu in range(system.n_clouds):
        table[f'u_{mu + 1}'] = vectors[:, mu]
    return table


def diffusion_params(system, ell):
    """Continuum parameters 1/m = 2 chi_S ell^2 and Gamma = chi_D + 2 chi_S"""
    inv_mass = 2.0 * system.chi_s * ell ** 2
    return DiffusionParams(
        m_r_inv=float(inv_mass.real),
        m_i_inv=float(inv_mass.imag),
        gamma_cap=complex(system.chi_d + 2.0 * system.chi_s)
    )


def gaussian_norm_width(z, sigma0, dp):
    """
    Norm and width of a transverse Gaussian under complex-mass diffusion.

    The field evolves as sigma0/sqrt(s) exp(-y^2/(4 s) + i Gamma z) with
    s(z) = sigma0^2 + i z/(2m), so the intensity keeps a Gaussian profile with

        h(z) = exp(-2 Im Gamma z) sigma0/sqrt(Re s)
        sigma(z)^2 = |s|^2/Re s

    Args:
        z: Position or array of positions
        sigma0: Initial intensity width
        dp: DiffusionParams

    Returns:
        (h, sigma_sq)
    """
    if not sigma0 > 0:
        raise KernelDomainError("sigma0 must be positive")
    z = np.asarray(z, dtype=float)
    s = sigma0 ** 2 + 0.5j * z * dp.inv_mass
    if np.any(s.real <= 0):
        raise KernelDomainError(
            "Closed-form diffusion breaks down: Re s(z) <= 0 within the requested range"
        )
    h = np.exp(-2.0 * dp.gamma_i * z) * sigma0 / np.sqrt(s.real)
    sigma_sq = np.abs(s) ** 2 / s.real
    return h, sigma_sq


def gaussian_lattice_input(n_clouds, sigma0, ell):
    """Field exp(-y^2/(4 sigma0^2)) centred on the lattice, intensity width sigma0"""
    y = ell * (np.arange(n_clouds) - 0.5 * (n_clouds - 1))
    return np.exp(-y ** 2 / (4.0 * sigma0 ** 2)).astype(complex)


def lattice_moments(w, ell=1.0):
    """
    Discrete intensity moments across the lattice.

    Args:
        w: Fields, shape (N,) or (positions, N)
        ell: Cloud spacing

    Returns:
        (norm, centroid, second moment about the centroid)
    """
    intensity = np.abs(np.asarray(w)) ** 2
    n = intensity.shape[-1]
    y = ell * (np.arange(n) - 0.5 * (n - 1))
    norm = intensity.sum(axis=-1)
    centroid = (intensity * y).sum(axis=-1) / norm
    spread = (intensity * (y - np.expand_dims(centroid, -1)) ** 2).sum(axis=-1) / norm
    return norm, centroid, spread


def diffusion_comparison(params, kernel, z, sigma0, n_clouds=None):
    """
    Closed-form diffusion laws against a discrete lattice run.

    Args:
        params: ScenarioParams of the lattice (cloud_count overridden by n_clouds)
        kernel: DdiKernel
        z: Positions
        sigma0: Initial intensity width (length units)
        n_clouds: Lattice size

    Returns:
        DataFrame with z, h_analytic, sigma_sq_analytic, h_discrete, sigma_sq_discrete
    """
    if n_clouds is not None and n_clouds != params.cloud_count:
        params = params.replace(cloud_count=n_clouds,
                                **{name: (getattr(params, name)[0],) * n_clouds
                                   for name in ('omega_c', 'delta_p', 'delta_c', 'kappa', 'phi_c')},
                                spinwave_weights=None)
    system = lattice_system(params, kernel)
    ell = params.separation_ell
    dp = diffusion_params(system, ell)
    z = np.asarray(z, dtype=float)
    h, sigma_sq = gaussian_norm_width(z, sigma0, dp)

    w0 = gaussian_lattice_input(system.n_clouds, sigma0, ell)
    norm, _, spread = lattice_moments(lattice_propagate(w0, z, system), ell)
    logger.info(f"Diffusion check on {system.n_clouds} clouds: 1/m={dp.inv_mass:.4g}, Gamma={dp.gamma_cap:.4g}")
    return pd.DataFrame({
        'z': z,
        'h_analytic': h,
        'sigma_sq_analytic': sigma_sq,
        'h_discrete': norm / np.sum(np.abs(w0) ** 2),
        'sigma_sq_discrete': spread
    })
