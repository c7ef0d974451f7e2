"""
Frequency-domain layer: susceptibilities, normal modes, optical depths and
the continuous-wave steady state.

Fields are taken to evolve as exp(i omega t), so Delta_s(omega) =
delta_p + delta_c - omega - Omega_c^2/Delta_p.
"""
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import solve
from scipy.optimize import brentq
from scipy.signal import find_peaks, peak_widths

from dipolar_eit.errors import GridError, ScenarioError
from dipolar_eit.models.kernel import fwhm_halfwidth, kernel_matrix
from dipolar_eit.models.scenario import control_detunings, probe_detunings
from dipolar_eit.models.spectra import AbsorptionPeak, NormalModeCoeffs, OpticalDepth, Susceptibility

logger = logging.getLogger(__name__)

BOUNDARIES = ('truncate', 'extend')
TINY = 1e-300

# Source grid, trapezoid weights and coupling matrices shared by every
# frequency or detuning evaluated on the same spinwave
SourceGrid = namedtuple('SourceGrid', ['source', 'weights', 'pairs', 'matrices'])


def _guard(den):
    """Keep complex denominators away from exact zero"""
    return np.where(np.abs(den) < TINY, TINY, den)


def _trapezoid_weights(z):
    w = np.full(z.size, z[1] - z[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _require_two_clouds(params, what):
    if params.cloud_count != 2:
        raise ScenarioError(f"{what} needs exactly two clouds, got {params.cloud_count}")


def require_uniform(params, what):
    """Reject scenarios whose clouds differ in omega_c, delta_p, delta_c or kappa"""
    if not params.is_uniform:
        raise ScenarioError(
            f"{what} assumes identical clouds; omega_c, delta_p, delta_c and kappa must match"
        )


def delta_s(omega, params, cloud=0):
    """
    Two-photon detuning dressed by the control field.

    Args:
        omega: Probe frequency offset (scalar or array)
        params: ScenarioParams
        cloud: Cloud index

    Returns:
        delta_p + delta_c - omega - |Omega_c|^2/Delta_p
    """
    dp = complex(params.delta_p[cloud], params.gamma)
    dc = params.delta_p[cloud] + params.delta_c[cloud]
    return dc - np.asarray(omega) - abs(params.omega_c[cloud]) ** 2 / dp


def phase_matching(z, z_prime, params, pair=(0, 1)):
    """Relative phase phi_{mu nu}(z, z') = -(k_c - k_s)(z - z') - (phi_mu - phi_nu)"""
    mu, nu = pair
    phi = params.phi_c[mu] - params.phi_c[nu]
    return -(params.k_c - params.k_s) * (np.asarray(z) - np.asarray(z_prime)) - phi


def control_field(params, z):
    """Omega_c per cloud on z, carrying the wavevector k_c and the cloud phase"""
    z = np.asarray(z, dtype=float)
    oc = np.asarray(params.omega_c, dtype=float)[:, None]
    phase = params.k_c * z[None, :] + np.asarray(params.phi_c)[:, None]
    return oc * np.exp(1j * phase)


def coupled_pairs(params, kernel, collapse=True):
    """
    Ordered cloud pairs with a non-vanishing exchange coupling.

    Nearest neighbours are always coupled; a cloud couples to itself only away
    from the magic angle. With collapse disabled every pair is listed.
    """
    n = params.cloud_count
    if not collapse:
        return [(mu, nu) for mu in range(n) for nu in range(n)]
    pairs = []
    for mu in range(n):
        for nu in range(n):
            if abs(mu - nu) == 1 or (mu == nu and kernel.anisotropy != 0.0):
                pairs.append((mu, nu))
    return pairs


def coupling_matrices(kernel, z, z_prime, pairs):
    """Coupling V^{mu nu}(z, z') for each listed pair; non-neighbours get zeros"""
    matrices = {}
    for mu, nu in pairs:
        if mu == nu:
            matrices[(mu, nu)] = kernel_matrix(kernel, z, z_prime, same_cloud=True)
        elif abs(mu - nu) == 1:
            matrices[(mu, nu)] = kernel_matrix(kernel, z, z_prime, same_cloud=False)
        else:
            matrices[(mu, nu)] = np.zeros((len(z), len(z_prime)))
    return matrices


def source_grid(params, kernel, spinwave, boundary='truncate'):
    """
    Source-side grid for the z' integrals.

    'truncate' integrates over the medium only. 'extend' continues the
    spinwave density past both ends by the kernel's reach (z_d for the
    square well, 20 ell for the actual kernel).
    """
    if boundary not in BOUNDARIES:
        raise ScenarioError(f"Unknown boundary treatment: {boundary}. Must be one of: {list(BOUNDARIES)}")
    z = spinwave.z
    source = spinwave
    if boundary == 'extend' and params.cloud_count >= 2:
        reach = kernel.z_d if kernel.profile == 'square' else 20.0 * kernel.ell
        source = spinwave.padded(int(np.ceil(reach / (z[1] - z[0]))) + 1)
    pairs = coupled_pairs(params, kernel)
    matrices = coupling_matrices(kernel, z, source.z, pairs)
    return SourceGrid(source, _trapezoid_weights(source.z), pairs, matrices)


def susceptibility(params, kernel, spinwave, omega=0.0, boundary='truncate', exact=False, prepared=None):
    """
    Local and non-local susceptibilities on the spinwave grid.

    Args:
        params: ScenarioParams
        kernel: DdiKernel (its profile selects actual or square well)
        spinwave: SpinwaveProfile
        omega: Frequency offset
        boundary: 'truncate' or 'extend', see source_grid
        exact: Keep the omega dependence of Delta_p in the eliminated
            amplitudes instead of evaluating it at omega = 0
        prepared: SourceGrid from an earlier call on the same spinwave

    Returns:
        Susceptibility
    """
    if prepared is None:
        prepared = source_grid(params, kernel, spinwave, boundary)
    source, w, _, matrices = prepared
    z = spinwave.z

    dp = probe_detunings(params)
    d_probe = dp - omega if exact else dp
    oc2 = np.abs(np.asarray(params.omega_c, dtype=float)) ** 2
    s = control_detunings(params) - omega - oc2 / d_probe
    kappa = np.asarray(params.kappa, dtype=float)
    norm = spinwave.norm()
    density = source.density
    ctrl = control_field(params, z)
    ctrl_prime = control_field(params, source.z)

    n = params.cloud_count
    chi_l = np.empty((n, z.size), dtype=complex)
    chi_n = {}
    for mu in range(n):
        correction = np.zeros(z.size, dtype=complex)
        for nu in range(n):
            if (mu, nu) not in matrices:
                continue
            v = matrices[(mu, nu)]
            det = _guard(s[mu] * s[nu] - v ** 2)
            correction += (s[nu] / det - 1.0 / s[mu]) @ (w * density[nu])
            chi_n[(mu, nu)] = (
                -kappa[mu] * (np.conj(ctrl[mu]) * spinwave.amp[mu])[:, None] * v
                * (ctrl_prime[nu] * np.conj(source.amp[nu]))[None, :]
                / (d_probe[mu] * d_probe[nu] * det)
            )
        chi_l[mu] = (
            -omega * params.inverse_c
            - kappa[mu] * norm / d_probe[mu]
            - kappa[mu] * oc2[mu] / d_probe[mu] ** 2 * (norm / s[mu] + correction)
        )
    return Susceptibility(z=z, z_prime=source.z, omega=omega, chi_l=chi_l, chi_n=chi_n)


def chi_local(params, kernel, spinwave, omega=0.0, cloud=0, boundary='truncate'):
    """Local susceptibility profile chi_L of one cloud"""
    return susceptibility(params, kernel, spinwave, omega, boundary).chi_l[cloud]


def chi_nonlocal(params, kernel, spinwave, omega=0.0, pair=(0, 1), boundary='truncate'):
    """Non-local susceptibility matrix chi_N(z, z') of a cloud pair, zero if uncoupled"""
    chi = susceptibility(params, kernel, spinwave, omega, boundary)
    if pair in chi.chi_n:
        return chi.chi_n[pair]
    return np.zeros((chi.z.size, chi.z_prime.size), dtype=complex)


def _eta_pm(params, delta_p, v0):
    """Square-well wavenumbers and inverse velocities for an array of probe detunings"""
    require_uniform(params, "The square-well normal-mode analysis")
    delta_p = np.asarray(delta_p, dtype=float)
    dp = delta_p + 1j * params.gamma
    oc2 = params.omega_c[0] ** 2
    ds = delta_p + params.delta_c[0] - oc2 / dp
    k = params.kappa[0] * oc2 / dp ** 2
    zr = fwhm_halfwidth(params.separation_ell) * params.rho if v0 != 0.0 else 0.0
    eta, inv_v = [], []
    for sign in (1.0, -1.0):
        shifted = _guard(ds - sign * v0)
        eta.append(-params.kappa[0] / dp - k * (zr / shifted + (1.0 - zr) / ds))
        inv_v.append(params.inverse_c + k * (zr / shifted ** 2 + (1.0 - zr) / ds ** 2))
    return eta, inv_v


def normal_mode_coeffs(params):
    """
    Square-well normal-mode coefficients of two identical clouds.

    eta+- = -kappa/Delta_p - kappa Omega_c^2/Delta_p^2 [z_d rho/(Delta_s -+ V0)
    + (1 - z_d rho)/Delta_s], with Delta_s taken at omega = 0.

    Returns:
        NormalModeCoeffs
    """
    _require_two_clouds(params, "Normal modes")
    (eta_p, eta_m), (inv_p, inv_m) = _eta_pm(params, params.delta_p[0], params.v0)
    return NormalModeCoeffs(
        eta_plus=complex(eta_p),
        eta_minus=complex(eta_m),
        inv_v_plus=complex(inv_p),
        inv_v_minus=complex(inv_m)
    )


def group_velocity(params):
    """Group velocities (v+, v-) of the two normal modes"""
    coeffs = normal_mode_coeffs(params)
    return coeffs.v_plus, coeffs.v_minus


def normal_modes(omega_a, omega_b, phi_ab):
    """Symmetric and antisymmetric superpositions Omega_A +- exp(-i phi_AB) Omega_B"""
    rotated = np.exp(-1j * phi_ab) * np.asarray(omega_b)
    return np.asarray(omega_a) + rotated, np.asarray(omega_a) - rotated


def inverse_normal_modes(omega_plus, omega_minus, phi_ab):
    """Per-cloud fields (Omega_A, Omega_B) from the normal modes"""
    omega_plus = np.asarray(omega_plus)
    omega_minus = np.asarray(omega_minus)
    return 0.5 * (omega_plus + omega_minus), 0.5 * np.exp(1j * phi_ab) * (omega_plus - omega_minus)


def analytic_two_cloud_field(omega_a0, omega_b0, z, omega, coeffs, phi_ab):
    """
    Square-well solution of the two-cloud propagation equation.

    Each normal mode picks up exp(i(eta - omega/v) z); the per-cloud fields
    are recombined from the modes.

    Args:
        omega_a0, omega_b0: Input spectra at z = 0
        z: Positions (scalar or array)
        omega: Frequency offset
        coeffs: NormalModeCoeffs
        phi_ab: Control phase difference

    Returns:
        (omega_a, omega_b) broadcast over z
    """
    z = np.asarray(z, dtype=float)
    plus0, minus0 = normal_modes(omega_a0, omega_b0, phi_ab)
    plus = plus0 * np.exp(1j * (coeffs.eta_plus - omega * coeffs.inv_v_plus) * z)
    minus = minus0 * np.exp(1j * (coeffs.eta_minus - omega * coeffs.inv_v_minus) * z)
    return inverse_normal_modes(plus, minus, phi_ab)


def integrated_optical_depth(params, kernel, spinwave, boundary='truncate', prepared=None):
    """
    Local-field optical depths X+-(z) = chi_L(z) +- exp(i phi_AB) int chi_N^{AB}(z, z') dz'.

    Evaluated at omega = 0; totals are trapezoid integrals over the medium.

    Returns:
        OpticalDepth
    """
    _require_two_clouds(params, "Optical depth")
    require_uniform(params, "The local-field optical depth")
    chi = susceptibility(params, kernel, spinwave, 0.0, boundary, prepared=prepared)
    nonlocal_part = np.exp(1j * params.phi_ab) * chi.nonlocal_integral((0, 1))
    x_plus = chi.chi_l[0] + nonlocal_part
    x_minus = chi.chi_l[0] - nonlocal_part
    return OpticalDepth(
        z=chi.z,
        x_plus=x_plus,
        x_minus=x_minus,
        total_plus=complex(trapezoid(x_plus, chi.z)),
        total_minus=complex(trapezoid(x_minus, chi.z))
    )


def prob_pm(probe, phi_ab, z=None):
    """
    Probability of finding the photon in each normal mode.

    P+-(z) = int |Omega+-(z, t)|^2 dt / int (|Omega+(0, t)|^2 + |Omega-(0, t)|^2) dt

    Args:
        probe: ProbeField with a recorded history of a two-cloud run
        phi_ab: Control phase difference
        z: Single position to evaluate, default every recorded node

    Returns:
        (p_plus, p_minus), arrays over z or floats when z is given
    """
    if probe.cloud_count != 2:
        raise ScenarioError(f"Normal modes need exactly two clouds, got {probe.cloud_count}")
    times = probe.time_axis
    if times.size < 2:
        raise GridError("No field history recorded")
    history = probe.history
    plus, minus = normal_modes(history[0], history[1], phi_ab)
    e_plus = trapezoid(np.abs(plus) ** 2, times, axis=-1)
    e_minus = trapezoid(np.abs(minus) ** 2, times, axis=-1)
    total = e_plus[0] + e_minus[0]
    if total <= 0:
        raise GridError("Input pulse carries no energy at z = 0")
    if z is not None:
        idx = probe.z_index(z)
        return float(e_plus[idx] / total), float(e_minus[idx] / total)
    return e_plus / total, e_minus / total


def analytic_probabilities(params, kernel, spinwave, amplitudes, phi_ab=None, boundary='truncate'):
    """
    Local-field prediction P+-(z) = P+-(0) exp(-2 Im int_0^z X+-).

    Returns:
        (z, p_plus, p_minus)
    """
    phi_ab = params.phi_ab if phi_ab is None else phi_ab
    depth = integrated_optical_depth(params, kernel, spinwave, boundary)
    plus0, minus0 = normal_modes(amplitudes[0], amplitudes[1], phi_ab)
    total = abs(plus0) ** 2 + abs(minus0) ** 2
    cum_plus, cum_minus = depth.cumulative()
    p_plus = abs(plus0) ** 2 / total * np.exp(-2.0 * cum_plus.imag)
    p_minus = abs(minus0) ** 2 / total * np.exp(-2.0 * cum_minus.imag)
    return depth.z, p_plus, p_minus


def cumulative_matrix(n_nodes, dz):
    """Matrix of the running trapezoid integral from z = 0 on a uniform grid"""
    c = np.tril(np.full((n_nodes, n_nodes), dz))
    c[:, 0] = 0.5 * dz
    np.fill_diagonal(c, 0.5 * dz)
    c[0, 0] = 0.0
    return c


def steady_state_field(params, kernel, spinwave, amplitudes, omega=0.0):
    """
    Continuous-wave probe field on the grid without the local-field approximation.

    Solves (I - i C X) Omega = Omega(0), where X holds chi_L on the diagonal
    and chi_N weighted by the trapezoid rule off it, and C is the running
    trapezoid integral. The amplitudes keep their exact omega dependence, so
    at omega = 0 this is the fixed point of the discrete time-domain system.

    Args:
        params: ScenarioParams
        kernel: DdiKernel
        spinwave: SpinwaveProfile on the solver grid
        amplitudes: Input amplitude per cloud at z = 0
        omega: Frequency offset

    Returns:
        Complex array (clouds, z nodes)
    """
    chi = susceptibility(params, kernel, spinwave, omega, exact=True)
    n = params.cloud_count
    m = spinwave.z.size
    w = _trapezoid_weights(spinwave.z)
    x = np.zeros((n * m, n * m), dtype=complex)
    for mu in range(n):
        x[mu * m:(mu + 1) * m, mu * m:(mu + 1) * m] += np.diag(chi.chi_l[mu])
    for (mu, nu), block in chi.chi_n.items():
        x[mu * m:(mu + 1) * m, nu * m:(nu + 1) * m] += block * w[None, :]
    c = np.kron(np.eye(n), cumulative_matrix(m, spinwave.z[1] - spinwave.z[0]))
    rhs = np.repeat(np.asarray(amplitudes, dtype=complex), m)
    field = solve(np.eye(n * m) - 1j * c @ x, rhs)
    return field.reshape(n, m)


def noninteracting_depth(params, delta_p):
    """Optical depth of the bare EIT medium (V = 0) over the probe detunings"""
    require_uniform(params, "The non-interacting optical depth")
    delta_p = np.asarray(delta_p, dtype=float)
    dp = delta_p + 1j * params.gamma
    oc2 = params.omega_c[0] ** 2
    ds = delta_p + params.delta_c[0] - oc2 / dp
    return params.length_L * (-params.kappa[0] / dp - params.kappa[0] * oc2 / dp ** 2 / ds)


def sweep_eta(params, delta_p):
    """
    Square-well optical depths eta+-.L over an array of probe detunings.

    Returns:
        (eta_plus_L, eta_minus_L) complex arrays
    """
    _require_two_clouds(params, "Normal modes")
    (eta_p, eta_m), _ = _eta_pm(params, delta_p, params.v0)
    return eta_p * params.length_L, eta_m * params.length_L


def _depth_at(params, kernel, spinwave, prepared, boundary, detuning):
    scenario = params.replace(delta_p=(float(detuning),) * params.cloud_count)
    depth = integrated_optical_depth(scenario, kernel, spinwave, boundary, prepared)
    return depth.total_plus, depth.total_minus


def sweep_optical_depth(params, kernel, spinwave, delta_p, boundary='truncate', threads=1):
    """
    Total optical depths int X+- dz over an array of probe detunings.

    The coupling matrices are built once. Points fan out over a thread pool
    when threads > 1; results keep the input order.

    Returns:
        (total_plus, total_minus) complex arrays
    """
    _require_two_clouds(params, "Optical depth")
    require_uniform(params, "The optical-depth sweep")
    prepared = source_grid(params, kernel, spinwave, boundary)
    delta_p = np.asarray(delta_p, dtype=float)
    logger.info(f"Sweeping optical depth over {delta_p.size} detunings ({kernel.profile} kernel, {threads} thread(s))")

    def evaluate(detuning):
        return _depth_at(params, kernel, spinwave, prepared, boundary, detuning)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(evaluate, delta_p))
    else:
        results = [evaluate(d) for d in delta_p]
    totals = np.array(results, dtype=complex).reshape(-1, 2)
    return totals[:, 0], totals[:, 1]


def interaction_contribution(params, delta_p, depth):
    """Imaginary optical depth minus its non-interacting (V = 0) counterpart"""
    return np.imag(depth) - np.imag(noninteracting_depth(params, delta_p))


def find_shifted_peaks(params, sign=1, delta_range=(-20.0, 20.0), n_scan=4001, xtol=1e-10):
    """
    Probe detunings where Re Delta_s(0) = sign * V0.

    Sign changes are bracketed on a uniform scan and refined with brentq.
    Not every root is an absorption maximum: a root close to delta_p = 0
    sits where the dressed resonance is too broad to form a peak.

    Returns:
        Sorted list of roots
    """
    require_uniform(params, "The shifted-resonance search")
    target = sign * params.v0
    oc2 = params.omega_c[0] ** 2

    def residual(dp):
        return dp + params.delta_c[0] - oc2 * dp / (dp * dp + params.gamma ** 2) - target

    grid = np.linspace(delta_range[0], delta_range[1], n_scan)
    values = residual(grid)
    roots = [float(grid[i]) for i in np.nonzero(values == 0.0)[0]]
    for i in np.nonzero(values[:-1] * values[1:] < 0)[0]:
        roots.append(brentq(residual, grid[i], grid[i + 1], xtol=xtol))
    return sorted(roots)


def absorption_peaks(delta_p, curve, min_prominence=0.05):
    """
    Local maxima of an absorption curve with their half-prominence widths.

    Args:
        delta_p: Uniformly spaced detunings
        curve: Absorption (imaginary optical depth) values
        min_prominence: Prominence threshold as a fraction of the curve's span

    Returns:
        List of AbsorptionPeak sorted by position
    """
    delta_p = np.asarray(delta_p, dtype=float)
    curve = np.asarray(curve, dtype=float)
    span = float(np.ptp(curve))
    if span == 0.0:
        return []
    indices, props = find_peaks(curve, prominence=min_prominence * span)
    if indices.size == 0:
        return []
    widths = peak_widths(curve, indices, rel_height=0.5)[0]
    step = delta_p[1] - delta_p[0]
    return [
        AbsorptionPeak(
            position=float(delta_p[i]),
            height=float(curve[i]),
            width=float(wd * step),
            prominence=float(pr)
        )
        for i, wd, pr in zip(indices, widths, props['prominences'])
    ]
