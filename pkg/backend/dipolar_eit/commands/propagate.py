import numpy as np
from scipy.integrate import trapezoid

from dipolar_eit.commands import DIMENSIONLESS, LENGTH, TIME, Command
from dipolar_eit.errors import ScenarioError
from dipolar_eit.models.kernel import PROFILES, DdiKernel
from dipolar_eit.models.medium import make_grid, scenario_pulse, uniform_spinwave
from dipolar_eit.services.bloch_maxwell import propagate
from dipolar_eit.services.spectral import BOUNDARIES, analytic_probabilities
from dipolar_eit.utils.validators import validate_complex_pair

propagate_cmd = Command(
    'propagate',
    help='Time-domain propagation of a probe pulse through the clouds',
    default_preset='fig3'
)
propagate_cmd.argument('--input', choices=('A', 'B', 'AB', 'custom'), default='A',
                       help='Input path superposition: cloud A, cloud B, both with equal weight, or --amplitudes')
propagate_cmd.argument('--amplitudes', default=None,
                       help='Custom input amplitudes per cloud as "re,im;re,im;..."')
propagate_cmd.argument('--phi', type=float, default=None,
                       help='Control phase difference phi_AB in radians (overrides the scenario)')
propagate_cmd.argument('--profile', choices=PROFILES, default='actual', help='Inter-cloud kernel')
propagate_cmd.argument('--boundary', choices=BOUNDARIES, default='truncate',
                       help='z\' boundary treatment of the analytic overlay')
propagate_cmd.argument('--history', action='store_true', help='Also write the recorded field history')

TABLE_UNITS = {
    'z': LENGTH,
    'P_plus': DIMENSIONLESS,
    'P_minus': DIMENSIONLESS,
    'P_plus_analytic': DIMENSIONLESS,
    'P_minus_analytic': DIMENSIONLESS,
}

HISTORY_UNITS = {
    't': TIME,
    'z': LENGTH,
    'cloud': DIMENSIONLESS,
    're_omega_p': DIMENSIONLESS,
    'im_omega_p': DIMENSIONLESS,
}


def parse_amplitudes(text, cloud_count):
    """Parse "re,im;re,im" into one complex amplitude per cloud"""
    if not text:
        raise ScenarioError("--input custom requires --amplitudes")
    amplitudes = []
    for chunk in text.split(';'):
        try:
            parts = [float(p) for p in chunk.split(',')]
        except ValueError:
            raise ScenarioError(f"Amplitude '{chunk}' is not a number or a re,im pair")
        value = parts[0] if len(parts) == 1 else parts
        valid, error_msg = validate_complex_pair(value)
        if not valid:
            raise ScenarioError(error_msg)
        amplitudes.append(complex(*parts))
    if len(amplitudes) != cloud_count:
        raise ScenarioError(f"Expected {cloud_count} amplitudes (one per cloud), got {len(amplitudes)}")
    return amplitudes


def input_amplitudes(choice, cloud_count, text=None):
    if choice == 'custom':
        return parse_amplitudes(text, cloud_count)
    if cloud_count < 2 and choice != 'A':
        raise ScenarioError(f"Input {choice} needs at least two clouds")
    amplitudes = [0j] * cloud_count
    if choice in ('A', 'AB'):
        amplitudes[0] = 1.0
    if choice in ('B', 'AB'):
        amplitudes[1] = 1.0
    if choice == 'AB':
        amplitudes[0] = amplitudes[1] = 1.0 / np.sqrt(2.0)
    return amplitudes


@propagate_cmd.handler
def run_propagate(ctx):
    args = ctx.args
    params = ctx.params
    n = params.cloud_count
    if args.phi is not None:
        params = params.replace(phi_c=(args.phi,) + (0.0,) * (n - 1))

    amplitudes = input_amplitudes(args.input, n, args.amplitudes)
    pulse = scenario_pulse(params, amplitudes)
    grid = make_grid(params, ctx.n_z, pulse=pulse, n_t=args.grid_nt)
    kernel = DdiKernel.from_params(params, args.profile)
    spinwave = uniform_spinwave(params, grid)

    result = propagate(params, grid, kernel, spinwave, pulse, stride=ctx.stride)

    if n == 2:
        table = {'z': result.z, 'P_plus': result.p_plus, 'P_minus': result.p_minus}
        if params.is_uniform:
            _, p_plus, p_minus = analytic_probabilities(params, kernel, spinwave, amplitudes,
                                                        boundary=args.boundary)
            table['P_plus_analytic'] = p_plus
            table['P_minus_analytic'] = p_minus
        else:
            ctx.app.logger.warning("Clouds differ; skipping the local-field prediction")
        ctx.manifest.notes['local_field_prediction'] = params.is_uniform
        ctx.emit('propagate.csv', table, TABLE_UNITS)
        ctx.manifest.notes['P_ratio_at_L'] = float(result.p_minus[-1] / result.p_plus[-1])
    else:
        energy = trapezoid(np.abs(result.history) ** 2, result.times, axis=-1)
        total = float(np.sum(result.input_energy))
        table = {'z': result.z}
        units = {'z': LENGTH, 'E_total': DIMENSIONLESS}
        for mu in range(n):
            table[f'E_{mu + 1}'] = energy[mu] / total
            units[f'E_{mu + 1}'] = DIMENSIONLESS
        table['E_total'] = energy.sum(axis=0) / total
        ctx.emit('propagate.csv', table, units)

    if args.history:
        history = result.history
        times = result.times
        clouds, nodes, steps = history.shape
        ctx.emit('propagate_history.csv', {
            't': np.tile(times, clouds * nodes),
            'z': np.tile(np.repeat(result.z, steps), clouds),
            'cloud': np.repeat(np.arange(1, clouds + 1), nodes * steps),
            're_omega_p': history.real.ravel(),
            'im_omega_p': history.imag.ravel(),
        }, HISTORY_UNITS)

    ctx.manifest.grid = grid.to_dict()
    ctx.manifest.notes.update({
        'pulse': pulse.to_dict(),
        'pulse_width_from_scenario': params.pulse_width is not None,
        'kernel': kernel.to_dict(),
        'phi_ab': params.phi_ab,
        'stride': ctx.stride,
        'result': result.to_dict(),
    })
