import numpy as np

from dipolar_eit.commands import DIMENSIONLESS, FREQUENCY, Command
from dipolar_eit.models.kernel import PROFILES, DdiKernel
from dipolar_eit.models.medium import make_grid, uniform_spinwave
from dipolar_eit.services.spectral import (
    BOUNDARIES, absorption_peaks, find_shifted_peaks, interaction_contribution, noninteracting_depth,
    sweep_eta, sweep_optical_depth
)

spectrum_cmd = Command(
    'spectrum',
    help='Absorption spectra of the normal modes against probe detuning',
    default_preset='fig2'
)
spectrum_cmd.argument('--points', type=int, default=None, help='Number of probe detunings')
spectrum_cmd.argument('--range', type=float, nargs=2, default=None, metavar=('LO', 'HI'),
                      help='Probe detuning range in units of gamma')
spectrum_cmd.argument('--profile', choices=PROFILES, default='actual',
                      help='Kernel used for the integrated optical depth')
spectrum_cmd.argument('--boundary', choices=BOUNDARIES, default='truncate',
                      help='Treatment of the z\' integral at the medium ends')

SPECTRUM_UNITS = {
    'delta_p': FREQUENCY,
    'im_eta_plus_L': DIMENSIONLESS,
    'im_eta_minus_L': DIMENSIONLESS,
    'im_X_plus_total': DIMENSIONLESS,
    'im_X_minus_total': DIMENSIONLESS,
    'im_eta_noninteracting_L': DIMENSIONLESS,
    'fig_eta_plus': DIMENSIONLESS,
    'fig_eta_minus': DIMENSIONLESS,
    'fig_X_plus': DIMENSIONLESS,
    'fig_X_minus': DIMENSIONLESS,
    'fig_noninteracting': DIMENSIONLESS,
}

PEAK_UNITS = {
    'mode': DIMENSIONLESS,
    'model': DIMENSIONLESS,
    'position': FREQUENCY,
    'height': DIMENSIONLESS,
    'width': FREQUENCY,
    'prominence': DIMENSIONLESS,
    'nearest_root': FREQUENCY,
}


def _peak_rows(mode, model, delta_p, curve, roots):
    rows = []
    for peak in absorption_peaks(delta_p, curve):
        nearest = min(roots, key=lambda r: abs(r - peak.position)) if roots else np.nan
        rows.append(dict(peak.to_dict(), mode=mode, model=model, nearest_root=nearest))
    return rows


@spectrum_cmd.handler
def run_spectrum(ctx):
    params = ctx.params
    args = ctx.args
    points = args.points or ctx.config['SWEEP_POINTS']
    lo, hi = args.range or ctx.config['SWEEP_RANGE']
    delta_p = np.linspace(lo, hi, points)

    kernel = DdiKernel.from_params(params, args.profile)
    grid = make_grid(params, ctx.n_z, n_t=1)
    spinwave = uniform_spinwave(params, grid)

    eta_plus, eta_minus = sweep_eta(params, delta_p)
    x_plus, x_minus = sweep_optical_depth(params, kernel, spinwave, delta_p, args.boundary, ctx.threads)
    bare = noninteracting_depth(params, delta_p)

    # Plot convention: scaled by gamma/(kappa L), the V0 = 0 curve halved
    scale = params.gamma / (params.kappa[0] * params.length_L)
    ctx.emit('spectrum.csv', {
        'delta_p': delta_p,
        'im_eta_plus_L': eta_plus.imag,
        'im_eta_minus_L': eta_minus.imag,
        'im_X_plus_total': x_plus.imag,
        'im_X_minus_total': x_minus.imag,
        'im_eta_noninteracting_L': bare.imag,
        'fig_eta_plus': scale * eta_plus.imag,
        'fig_eta_minus': scale * eta_minus.imag,
        'fig_X_plus': scale * x_plus.imag,
        'fig_X_minus': scale * x_minus.imag,
        'fig_noninteracting': 0.5 * scale * bare.imag,
    }, SPECTRUM_UNITS)

    rows = []
    roots = {}
    for mode, sign, eta, depth in (('+', 1, eta_plus, x_plus), ('-', -1, eta_minus, x_minus)):
        roots[mode] = find_shifted_peaks(params, sign, (lo, hi))
        rows += _peak_rows(mode, 'square', delta_p, interaction_contribution(params, delta_p, eta), roots[mode])
        rows += _peak_rows(mode, kernel.profile, delta_p, interaction_contribution(params, delta_p, depth),
                           roots[mode])
    if rows:
        ctx.emit('spectrum_peaks.csv', {key: [row[key] for row in rows] for key in PEAK_UNITS}, PEAK_UNITS)

    ctx.manifest.grid = {'n_z': grid.n_z, 'dz': grid.dz, 'points': points, 'range': [lo, hi]}
    ctx.manifest.notes.update({
        'kernel': kernel.to_dict(),
        'boundary': args.boundary,
        'shifted_resonance_roots': roots,
    })
