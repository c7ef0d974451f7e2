import numpy as np

from dipolar_eit.commands import DIMENSIONLESS, FREQUENCY, LENGTH, Command
from dipolar_eit.models.kernel import (
    DdiKernel, ddi_strength, integrated_strength, kernel_fwhm, kernel_matrix, square_well_strength
)

ddi_scan_cmd = Command(
    'ddi-scan',
    help='Exchange coupling between clouds and within a cloud against axial separation',
    default_preset='fig1c'
)
ddi_scan_cmd.argument('--points', type=int, default=None, help='Number of separations in the scan')
ddi_scan_cmd.argument('--span', type=float, default=None, help='Half range of the scan in units of ell')

UNITS = {
    'dz': LENGTH,
    'dz_over_ell': DIMENSIONLESS,
    'v_inter': FREQUENCY,
    'v_square': FREQUENCY,
    'v_intra': FREQUENCY,
}


@ddi_scan_cmd.handler
def run_ddi_scan(ctx):
    params = ctx.params
    kernel = DdiKernel.from_params(params)
    points = ctx.args.points or ctx.config['DDI_SCAN_POINTS']
    span = ctx.args.span or ctx.config['DDI_SCAN_SPAN']

    ratio = np.linspace(-span, span, points)
    dz = ratio * kernel.ell
    v_intra = kernel_matrix(kernel, dz, np.zeros(1), same_cloud=True)[:, 0]
    ctx.emit('ddi_scan.csv', {
        'dz': dz,
        'dz_over_ell': ratio,
        'v_inter': ddi_strength(kernel, dz, 0.0),
        'v_square': square_well_strength(kernel, dz, 0.0),
        'v_intra': v_intra,
    }, UNITS)

    ctx.manifest.notes.update({
        'kernel': kernel.to_dict(),
        'magic_angle': kernel.is_magic,
        'fwhm': kernel_fwhm(kernel),
        'fwhm_closed_form': 2.0 * kernel.z_d,
        'integrated_actual': integrated_strength(kernel),
        'integrated_square': integrated_strength(kernel.with_profile('square')),
        'max_abs_intra': float(np.max(np.abs(v_intra))),
    })
