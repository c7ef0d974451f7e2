import numpy as np

from dipolar_eit.commands import DIMENSIONLESS, INVERSE_LENGTH, LENGTH, Command
from dipolar_eit.errors import ScenarioError
from dipolar_eit.models.kernel import DdiKernel
from dipolar_eit.services.multicloud import eigenmode_table, lattice_propagate, lattice_system, mode_decomposition
from dipolar_eit.services.presets import FIG4_SOURCE_CLOUD

multicloud_cmd = Command(
    'multicloud',
    help='Propagation across a lattice of nearest-neighbour coupled clouds',
    default_preset='fig4'
)
multicloud_cmd.argument('--source-cloud', type=int, default=None,
                        help=f'Cloud the photon enters, 1-based (default {FIG4_SOURCE_CLOUD} or the centre)')
multicloud_cmd.argument('--z-max', type=float, default=None, help='Propagation distance in units of L')
multicloud_cmd.argument('--z-points', type=int, default=None, help='Number of z samples')
multicloud_cmd.argument('--coordination', type=int, default=None,
                        help='Neighbours per cloud in the diagonal term (default 2, 1 for two clouds)')

INTENSITY_UNITS = {
    'z': LENGTH,
    'cloud_index': DIMENSIONLESS,
    'intensity': DIMENSIONLESS,
    'total_intensity': DIMENSIONLESS,
}

MODE_UNITS = {
    'k': DIMENSIONLESS,
    're_eps': INVERSE_LENGTH,
    'im_eps': INVERSE_LENGTH,
    'input_weight': DIMENSIONLESS,
}


@multicloud_cmd.handler
def run_multicloud(ctx):
    args = ctx.args
    params = ctx.params
    n = params.cloud_count
    source = args.source_cloud or (FIG4_SOURCE_CLOUD if n >= FIG4_SOURCE_CLOUD else (n + 1) // 2)
    if not 1 <= source <= n:
        raise ScenarioError(f"--source-cloud must be between 1 and {n}")

    kernel = DdiKernel.from_params(params, 'square')
    system = lattice_system(params, kernel, args.coordination)
    w0 = np.zeros(n, dtype=complex)
    w0[source - 1] = 1.0

    z_max = args.z_max or params.length_L
    z = np.linspace(0.0, z_max, args.z_points or ctx.config['LATTICE_Z_POINTS'])
    intensity = np.abs(lattice_propagate(w0, z, system)) ** 2
    total = intensity.sum(axis=1)
    ctx.emit('lattice_intensity.csv', {
        'z': np.repeat(z, n),
        'cloud_index': np.tile(np.arange(1, n + 1), z.size),
        'intensity': intensity.ravel(),
        'total_intensity': np.repeat(total, n),
    }, INTENSITY_UNITS)

    table = eigenmode_table(system)
    modes = table[['k', 're_eps', 'im_eps']].copy()
    modes['input_weight'] = np.abs(mode_decomposition(system, w0)) ** 2
    ctx.emit('lattice_modes.csv', modes, MODE_UNITS)
    vector_columns = ['k'] + [f'u_{mu + 1}' for mu in range(n)]
    ctx.emit('lattice_eigenvectors.csv', table[vector_columns],
             {column: DIMENSIONLESS for column in vector_columns})

    eps = system.eigenvalues
    ctx.manifest.grid = {'z_max': z_max, 'z_points': int(z.size), 'n_clouds': n}
    ctx.manifest.notes.update({
        'lattice': system.to_dict(),
        'source_cloud': source,
        'min_im_eps': float(eps.imag.min()),
        'all_modes_absorbing': bool(np.all(eps.imag > 0)),
        'total_intensity_non_increasing': bool(np.all(np.diff(total) <= 1e-12 * total[0])),
    })
