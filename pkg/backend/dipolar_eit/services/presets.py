"""
Parameter sets of the reference figures, in gamma/L units.
"""
import copy

from dipolar_eit.errors import ScenarioError

_TWO_CLOUDS = {
    'cloud_count': 2,
    'separation_ell': 0.5,
    'v0': 10.0,
    'omega_c': 10.0,
    'delta_p': -6.5,
    'delta_c': 0.0,
    'kappa': 9.0,
    'k_c': 0.0,
    'k_s': 0.0,
}

PRESETS = {
    # Kernel scan at the magic angle
    'fig1c': dict(_TWO_CLOUDS, name='fig1c'),
    # Spectra; delta_p is swept by the spectrum command
    'fig2': dict(_TWO_CLOUDS, name='fig2'),
    'fig3': dict(_TWO_CLOUDS, name='fig3', pulse={'shape': 'gaussian', 'width': 10.0, 'center': 60.0}),
    # Nine-cloud lattice, photon entering the central cloud
    'fig4': dict(_TWO_CLOUDS, name='fig4', cloud_count=9),
}

# Cloud the photon enters in the lattice figure (1-based)
FIG4_SOURCE_CLOUD = 5


def preset_names():
    return sorted(PRESETS)


def preset_document(name):
    """Copy of the scenario document registered under a preset name"""
    if name not in PRESETS:
        raise ScenarioError(f"Unknown preset: {name}. Must be one of: {preset_names()}")
    return copy.deepcopy(PRESETS[name])


def preset(name):
    """
    Scenario parameters of a reference figure.

    Args:
        name: One of fig1c, fig2, fig3, fig4

    Returns:
        ScenarioParams
    """
    from dipolar_eit.services.scenarios import load_scenario
    return load_scenario(preset_document(name))
