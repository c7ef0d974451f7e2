from dipolar_eit.models.scenario import (
    MAGIC_ANGLE, ComplexDetuning, ScenarioParams, UnitScale, complex_probe_detuning
)
from dipolar_eit.models.kernel import DdiKernel
from dipolar_eit.models.medium import (
    Grid, InputPulse, PairAmplitudeField, ProbeField, SpinwaveProfile
)
from dipolar_eit.models.spectra import AbsorptionPeak, NormalModeCoeffs, OpticalDepth, Susceptibility
from dipolar_eit.models.lattice import DiffusionParams, LatticeSystem
from dipolar_eit.models.manifest import RunManifest

__all__ = [
    'MAGIC_ANGLE',
    'ComplexDetuning',
    'ScenarioParams',
    'UnitScale',
    'complex_probe_detuning',
    'DdiKernel',
    'Grid',
    'InputPulse',
    'PairAmplitudeField',
    'ProbeField',
    'SpinwaveProfile',
    'AbsorptionPeak',
    'NormalModeCoeffs',
    'OpticalDepth',
    'Susceptibility',
    'DiffusionParams',
    'LatticeSystem',
    'RunManifest'
]
