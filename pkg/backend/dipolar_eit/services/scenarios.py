"""
Scenario loading, unit normalization and serialization.
"""
import json
import logging
import os
from pathlib import Path

from marshmallow import ValidationError

from dipolar_eit.errors import ScenarioError
from dipolar_eit.models.scenario import MAGIC_ANGLE, ScenarioParams, UnitScale
from dipolar_eit.services.presets import preset_document
from dipolar_eit.utils.validators import ScenarioSchema

logger = logging.getLogger(__name__)

# Exponents (frequency, length) of each scaled field
UNIT_DIMENSIONS = {
    'omega_c': (1, 0),
    'delta_p': (1, 0),
    'delta_c': (1, 0),
    'v0': (1, 0),
    'kappa': (1, -1),
    'separation_ell': (0, 1),
    'c3': (1, 3),
    'k_c': (0, -1),
    'k_s': (0, -1),
    'rho': (0, -1),
    'c_light': (1, 1),
}


def _scale(value, dims, f_unit, l_unit):
    if value is None:
        return None
    factor = f_unit ** dims[0] * l_unit ** dims[1]
    if isinstance(value, list):
        return [v / factor for v in value]
    return value / factor


def _per_cloud(value, n):
    if value is None:
        return None
    if isinstance(value, list):
        return tuple(value)
    return (float(value),) * n


def read_document(source):
    """Read a scenario document from a mapping, a JSON string or a file path"""
    if isinstance(source, dict):
        return dict(source)
    if isinstance(source, (str, os.PathLike)):
        text = str(source)
        if isinstance(source, str) and text.lstrip().startswith('{'):
            raw = text
        else:
            path = Path(source)
            try:
                raw = path.read_text(encoding='utf-8')
            except OSError as e:
                raise ScenarioError(f"Cannot read scenario file {path}: {e.strerror}")
        try:
            document = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"Scenario is not valid JSON: {e.msg} (line {e.lineno})")
        if not isinstance(document, dict):
            raise ScenarioError("Scenario document must be a JSON object")
        return document
    raise ScenarioError(f"Unsupported scenario source: {type(source).__name__}")


def resolve_preset(document):
    """Merge a document onto the preset it names, explicit fields winning"""
    if 'preset' not in document:
        return document
    merged = preset_document(document['preset'])
    merged.update({k: v for k, v in document.items() if k != 'preset'})
    return merged


def load_scenario(source):
    """
    Load and validate a scenario, normalizing to gamma = 1 and L = 1.

    Args:
        source: Mapping, JSON text or path of a scenario document

    Returns:
        ScenarioParams in gamma/L units, with the physical units recorded
    """
    document = resolve_preset(read_document(source))
    try:
        data = ScenarioSchema().load(document)
    except ValidationError as e:
        logger.warning(f"Scenario validation failed: {e.messages}")
        raise ScenarioError("Invalid scenario", details=e.messages)

    f_unit = data['gamma']
    l_unit = data['length_L']
    n = data['cloud_count']
    scaled = {key: _scale(data.get(key), dims, f_unit, l_unit) for key, dims in UNIT_DIMENSIONS.items()}

    ell = scaled['separation_ell']
    c3 = scaled['c3']
    if c3 is None:
        c3 = (scaled['v0'] or 0.0) * ell ** 3

    pulse = data.get('pulse') or {}
    width = pulse.get('width')
    center = pulse.get('center')
    units = data.get('units') or {}

    params = ScenarioParams(
        name=data['name'],
        cloud_count=n,
        separation_ell=ell,
        c3=c3,
        omega_c=_per_cloud(scaled['omega_c'], n),
        delta_p=_per_cloud(scaled['delta_p'], n),
        delta_c=_per_cloud(scaled['delta_c'], n),
        kappa=_per_cloud(scaled['kappa'], n),
        phi_c=_per_cloud(data['phi_c'], n),
        beta=MAGIC_ANGLE if data.get('beta') is None else data['beta'],
        k_c=scaled['k_c'],
        k_s=scaled['k_s'],
        rho=scaled['rho'],
        c_light=scaled['c_light'],
        retarded_frame=data['retarded_frame'],
        spinwave_weights=_per_cloud(data.get('spinwave_weights'), n),
        pulse_shape=pulse.get('shape', 'gaussian'),
        pulse_width=None if width is None else width * f_unit,
        pulse_center=None if center is None else center * f_unit,
        units=UnitScale(
            frequency=f_unit,
            length=l_unit,
            frequency_label=units.get('frequency', 'gamma'),
            length_label=units.get('length', 'L')
        )
    )
    logger.info(f"Loaded scenario '{params.name}' with {n} cloud(s), V0={params.v0:.4g} gamma")
    return params


def serialize_scenario(params):
    """
    Scenario document in the physical units it was loaded from.

    load_scenario(serialize_scenario(p)) reproduces p.
    """
    f_unit = params.units.frequency
    l_unit = params.units.length
    document = {
        'name': params.name,
        'units': {'frequency': params.units.frequency_label, 'length': params.units.length_label},
        'gamma': params.gamma * f_unit,
        'length_L': params.length_L * l_unit,
        'cloud_count': params.cloud_count,
        'beta': params.beta,
        'phi_c': list(params.phi_c),
        'retarded_frame': params.retarded_frame,
        'pulse': {
            'shape': params.pulse_shape,
            'width': None if params.pulse_width is None else params.pulse_width / f_unit,
            'center': None if params.pulse_center is None else params.pulse_center / f_unit
        }
    }
    values = {
        'omega_c': list(params.omega_c),
        'delta_p': list(params.delta_p),
        'delta_c': list(params.delta_c),
        'kappa': list(params.kappa),
        'separation_ell': params.separation_ell,
        'c3': params.c3,
        'k_c': params.k_c,
        'k_s': params.k_s,
        'rho': params.rho,
        'c_light': params.c_light,
    }
    for key, value in values.items():
        if value is None:
            document[key] = None
            continue
        factor = f_unit ** UNIT_DIMENSIONS[key][0] * l_unit ** UNIT_DIMENSIONS[key][1]
        document[key] = [v * factor for v in value] if isinstance(value, list) else value * factor
    if params.spinwave_weights is not None:
        document['spinwave_weights'] = list(params.spinwave_weights)
    return document
