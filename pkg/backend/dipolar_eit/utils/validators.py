"""
Input validation for scenario documents and command-line values.
Each failed check produces its own diagnostic.
"""
import math
from typing import Any, Tuple

from marshmallow import Schema, ValidationError, fields, validates, validates_schema

PER_CLOUD_KEYS = ('omega_c', 'delta_p', 'delta_c', 'kappa', 'phi_c', 'spinwave_weights')


def validate_positive(value: Any, name: str) -> Tuple[bool, str]:
    """
    Validate a strictly positive finite number.

    Args:
        value: Value to validate
        name: Field name used in the message

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        val = float(value)
    except (TypeError, ValueError):
        return False, f"{name} must be a number"
    if not math.isfinite(val) or val <= 0:
        return False, f"{name} must be positive"
    return True, ""


def validate_complex_pair(value: Any) -> Tuple[bool, str]:
    """
    Validate a complex amplitude given as a number or a [re, im] pair.

    Returns:
        Tuple of (is_valid, error_message)
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return True, ""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return True, ""
    return False, "Amplitude must be a number or a [re, im] pair"


class PerCloud(fields.Field):
    """A scalar applied to every cloud, or one number per cloud"""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, bool):
            raise ValidationError("Expected a number or a list of numbers")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, (list, tuple)) and value and not any(isinstance(v, bool) for v in value):
            try:
                return [float(v) for v in value]
            except (TypeError, ValueError):
                pass
        raise ValidationError("Expected a number or a list of numbers")


class UnitsSchema(Schema):
    """Labels of the physical units the document is written in"""
    frequency = fields.Str(load_default='gamma')
    length = fields.Str(load_default='L')


class PulseSchema(Schema):
    """Input pulse block"""
    shape = fields.Str(load_default='gaussian')
    width = fields.Float(load_default=None, allow_none=True)
    center = fields.Float(load_default=None, allow_none=True)

    @validates('shape')
    def validate_shape(self, value, **kwargs):
        if value not in ('gaussian', 'flat_top', 'constant'):
            raise ValidationError(f"Invalid pulse shape. Must be one of: {['gaussian', 'flat_top', 'constant']}")

    @validates('width')
    def validate_width(self, value, **kwargs):
        if value is not None:
            valid, error_msg = validate_positive(value, 'pulse width')
            if not valid:
                raise ValidationError(error_msg)


class ScenarioSchema(Schema):
    """Schema for scenario documents"""
    name = fields.Str(load_default='custom')
    units = fields.Nested(UnitsSchema, load_default=dict)
    gamma = fields.Float(load_default=1.0)
    length_L = fields.Float(load_default=1.0)
    cloud_count = fields.Integer(required=True, strict=True)
    separation_ell = fields.Float(load_default=0.0)
    c3 = fields.Float(load_default=None, allow_none=True)
    v0 = fields.Float(load_default=None, allow_none=True)
    beta = fields.Float(load_default=None, allow_none=True)
    omega_c = PerCloud(required=True)
    delta_p = PerCloud(required=True)
    kappa = PerCloud(required=True)
    delta_c = PerCloud(load_default=0.0)
    phi_c = PerCloud(load_default=0.0)
    k_c = fields.Float(load_default=0.0)
    k_s = fields.Float(load_default=0.0)
    rho = fields.Float(load_default=None, allow_none=True)
    c_light = fields.Float(load_default=None, allow_none=True)
    retarded_frame = fields.Boolean(load_default=True)
    spinwave_weights = PerCloud(load_default=None, allow_none=True)
    pulse = fields.Nested(PulseSchema, load_default=dict)

    @validates('gamma')
    def validate_gamma(self, value, **kwargs):
        valid, error_msg = validate_positive(value, 'gamma')
        if not valid:
            raise ValidationError(error_msg)

    @validates('length_L')
    def validate_length(self, value, **kwargs):
        valid, error_msg = validate_positive(value, 'length_L')
        if not valid:
            raise ValidationError(error_msg)

    @validates('cloud_count')
    def validate_cloud_count(self, value, **kwargs):
        if value < 1:
            raise ValidationError("cloud_count must be at least 1")

    @validates('separation_ell')
    def validate_separation(self, value, **kwargs):
        if value < 0:
            raise ValidationError("separation_ell must not be negative")

    @validates_schema
    def validate_cloud_arrays(self, data, **kwargs):
        n = data.get('cloud_count')
        if n is None:
            return
        errors = {}
        for key in PER_CLOUD_KEYS:
            value = data.get(key)
            if isinstance(value, list) and len(value) != n:
                errors[key] = [f"Expected {n} entries (one per cloud), got {len(value)}"]
        if n >= 2 and not data.get('separation_ell', 0.0) > 0:
            errors['separation_ell'] = ["separation_ell must be positive for two or more clouds"]
        if errors:
            raise ValidationError(errors)

    @validates_schema
    def validate_coupling(self, data, **kwargs):
        c3, v0 = data.get('c3'), data.get('v0')
        ell = data.get('separation_ell', 0.0)
        if c3 is None and v0 is None:
            if data.get('cloud_count', 1) >= 2:
                raise ValidationError("Either c3 or v0 is required", field_name='v0')
            return
        if c3 is not None and v0 is not None:
            expected = v0 * ell ** 3
            if abs(c3 - expected) > 1e-9 * max(abs(c3), abs(expected)):
                raise ValidationError(
                    f"c3={c3} and v0={v0} are inconsistent (c3 must equal v0*ell^3 = {expected})",
                    field_name='c3'
                )

    @validates_schema
    def validate_density(self, data, **kwargs):
        rho, length = data.get('rho'), data.get('length_L', 1.0)
        if rho is not None and length and abs(rho * length - 1.0) > 1e-9:
            raise ValidationError("rho must equal 1/L for a single shared excitation", field_name='rho')
