"""
Unit tests for input validators
Tests positive numbers and complex amplitude pairs
"""
import math

import pytest

from dipolar_eit.utils.validators import ScenarioSchema, validate_complex_pair, validate_positive


@pytest.mark.unit
class TestValidatePositive:
    """Test validate_positive"""

    @pytest.mark.parametrize('value', [1, 0.5, '2.5', 1e-12])
    def test_accepts_positive(self, value):
        """Test positive numbers and numeric strings pass"""
        assert validate_positive(value, 'width') == (True, "")

    @pytest.mark.parametrize('value', [0, -1.0, math.inf, math.nan])
    def test_rejects_non_positive(self, value):
        """Test zero, negatives and non-finite values fail"""
        valid, error_msg = validate_positive(value, 'width')

        assert not valid
        assert error_msg == "width must be positive"

    def test_rejects_non_numeric(self):
        """Test values that are not numbers fail with their own message"""
        valid, error_msg = validate_positive('wide', 'width')

        assert not valid
        assert error_msg == "width must be a number"


@pytest.mark.unit
class TestValidateComplexPair:
    """Test validate_complex_pair"""

    @pytest.mark.parametrize('value', [1.0, 0, [0.5, -0.5], (1, 0)])
    def test_accepts(self, value):
        """Test numbers and [re, im] pairs pass"""
        assert validate_complex_pair(value)[0]

    @pytest.mark.parametrize('value', [True, [1.0], [1.0, 2.0, 3.0], ['a', 'b'], None])
    def test_rejects(self, value):
        """Test booleans, wrong lengths and non-numbers fail"""
        valid, error_msg = validate_complex_pair(value)

        assert not valid
        assert 'Amplitude' in error_msg


@pytest.mark.unit
class TestScenarioSchema:
    """Test scenario schema field rules"""

    def test_per_cloud_scalar_and_list(self):
        """Test per-cloud fields accept scalars and lists"""
        data = ScenarioSchema().load({
            'cloud_count': 2, 'separation_ell': 0.5, 'v0': 10.0,
            'omega_c': 10, 'delta_p': [-6.5, -6.0], 'kappa': 9.0
        })

        assert data['omega_c'] == 10.0
        assert data['delta_p'] == [-6.5, -6.0]
        assert data['delta_c'] == 0.0

    def test_boolean_rejected_as_number(self):
        """Test a boolean is not a per-cloud number"""
        errors = ScenarioSchema().validate({
            'cloud_count': 1, 'omega_c': True, 'delta_p': 0.0, 'kappa': 9.0
        })

        assert 'omega_c' in errors

    def test_boolean_in_list_rejected(self):
        """Verify a boolean inside a per-cloud list is rejected, not dropped"""
        errors = ScenarioSchema().validate({
            'cloud_count': 2, 'separation_ell': 0.5, 'v0': 10.0,
            'omega_c': 10.0, 'delta_p': [True, -6.5], 'kappa': 9.0
        })

        assert errors['delta_p'] == ["Expected a number or a list of numbers"]
