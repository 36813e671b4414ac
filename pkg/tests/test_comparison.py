import numpy as np
import pytest

from dads_lab.comparison import ScalarClassFunction, affine_power, constant, power, saturating, sum_of_powers
from dads_lab.errors import ConfigurationError, ContractError, DomainError


def test_family_values():
    s = np.array([0.0, 1.0, 4.0])
    assert np.allclose(power(2.0, 0.5)(s), [0.0, 2.0, 4.0])
    assert np.allclose(affine_power(1.0, 1.0, 2.0)(s), [1.0, 2.0, 17.0])
    assert np.allclose(saturating(3.0)(s), [0.0, 1.5, 2.4])
    assert np.allclose(constant(1.0)(s), [1.0, 1.0, 1.0])
    assert np.allclose(sum_of_powers([(1.0, 1.0), (0.5, 2.0)])(s), [0.0, 1.5, 12.0])


def test_class_flags():
    assert power(1.0, 2.0).is_Kinfinity
    assert saturating(1.0).is_K and not saturating(1.0).is_Kinfinity
    assert not constant(1.0).is_K
    assert not affine_power(1.0, 1.0, 1.0).is_K
    for fn in (power(0.3, 1.7), saturating(2.0), sum_of_powers([(1, 1), (1, 3)]), constant(0.0)):
        assert fn.validation_failures() == []


def test_inverse_round_trip():
    fn = sum_of_powers([(0.5, 1.0), (2.0, 3.0)])
    for v in np.geomspace(1e-6, 1e6, 25):
        assert fn(fn.inverse(v)) == pytest.approx(v, rel=1e-10)
    assert saturating(1.0).inverse(0.5) == pytest.approx(1.0, rel=1e-12)


def test_inverse_outside_range():
    with pytest.raises(DomainError):
        saturating(1.0).inverse(1.0)
    with pytest.raises(ContractError):
        constant(1.0).inverse(0.5)


def test_bad_parameters():
    with pytest.raises(ConfigurationError):
        ScalarClassFunction("power", (1.0,))
    with pytest.raises(ConfigurationError):
        power(-1.0, 2.0)
    with pytest.raises(ConfigurationError):
        ScalarClassFunction("spline", (1.0,))
    with pytest.raises(DomainError):
        power(1.0, 1.0)(-1.0)
