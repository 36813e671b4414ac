import math

import pytest

from dads_lab.certificates import DadsParams
from dads_lab.controller import dads_control, deadzone_rate, pde_dads_control
from dads_lab.errors import GainOverflowError
from dads_lab.plants import worked_example_bundle

PARAMS = DadsParams(epsilon=0.1, Gamma=1.0, a=1.0, beta=0.25, b=1.0, C=1.0, r=1.0)


def test_equilibrium_gives_zero_control():
    assert dads_control(worked_example_bundle(), PARAMS, [0.0], 3.0) == 0.0


def test_unit_output_at_zero_gain():
    # k = -2, gain factor (1 + 1)^3 / 0.0625 = 128, damping -4*128 - 3*128
    assert dads_control(worked_example_bundle(), PARAMS, [1.0], 0.0) == pytest.approx(-898.0, rel=1e-14)


def test_unit_output_at_very_negative_gain():
    assert dads_control(worked_example_bundle(), PARAMS, [1.0], -30.0) == pytest.approx(-114.0, rel=1e-11)


def test_gain_guard():
    with pytest.raises(GainOverflowError, match="z_max"):
        dads_control(worked_example_bundle(), PARAMS, [1.0], 51.0)
    with pytest.raises(GainOverflowError):
        pde_dads_control(1, 1, 1, 1.0, 60.0)


def test_deadzone_rate():
    p2 = DadsParams(epsilon=0.1, Gamma=2.0, a=1.0, beta=0.25, b=1.0, C=1.0)
    assert deadzone_rate(p2, 0.1, 0.0) == 0.0
    assert deadzone_rate(p2, 1.1, math.log(2.0)) == pytest.approx(1.0, rel=1e-14)
    p1 = DadsParams(epsilon=1.0, Gamma=1.0, a=1.0, beta=0.25, b=1.0, C=1.0)
    assert deadzone_rate(p1, 1.0 - 0.5, -10.0) == 0.0


def test_pde_law():
    assert pde_dads_control(2.0, 0.5, 3.0, 0.0, 1.0) == 0.0
    assert pde_dads_control(1, 1, 1, 1.0, 0.0) == pytest.approx(-99.0, rel=1e-14)
    assert pde_dads_control(1, 1, 1, -1.0, 0.0) == pytest.approx(99.0, rel=1e-14)
