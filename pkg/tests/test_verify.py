import math
from dataclasses import replace

import numpy as np
import pytest

from dads_lab.errors import ConfigurationError
from dads_lab.harness import run_scenario
from dads_lab.scenario import ControllerConfig, InitialState, PlantConfig, Scenario, StepControl
from dads_lab.signals import constant_signal, sinusoid_sum
from helpers import scenario, shortened


def pde(**kw):
    base = dict(
        plant=PlantConfig(type="pde", n_interior=16),
        controller=ControllerConfig(law="pde", epsilon=0.05),
        integrator=StepControl(dt=None, t_end=6.0, sample_dt=0.01),
    )
    base.update(kw)
    return Scenario(**base)


def test_equilibrium_passes_everything():
    traj, report = run_scenario(pde())
    assert report.passed and not report.aborted
    assert not np.any(traj.y) and not np.any(traj.norm_w)
    ids = [c.check_id for c in report.checks]
    assert len(ids) == len(set(ids))
    assert {"energy-bound", "gain-bound", "phi-dissipation", "V-dissipation", "U-dissipation"} <= set(ids)
    for c in report.checks:
        assert math.isfinite(c.worst_margin) and c.worst_margin >= 0


def test_short_horizon_is_inconclusive():
    sc = pde(theta=constant_signal([2.0, 2.0]), initial=InitialState(y=(1.0,), w="sin"),
             integrator=StepControl(dt=None, t_end=0.1, sample_dt=0.001))
    _, report = run_scenario(sc)
    assert report.get("y-limsup").status == "inconclusive"
    assert report.get("w-limsup").status == "inconclusive"
    assert report.get("energy-bound").status == "pass"
    assert report.get("gain-bound").status == "pass"
    assert report.passed


def test_time_varying_theta_skips_w_tail():
    sc = pde(theta=sinusoid_sum([[1.0, 1.0]], [0.5]), initial=InitialState(y=(0.5,), w="sin"))
    _, report = run_scenario(sc)
    assert report.get("w-limsup").status == "skipped"
    assert report.get("y-limsup").status in ("pass", "fail")


@pytest.mark.parametrize(
    "controller, hypothesis",
    [(ControllerConfig(law="pde", b=0.5), "b ≥ 1 ≥ a > 0"), (ControllerConfig(law="pde", c=0.5), "c ≥ 1"),
     (ControllerConfig(law="pde", gamma_rate=0.0), "Γ > 0")],
)
def test_pde_gate(controller, hypothesis):
    with pytest.raises(ConfigurationError, match=hypothesis):
        run_scenario(pde(controller=controller))


def test_general_gate():
    sc = Scenario(controller=ControllerConfig(gamma_rate=0.0))
    with pytest.raises(ConfigurationError, match="Γ > 0"):
        run_scenario(sc)
    with pytest.raises(ConfigurationError, match="2aβ < br"):
        run_scenario(Scenario(controller=ControllerConfig(beta=1.0)))


def test_law_plant_compatibility():
    with pytest.raises(ConfigurationError, match="requires"):
        run_scenario(Scenario(controller=ControllerConfig(law="pde")))
    with pytest.raises(ConfigurationError, match="requires"):
        run_scenario(pde(controller=ControllerConfig(law="general")))


def test_worked_example_short_run_is_inconclusive_not_failing():
    _, report = run_scenario(shortened(scenario("worked-example"), 5.0))
    assert report.get("V-limsup").status == "inconclusive"
    assert report.get("z-monotone").status == "pass"
    assert report.get("final-alternative").status == "skipped"
    assert report.passed


def test_final_alternative_runs_for_vanishing_gain_bundle():
    _, report = run_scenario(scenario("polynomial-cubic"))
    assert report.get("final-alternative").status == "pass"
    assert report.passed


def test_abort_produces_marked_report():
    sc = Scenario(
        plant=PlantConfig(type="pde", n_interior=16),
        controller=ControllerConfig(law="open-loop"),
        theta=constant_signal([3.0, 6.0]),
        integrator=StepControl(dt=None, t_end=20.0, blowup_guard=1e3),
        initial=InitialState(y="explicit", w="explicit"),
    )
    traj, report = run_scenario(sc)
    assert report.aborted and not report.passed
    assert "finite escape" in report.abort_reason
    assert traj.aborted and len(traj) > 0


def test_gain_guard_abort():
    sc = replace(scenario("worked-example"), integrator=StepControl(dt=1e-3, t_end=2.0, z_max=1e-4))
    _, report = run_scenario(sc)
    assert report.aborted
