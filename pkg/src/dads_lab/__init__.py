"""Simulation and verification lab for deadzone-adapted disturbance suppression."""

from .certificates import (
    AssumptionGrid,
    CertificateBundle,
    DadsParams,
    PdeDadsParams,
    Theorem3Constants,
    c_epsilon,
    check_assumption_a,
    check_params,
    check_pde_params,
    chi,
    lemma1_bound,
    lemma1_s,
    theorem3_constants,
)
from .comparison import ScalarClassFunction
from .controller import ControllerState, dads_control, deadzone_rate, pde_dads_control
from .errors import (
    ConfigurationError,
    ContractError,
    DadsError,
    DomainError,
    GainOverflowError,
    SimulationAbort,
)
from .grid import GridFunction, dirichlet_energy, l2_norm
from .integrator import AugmentedState, Trajectory, rk4_step, simulate, step_rk4
from .plants import (
    AnalogPlant,
    OdePlant,
    PdePlant,
    explicit_unstable_solution,
    finite_dim_analog_rhs,
    ode_plant_rhs,
    pde_rhs,
    worked_example_bundle,
)
from .scenario import Scenario, StepControl
from .signals import SignalSpec, eval_signal, make_seeded_bounded, signal_sup_norm

__version__ = "0.1.0"
