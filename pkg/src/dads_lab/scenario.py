"""Typed scenario description and its validation gate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .certificates import (
    CertificateBundle,
    DadsParams,
    PdeDadsParams,
    check_params,
    check_pde_params,
)
from .errors import ConfigurationError
from .grid import GridFunction, grid_points
from .plants import AnalogPlant, PdePlant, cfl_limit, worked_example_bundle
from .signals import SignalSpec, eval_signal, zero_signal

PLANT_TYPES = ("worked-example", "polynomial", "finite-dim-analog", "pde")
LAWS = ("general", "pde", "open-loop")


@dataclass(frozen=True)
class PlantConfig:
    type: str = "worked-example"
    p: float = 1.0
    n_interior: int = 64
    K_choice: str = "paper-unstable"
    L_choice: str = "paper-integral"
    K_scale: float = 1.0
    bundle: CertificateBundle | None = None

    def __post_init__(self):
        if self.type not in PLANT_TYPES:
            raise ConfigurationError(f"plant.type must be one of {PLANT_TYPES}, got {self.type!r}")
        if self.type == "polynomial" and self.bundle is None:
            raise ConfigurationError("polynomial plants need a bundle definition")

    @property
    def is_distributed(self) -> bool:
        return self.type in ("pde", "finite-dim-analog")


@dataclass(frozen=True)
class ControllerConfig:
    law: str = "general"
    epsilon: float = 0.1
    gamma_rate: float = 1.0
    a: float = 1.0
    beta: float = 0.25
    b: float = 1.0
    C: float = 1.0
    c: float = 1.0
    z0: float = 0.0

    def __post_init__(self):
        if self.law not in LAWS:
            raise ConfigurationError(f"controller.law must be one of {LAWS}, got {self.law!r}")


@dataclass(frozen=True)
class StepControl:
    """``dt = None`` selects the largest stable step tiling ``[0, t_end]``."""

    dt: float | None = 1e-3
    t_end: float = 10.0
    sample_every: int | None = None
    sample_dt: float | None = None
    cfl_safety: float = 0.5
    blowup_guard: float = 1e12
    z_max: float = 50.0

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ConfigurationError("integrator.dt must be positive")
        if not self.t_end > 0:
            raise ConfigurationError("integrator.t_end must be positive")
        if not 0 < self.cfl_safety <= 1:
            raise ConfigurationError("integrator.cfl_safety must lie in (0, 1]")
        if self.sample_every is not None and self.sample_every < 1:
            raise ConfigurationError("integrator.sample_every must be a positive integer")


@dataclass(frozen=True)
class InitialState:
    y: tuple[float, ...] | str = (0.0,)
    w: tuple[float, ...] | str = (0.0,)


@dataclass(frozen=True)
class VerifyConfig:
    theorem1: bool = True
    theorem3: bool = True
    monitors: bool = True
    final_alternative: bool = True
    rel_tol: float = 0.05
    abs_tol: float = 1e-8
    disc_tol: float = 0.05
    tail_abs_tol: float = 0.05
    ln_slack: float = 0.1
    settle_tol: float = 1e-3
    tail_fraction: float = 0.2
    c_mon: float = 10.0
    convergence_tol: float = 1e-2


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    plant: PlantConfig = field(default_factory=PlantConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    d: SignalSpec | None = None
    theta: SignalSpec | None = None
    delta: SignalSpec | None = None
    integrator: StepControl = field(default_factory=StepControl)
    initial: InitialState = field(default_factory=InitialState)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    seed: int = 0

    # -- derived objects ----------------------------------------------------

    @property
    def law(self) -> str:
        return self.controller.law

    @property
    def bundle(self) -> CertificateBundle:
        if self.plant.type == "worked-example":
            return worked_example_bundle()
        if self.plant.type == "polynomial":
            return self.plant.bundle
        raise ConfigurationError(f"plant type {self.plant.type!r} carries no certificate bundle")

    @property
    def dims(self) -> dict:
        """Expected dimensions of y, w, d, theta, delta."""
        if self.plant.type == "pde":
            return {"n": 1, "l": self.plant.n_interior, "m": 1, "p": 2, "q": 1}
        if self.plant.type == "finite-dim-analog":
            return {"n": 1, "l": 1, "m": 1, "p": 2, "q": 1}
        b = self.bundle
        return {"n": b.n, "l": b.l, "m": b.m, "p": b.p_dim, "q": b.q}

    @property
    def signals(self) -> dict[str, SignalSpec]:
        dims = self.dims
        return {
            "d": self.d if self.d is not None else zero_signal(dims["m"]),
            "theta": self.theta if self.theta is not None else zero_signal(dims["p"]),
            "delta": self.delta if self.delta is not None else zero_signal(dims["q"]),
        }

    @property
    def dads_params(self) -> DadsParams:
        c = self.controller
        return DadsParams(c.epsilon, c.gamma_rate, c.a, c.beta, c.b, c.C, self.bundle.r)

    @property
    def pde_params(self) -> PdeDadsParams:
        c = self.controller
        return PdeDadsParams(c.epsilon, c.gamma_rate, c.a, c.b, c.c)

    @property
    def pde_plant(self) -> PdePlant | AnalogPlant:
        pc = self.plant
        if pc.type == "pde":
            return PdePlant(pc.p, pc.K_choice, pc.L_choice, pc.n_interior, pc.K_scale)
        if pc.type == "finite-dim-analog":
            return AnalogPlant(pc.p)
        raise ConfigurationError("not a distributed plant")

    def initial_state(self) -> tuple[np.ndarray, np.ndarray, float]:
        """Resolved ``(y0, w0, z0)`` arrays."""
        dims = self.dims
        theta0 = eval_signal(self.signals["theta"], 0.0)
        iy, iw = self.initial.y, self.initial.w
        if iy == "explicit":
            y0 = np.array([theta0[1] / 6.0])
        elif isinstance(iy, str):
            raise ConfigurationError(f"unknown initial.y {iy!r}")
        else:
            y0 = np.array(iy, float).reshape(-1)
        if isinstance(iw, str):
            if self.plant.type != "pde":
                if iw == "zero":
                    w0 = np.zeros(dims["l"])
                else:
                    raise ConfigurationError(f"initial.w = {iw} needs a pde plant")
            else:
                x = grid_points(dims["l"])
                profiles = {"zero": np.zeros_like(x), "sin": np.sin(np.pi * x), "explicit": x * (x - 1.0)}
                if iw not in profiles:
                    raise ConfigurationError(f"initial.w must be one of {sorted(profiles)} or numbers")
                w0 = profiles[iw]
        else:
            w0 = np.array(iw, float).reshape(-1)
            if w0.size == 1 and dims["l"] > 1:
                w0 = np.full(dims["l"], w0[0])
        if y0.size == 1 and dims["n"] > 1:
            y0 = np.full(dims["n"], y0[0])
        if y0.size != dims["n"] or w0.size != dims["l"]:
            raise ConfigurationError(f"initial state sizes y={y0.size}, w={w0.size} do not match {dims}")
        return y0, w0, float(self.controller.z0)

    def initial_grid_function(self) -> GridFunction:
        return GridFunction(self.initial_state()[1])


@dataclass(frozen=True)
class Stepping:
    dt: float
    n_steps: int
    sample_every: int


def resolve_stepping(scenario: Scenario) -> Stepping:
    """Effective step, step count and sampling stride.

    For the diffusion plant a requested ``dt`` above the explicit stability
    limit is refused, with the admissible value in the message.
    """
    ic = scenario.integrator
    limit = None
    if scenario.plant.type == "pde":
        limit = cfl_limit(scenario.plant.p, scenario.plant.n_interior, ic.cfl_safety)
    if ic.dt is None:
        if limit is None:
            raise ConfigurationError("integrator.dt = cfl only applies to the pde plant")
        n_steps = math.ceil(ic.t_end / limit - 1e-9)
        dt = ic.t_end / n_steps
    else:
        dt = ic.dt
        if limit is not None and dt > limit * (1 + 1e-12):
            raise ConfigurationError(
                f"requested dt={dt:.6g} exceeds the diffusion stability limit "
                f"cfl_safety*dx^2/(2p) = {limit:.6g}; use integrator.dt <= {limit:.6g}"
            )
        n_steps = max(1, math.ceil(ic.t_end / dt - 1e-9))
    if ic.sample_every is not None:
        every = int(ic.sample_every)
    elif ic.sample_dt is not None:
        every = max(1, int(math.floor(ic.sample_dt / dt + 1e-9)))
    else:
        every = max(1, math.ceil(n_steps / 10_000))
    return Stepping(dt, n_steps, every)


def validate_scenario(scenario: Scenario) -> None:
    """Refuse scenarios that violate a hypothesis of the matching estimate."""
    law, ptype = scenario.law, scenario.plant.type
    if law in ("pde", "open-loop") and not scenario.plant.is_distributed:
        raise ConfigurationError(f"law {law!r} requires a pde or finite-dim-analog plant, got {ptype!r}")
    if law == "general" and scenario.plant.is_distributed:
        raise ConfigurationError(f"general law requires an ODE plant with a certificate bundle, got {ptype!r}")
    if law == "general":
        res = check_params(scenario.dads_params)
        if not res.ok:
            raise ConfigurationError("controller parameters violate: " + ", ".join(res.violations))
    elif law == "pde":
        res = check_pde_params(scenario.pde_params)
        if not res.ok:
            raise ConfigurationError("controller parameters violate: " + ", ".join(res.violations))
    dims = scenario.dims
    for key, dim_key in (("d", "m"), ("theta", "p"), ("delta", "q")):
        spec = scenario.signals[key]
        if spec.dim != dims[dim_key]:
            raise ConfigurationError(f"signal {key} has dim {spec.dim}, plant expects {dims[dim_key]}")
    scenario.initial_state()
    resolve_stepping(scenario)
