"""Fixed-step RK4 time stepping of the augmented closed loop.

Each requested step ``dt`` is split into ``m`` equal RK4 substeps, with
``m = ceil(dt * rho / (cfl_safety * 2.785...))`` where ``rho`` bounds the
Jacobian of the right-hand side at the start of the step. The substep count
depends only on the state, so runs stay bitwise reproducible.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from numba.core.registry import CPUDispatcher

from . import _kernels
from .certificates import theorem3_constants
from .controller import dads_control, gain_rate, general_law, pde_law
from .errors import SimulationAbort
from .grid import GridFunction, dirichlet_energy, l2_norm  # noqa: F401  (re-exported)
from .scenario import Scenario, StepControl, resolve_stepping, validate_scenario
from .signals import kernel_arrays, signal_sup_norm

__all__ = [
    "AugmentedState",
    "StepControl",
    "Trajectory",
    "dirichlet_energy",
    "l2_norm",
    "rk4_step",
    "simulate",
    "step_rk4",
]


@dataclass(frozen=True)
class AugmentedState:
    t: float
    y: np.ndarray
    w: np.ndarray
    z: float

    def as_vector(self) -> np.ndarray:
        return np.concatenate([np.atleast_1d(self.y), np.asarray(self.w, float).reshape(-1), [self.z]])


def rk4_step(f, t: float, x: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of ``x' = f(t, x)``; refuses non-finite stages."""
    x = np.asarray(x, dtype=float)

    def stage(label, tt, arg):
        k = np.asarray(f(tt, arg), dtype=float)
        if not np.all(np.isfinite(k)):
            raise SimulationAbort(f"non-finite derivative in stage {label} at t={tt!r}", reason="non-finite")
        return k

    h2 = 0.5 * dt
    k1 = stage("k1", t, x)
    k2 = stage("k2", t + h2, x + h2 * k1)
    k3 = stage("k3", t + h2, x + h2 * k2)
    k4 = stage("k4", t + dt, x + dt * k3)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(rhs, state: AugmentedState, dt: float) -> AugmentedState:
    """Advance an :class:`AugmentedState` by one RK4 step.

    ``rhs(t, y, w, z)`` returns ``(ydot, wdot, zdot)``.
    """
    y = np.atleast_1d(np.asarray(state.y, float))
    w = np.asarray(state.w, float).reshape(-1)
    n, l = y.size, w.size

    def f(t, x):
        dy, dw, dz = rhs(t, x[:n], x[n : n + l], x[n + l])
        return np.concatenate([np.atleast_1d(dy), np.asarray(dw, float).reshape(-1), [dz]])

    x = rk4_step(f, state.t, state.as_vector(), dt)
    w_new = x[n : n + l]
    if isinstance(state.w, GridFunction):
        w_new = GridFunction(w_new)
    return AugmentedState(state.t + dt, x[:n], w_new, float(x[n + l]))


# -- trajectories ------------------------------------------------------------


@dataclass
class Trajectory:
    """Sampled closed-loop trajectory; ``y`` has shape ``(samples, n)``."""

    law: str
    t: np.ndarray
    y: np.ndarray
    norm_w: np.ndarray
    z: np.ndarray
    u: np.ndarray
    V: np.ndarray
    Phi: np.ndarray
    U: np.ndarray
    deadzone_active: np.ndarray
    bound_313: np.ndarray | None = None
    w_final: np.ndarray | None = None
    dt: float = 0.0
    sample_every: int = 1
    dx: float | None = None
    status: str = "ok"
    meta: dict = field(default_factory=dict)

    @property
    def aborted(self) -> bool:
        return self.status != "ok"

    def __len__(self) -> int:
        return self.t.size

    def columns(self) -> dict[str, np.ndarray]:
        """Column name to values in export order."""
        cols = {"t": self.t}
        if self.y.ndim == 2 and self.y.shape[1] == 1:
            cols["y"] = self.y[:, 0]
        else:
            for i in range(self.y.shape[1] if self.y.ndim == 2 else 0):
                cols[f"y{i + 1}"] = self.y[:, i]
        cols.update(norm_w=self.norm_w, z=self.z, u=self.u, V=self.V, Phi=self.Phi, U=self.U)
        cols["deadzone_active"] = self.deadzone_active.astype(int)
        if self.bound_313 is not None:
            cols["bound_313"] = self.bound_313
        return cols


def _assemble(law, states, t, n_y, y_cols, w_cols, z_col, u, V, Phi, U, dx, epsilon, dt, every, status="ok", meta=None):
    w = states[:, w_cols]
    if dx is None:
        norm_w = np.sqrt(np.sum(w * w, axis=1))
    else:
        norm_w = np.sqrt(np.sum(w * w, axis=1) * dx)
    return Trajectory(
        law=law,
        t=t,
        y=states[:, y_cols].reshape(len(t), n_y),
        norm_w=norm_w,
        z=states[:, z_col].copy(),
        u=u,
        V=V,
        Phi=Phi,
        U=U,
        deadzone_active=V <= epsilon,
        w_final=w[-1].copy() if len(t) else None,
        dt=dt,
        sample_every=every,
        dx=dx,
        status=status,
        meta=dict(meta or {}),
    )


def _drive(run, x, n_steps, every, dt):
    """Step in chunks of ``every``; returns sampled states, sample step indices and status."""
    states, ks = [x.copy()], [0]
    k = 0
    status = _kernels.OK
    while k < n_steps:
        status, done = run(k, min(every, n_steps - k))
        k += done
        if status != _kernels.OK:
            if np.all(np.isfinite(x)):
                states.append(x.copy())
                ks.append(k)
            break
        states.append(x.copy())
        ks.append(k)
    return np.array(states), np.array(ks, dtype=float) * dt, status, k


def simulate(scenario: Scenario) -> Trajectory:
    """Integrate the closed loop described by ``scenario``.

    Guard violations (non-finite state, blow-up, gain overflow) raise
    :class:`SimulationAbort` carrying the partial trajectory.
    """
    validate_scenario(scenario)
    if scenario.law == "general":
        return _simulate_general(scenario)
    return _simulate_distributed(scenario)


def _abort(traj: Trajectory, status: int, k: int, dt: float):
    reason = _kernels.STATUS[status]
    traj.status = reason
    msg = f"simulation aborted at t={k * dt:.6g}: {reason}"
    if status == _kernels.GAIN_OVERFLOW:
        msg += " (the dynamic gain should stay bounded; check the controller constraints)"
    raise SimulationAbort(msg, trajectory=traj, reason=reason)


# -- reaction-diffusion law (pde plant or its scalar analog) ----------------


def _simulate_distributed(scenario: Scenario) -> Trajectory:
    plant = scenario.pde_plant
    ctl, ic = scenario.controller, scenario.integrator
    closed = scenario.law == "pde"
    step = resolve_stepping(scenario)
    sig = scenario.signals
    y0, w0, z0 = scenario.initial_state()
    if scenario.plant.type == "pde":
        mode, p, dx, kcode, kscale, lcode, psi = plant.kernel_args()
        rec_dx = dx
    else:
        mode, p, dx, kcode, kscale, lcode, psi = _kernels.MODE_ANALOG, float(plant.p), 1.0, 0, 1.0, 0, np.zeros(1)
        rec_dx = None
    x = np.concatenate([w0, y0, [z0]])
    nw = w0.size
    sig_d, sig_th = kernel_arrays(sig["d"]), kernel_arrays(sig["theta"])
    c, a, b = float(ctl.c), float(ctl.a), float(ctl.b)

    def run(k, chunk):
        return _kernels.pde_advance(
            x, k, chunk, step.dt, mode, closed, p, dx, kcode, kscale, lcode, psi,
            c, a, b, float(ctl.epsilon), float(ctl.gamma_rate),
            sig_d, sig_th, float(ic.cfl_safety), float(ic.blowup_guard), float(ic.z_max),
        )

    states, t, status, k = _drive(run, x, step.n_steps, step.sample_every, step.dt)
    y, z = states[:, nw], states[:, nw + 1]
    if closed:
        u = np.array([pde_law(c, a, b, yi, zi) for yi, zi in zip(y, z)])
    else:
        u = np.zeros_like(y)
    V = 0.5 * y * y
    Phi = 0.5 * np.sum(states[:, :nw] ** 2, axis=1) * (rec_dx if rec_dx is not None else 1.0)
    traj = _assemble(scenario.law, states, t, 1, [nw], slice(0, nw), nw + 1, u, V, Phi, V + Phi,
                     rec_dx, ctl.epsilon, step.dt, step.sample_every)
    if closed:
        consts = theorem3_constants(scenario.plant.p, ctl.c, ctl.a, ctl.b, ctl.epsilon, ctl.gamma_rate)
        e0 = float(traj.norm_w[0] ** 2 + y0[0] ** 2)
        traj.bound_313 = consts.energy_bound(traj.t, e0, signal_sup_norm(sig["d"]), signal_sup_norm(sig["theta"]))
        traj.meta["initial_energy"] = e0
    if status != _kernels.OK:
        _abort(traj, status, k, step.dt)
    return traj


# -- general partial-state law ----------------------------------------------


def _is_compiled(fn) -> bool:
    return isinstance(fn, CPUDispatcher)


_JIT_FIELDS = ("f", "g", "k", "gradV", "mu", "phi0", "A0", "phi_full", "A_full", "h", "V", "Phi")


@functools.lru_cache(maxsize=16)
def _general_advance(bundle):
    return _kernels.build_general_advance(bundle)


def _python_advance(bundle, x, k0, nsteps, dt, prm, sig, safety, blowup, zmax):
    """Interpreted twin of the compiled general-law loop for arbitrary callables."""
    from .signals import eval_signal

    n, l = bundle.n, bundle.l
    eps, Gamma, a, beta, b, C = prm

    def rhs(t, s):
        y, w, z = s[:n], s[n : n + l], s[n + l]
        d, th, dl = (eval_signal(sig[key], t) for key in ("d", "theta", "delta"))
        gy = np.asarray(bundle.g(y), float)
        gvg = float(np.dot(bundle.gradV(y), gy))
        a0 = np.asarray(bundle.A0(y), float)
        ph0 = np.asarray(bundle.phi0(y), float)
        u = general_law(float(bundle.k(y)), gvg, float(bundle.mu(y)), float(a0 @ a0), float(ph0 @ ph0), z, a, beta, b, C)
        drive = u + float(np.dot(bundle.phi_full(y, w), th)) + float(np.dot(bundle.A_full(y, w), d))
        out = np.empty_like(s)
        out[:n] = np.asarray(bundle.f(y), float) + gy * drive
        out[n : n + l] = np.asarray(bundle.h(y, w, dl), float)
        out[n + l] = gain_rate(Gamma, float(bundle.V(y)), eps, z)
        return out

    for j in range(nsteps):
        t = (k0 + j) * dt
        f0 = rhs(t, x)
        rows = np.zeros(x.size)
        for i in range(x.size):
            xp = x.copy()
            hj = 1e-7 * max(1.0, abs(x[i]))
            xp[i] += hj
            rows += np.abs(rhs(t, xp) - f0) / hj
        rho = rows.max()
        if not math.isfinite(rho):
            return _kernels.NONFINITE, j
        m = max(1, math.ceil(dt * rho / (safety * _kernels.RK4_RADIUS)))
        if m > _kernels.MAX_SUBSTEPS:
            return _kernels.TOO_STIFF, j
        hs = dt / m
        try:
            for i in range(m):
                x[:] = rk4_step(rhs, t + i * hs, x, hs)
        except (SimulationAbort, OverflowError, FloatingPointError):
            return _kernels.NONFINITE, j + 1
        if not np.all(np.isfinite(x)):
            return _kernels.NONFINITE, j + 1
        if x[-1] > zmax:
            return _kernels.GAIN_OVERFLOW, j + 1
        if np.linalg.norm(x[:-1]) > blowup:
            return _kernels.BLOWUP, j + 1
    return _kernels.OK, nsteps


def _simulate_general(scenario: Scenario) -> Trajectory:
    bundle = scenario.bundle
    params = scenario.dads_params
    ic = scenario.integrator
    step = resolve_stepping(scenario)
    sig = scenario.signals
    y0, w0, z0 = scenario.initial_state()
    n, l = bundle.n, bundle.l
    x = np.concatenate([y0, w0, [z0]])
    prm = np.array([params.epsilon, params.Gamma, params.a, params.beta, params.b, params.C], float)

    compiled = all(_is_compiled(getattr(bundle, name)) for name in _JIT_FIELDS)
    if compiled:
        advance, diagnostics = _general_advance(bundle)
        arrays = tuple(kernel_arrays(sig[key]) for key in ("d", "theta", "delta"))

        def run(k, chunk):
            return advance(x, k, chunk, step.dt, prm, *arrays, float(ic.cfl_safety), float(ic.blowup_guard), float(ic.z_max))
    else:

        def run(k, chunk):
            with np.errstate(over="raise", invalid="raise"):
                return _python_advance(bundle, x, k, chunk, step.dt, prm, sig, ic.cfl_safety, ic.blowup_guard, ic.z_max)

    states, t, status, k = _drive(run, x, step.n_steps, step.sample_every, step.dt)
    diag = np.empty((len(t), 3))
    if compiled:
        diagnostics(states, prm, diag)
    else:
        for i, s in enumerate(states):
            y, w = s[:n], s[n : n + l]
            diag[i] = (dads_control(bundle, params, y, s[n + l], math.inf), float(bundle.V(y)), float(bundle.Phi(w)))
    u, V, Phi = diag[:, 0].copy(), diag[:, 1].copy(), diag[:, 2].copy()
    traj = _assemble("general", states, t, n, slice(0, n), slice(n, n + l), n + l, u, V, Phi,
                     V + 0.5 * bundle.r * Phi, None, params.epsilon, step.dt, step.sample_every,
                     meta={"compiled": compiled})
    if status != _kernels.OK:
        _abort(traj, status, k, step.dt)
    return traj
