"""Trajectory-level checks of the regulation estimates and dissipation inequalities.

Every check yields a :class:`CheckRecord` whose margin is ``allowed - observed``
(nonnegative means satisfied) together with the sample time of the worst
margin. Asymptotic statements are judged on the last ``tail_fraction`` of
the horizon and reported ``inconclusive`` when the horizon is too short.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..certificates import PI, Theorem3Constants, theorem3_constants
from ..errors import SimulationAbort
from ..integrator import Trajectory, simulate
from ..scenario import Scenario
from ..signals import eval_signal, sample_signal, signal_sup_norm

PASS, FAIL, INCONCLUSIVE, SKIPPED = "pass", "fail", "inconclusive", "skipped"


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    ref: str
    status: str
    worst_margin: float
    worst_time: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass(frozen=True)
class VerificationReport:
    scenario: str
    checks: tuple[CheckRecord, ...] = ()
    aborted: bool = False
    abort_reason: str = ""

    @property
    def passed(self) -> bool:
        """No failing check and no abort; inconclusive and skipped checks do not fail a run."""
        return not self.aborted and all(c.status != FAIL for c in self.checks)

    def get(self, check_id: str) -> CheckRecord:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def to_lines(self) -> list[str]:
        lines = [
            f"scenario = {self.scenario}",
            f"overall = {'pass' if self.passed else 'fail'}",
            f"aborted = {'true' if self.aborted else 'false'}",
            f"abort_reason = {self.abort_reason}",
        ]
        for c in self.checks:
            key = f"check.{c.check_id}"
            lines += [
                f"{key}.ref = {c.ref}",
                f"{key}.status = {c.status}",
                f"{key}.worst_margin = {c.worst_margin:.17g}",
                f"{key}.worst_time = {c.worst_time:.17g}",
                f"{key}.note = {c.note}",
            ]
        return lines


def _worst(margins: np.ndarray, times: np.ndarray) -> tuple[float, float]:
    if margins.size == 0:
        return math.inf, math.nan
    i = int(np.argmin(margins))
    return float(margins[i]), float(times[i])


def _record(check_id, ref, margins, times, conclusive=True, note="") -> CheckRecord:
    m, t = _worst(np.asarray(margins, float), np.asarray(times, float))
    if not conclusive:
        status = INCONCLUSIVE
    else:
        status = PASS if m >= 0 else FAIL  # NaN margins fail
    return CheckRecord(check_id, ref, status, m, t, note)


def _tail(traj: Trajectory, fraction: float) -> np.ndarray:
    t_end = traj.t[-1]
    return traj.t >= t_end * (1.0 - fraction) - 1e-12


def _z_monotone(traj: Trajectory, z0: float) -> CheckRecord:
    dz = np.diff(traj.z)
    margins = np.concatenate([[0.0 - abs(traj.z[0] - z0)], dz + 1e-12])
    return _record("z-monotone", "gain-nondecreasing", margins, traj.t, note="z(0) = z0 and no sample decreases by more than 1e-12")


# -- general partial-state law -------------------------------------------------


def verify_theorem1_qualitative(traj: Trajectory, scenario: Scenario) -> list[CheckRecord]:
    """Regulation, gain settling and boundedness checks for the general law.

    Only qualitative statements are checked: the comparison functions in the
    bound on ``U`` have no closed form, so ``Phi`` and ``U`` are reported as
    bounded by their recorded suprema.
    """
    vc, ctl = scenario.verify, scenario.controller
    t_end = float(traj.t[-1]) if len(traj) else 0.0
    long_enough = t_end >= 10.0
    short_note = "" if long_enough else f"horizon {t_end:g} < 10 is too short for a limsup statement"
    tail = _tail(traj, vc.tail_fraction)
    recs = []

    allowed = ctl.epsilon * (1 + vc.rel_tol) + vc.abs_tol
    recs.append(
        _record("V-limsup", "regulation-limsup", allowed - traj.V[tail], traj.t[tail], long_enough,
                short_note or f"tail max V = {traj.V[tail].max():.6g}, allowed {allowed:.6g}")
    )
    recs.append(_z_monotone(traj, ctl.z0))
    i0 = int(np.argmax(tail))
    growth = traj.z[-1] - traj.z[i0]
    recs.append(
        CheckRecord(
            "deadzone-settling", "gain-bounded-limit",
            PASS if (growth <= vc.settle_tol and long_enough) else (FAIL if long_enough else INCONCLUSIVE),
            float(vc.settle_tol - growth), float(traj.t[-1]),
            short_note or f"z(t_end) - z({traj.t[i0]:g}) = {growth:.6g}",
        )
    )
    guard = scenario.integrator.blowup_guard
    phi_sup = float(np.max(traj.Phi[tail]))
    recs.append(
        _record("Phi-tail-bounded", "unmeasured-limsup-bounded", guard - traj.Phi[tail], traj.t[tail], long_enough,
                short_note or f"tail sup Phi = {phi_sup:.6g} (no closed-form gain exists)")
    )
    recs.append(
        _record("U-bounded", "energy-bounded", guard - traj.U, traj.t, True, f"sup U = {float(np.max(traj.U)):.6g}")
    )
    recs.append(_final_alternative(traj, scenario, long_enough))
    return recs


def _final_alternative(traj: Trajectory, scenario: Scenario, long_enough: bool) -> CheckRecord:
    sig = scenario.signals
    bundle = scenario.bundle
    vc = scenario.verify
    applicable = (
        vc.final_alternative
        and bundle.gamma_at_zero == 0.0
        and bundle.Lambda == 0.0
        and sig["theta"].is_constant()
        and sig["d"].vanishes_at_infinity()
        and sig["delta"].vanishes_at_infinity()
    )
    if not applicable:
        return CheckRecord("final-alternative", "constant-parameter-dichotomy", SKIPPED, 0.0, math.nan,
                           "needs gamma(0) = Lambda = 0, constant theta and vanishing d, delta")
    tol = vc.tail_abs_tol
    converge = tol - max(float(np.linalg.norm(traj.y[-1])), float(traj.norm_w[-1]))
    theta_norm = float(np.linalg.norm(eval_signal(sig["theta"], 0.0)))
    b = scenario.controller.b
    if theta_norm > b:
        stalled = math.log(theta_norm - b) - float(traj.z[-1])
    else:
        stalled = -math.inf
    margin = max(converge, stalled)
    status = (PASS if margin >= 0 else FAIL) if long_enough else INCONCLUSIVE
    return CheckRecord("final-alternative", "constant-parameter-dichotomy", status, margin, float(traj.t[-1]),
                       "either |y|, |w| -> 0 or |theta| > b with lim z < ln(|theta| - b)")


# -- reaction-diffusion law ----------------------------------------------------


def _pde_constants(scenario: Scenario) -> Theorem3Constants:
    c = scenario.controller
    return theorem3_constants(scenario.plant.p, c.c, c.a, c.b, c.epsilon, c.gamma_rate)


def verify_theorem3(traj: Trajectory, scenario: Scenario, consts: Theorem3Constants | None = None) -> list[CheckRecord]:
    """Energy bound, gain bound and the two tail estimates of the diffusion loop."""
    consts = consts or _pde_constants(scenario)
    vc, ctl = scenario.verify, scenario.controller
    sig = scenario.signals
    d_sup, th_sup = signal_sup_norm(sig["d"]), signal_sup_norm(sig["theta"])
    p = scenario.plant.p
    y = traj.y[:, 0]
    energy = traj.norm_w**2 + y**2
    e0 = float(energy[0])
    t_end = float(traj.t[-1])
    long_enough = t_end >= 10.0 / consts.kappa
    short_note = "" if long_enough else f"horizon {t_end:g} < 10/kappa = {10 / consts.kappa:g}"
    recs = []

    bound = consts.energy_bound(traj.t, e0, d_sup, th_sup)
    recs.append(
        _record("energy-bound", "pde-energy-estimate", bound * (1 + vc.disc_tol) + vc.abs_tol - energy, traj.t,
                note=f"kappa = {consts.kappa:.17g}")
    )
    zb = consts.gain_bound(float(traj.z[0]), e0, d_sup, th_sup)
    recs.append(
        _record("gain-bound", "pde-gain-estimate", zb + vc.ln_slack - traj.z, traj.t, note=f"z bound = {zb:.17g}")
    )
    recs.append(_z_monotone(traj, ctl.z0))
    tail = _tail(traj, vc.tail_fraction)
    y_allowed = math.sqrt(2 * ctl.epsilon) * (1 + vc.rel_tol) + vc.tail_abs_tol
    recs.append(
        _record("y-limsup", "pde-output-limsup", y_allowed - np.abs(y[tail]), traj.t[tail], long_enough,
                short_note or f"allowed {y_allowed:.6g}")
    )
    if sig["theta"].is_constant():
        th1 = abs(float(eval_signal(sig["theta"], 0.0)[0]))
        w_allowed = math.sqrt(2 * ctl.epsilon) / (p * PI**2) * th1 * (1 + vc.rel_tol) + vc.tail_abs_tol
        recs.append(
            _record("w-limsup", "pde-unmeasured-limsup", w_allowed - traj.norm_w[tail], traj.t[tail], long_enough,
                    short_note or f"allowed {w_allowed:.6g}")
        )
    else:
        recs.append(CheckRecord("w-limsup", "pde-unmeasured-limsup", SKIPPED, 0.0, math.nan,
                                "needs constant theta"))
    return recs


def monitor_dissipation(traj: Trajectory, scenario: Scenario) -> list[CheckRecord]:
    """Centered-difference checks of the dissipation inequalities along ``traj``.

    The tolerance at sample ``i`` is ``c_mon * scale_i * (h + dx^2)`` where
    ``h`` is the sample spacing and ``scale_i`` the largest of the monitored
    functional's magnitude over the three-point stencil and the magnitude of
    the inequality's right-hand side. The second term keeps the budget above
    the gap between the discrete and continuous Wirtinger constants, which
    is of order ``p pi^4 dx^2`` times the functional.
    """
    if scenario.law not in ("pde", "open-loop") or len(traj) < 3:
        return []
    vc, ctl = scenario.verify, scenario.controller
    p = scenario.plant.p
    sig = scenario.signals
    t = traj.t
    y = traj.y[:, 0]
    nw = traj.norm_w
    dx2 = traj.dx**2 if traj.dx is not None else 0.0
    th = sample_signal(sig["theta"], t)
    d = sample_signal(sig["d"], t)[:, 0]
    th1 = np.abs(th[:, 0])
    thn = np.linalg.norm(th, axis=1)
    mid = slice(1, len(t) - 1)
    h = t[2:] - t[:-2]
    tm = t[mid]

    def monitor(check_id, ref, Q, rhs):
        deriv = (Q[2:] - Q[:-2]) / h
        scale = np.maximum.reduce([np.abs(Q[2:]), np.abs(Q[:-2]), np.abs(Q[mid]), np.abs(rhs[mid])])
        tol = vc.c_mon * scale * (0.5 * h + dx2)
        return _record(check_id, ref, rhs[mid] + tol - deriv, tm)

    recs = [
        monitor("phi-dissipation", "wirtinger-dissipation", traj.Phi, -p * PI**2 * nw**2 + th1 * np.abs(y) * nw),
    ]
    if scenario.law != "pde":
        return recs
    a, b, c = ctl.a, ctl.b, ctl.c
    gain = b + np.exp(traj.z)
    excess = np.maximum(thn - gain, 0.0)
    rhs_v = -2 * c * traj.V - c * y**4 - c * y**8 + a * (d**2 + excess**8 + 2 / p**2 + p * PI**2 * traj.Phi) / gain
    recs.append(monitor("V-dissipation", "closed-loop-output-dissipation", traj.V, rhs_v))
    consts = _pde_constants(scenario)
    excess_b = np.maximum(thn - b, 0.0)
    rhs_u = -consts.kappa * traj.U + a / b * (d**2 + excess_b**8 + 2 / p**2) + thn**4 / (4 * p**2 * PI**4)
    recs.append(monitor("U-dissipation", "composite-dissipation", traj.U, rhs_u))
    e0 = float(nw[0] ** 2 + y[0] ** 2)
    R = consts.gain_forcing(e0, signal_sup_norm(sig["d"]), signal_sup_norm(sig["theta"]))
    recs.append(monitor("V-gain-dissipation", "gain-coupled-dissipation", traj.V, -2 * c * traj.V + R / gain))
    return recs


# -- orchestration ---------------------------------------------------------------


def run_scenario(scenario: Scenario) -> tuple[Trajectory, VerificationReport]:
    """Simulate and run every enabled check.

    Guard aborts yield a report marked aborted carrying the partial trajectory;
    invalid scenarios raise :class:`ConfigurationError` before any stepping.
    """
    try:
        traj = simulate(scenario)
    except SimulationAbort as exc:
        return exc.trajectory, VerificationReport(scenario.name, (), True, str(exc))
    vc = scenario.verify
    checks: list[CheckRecord] = []
    if scenario.law == "general" and vc.theorem1:
        checks += verify_theorem1_qualitative(traj, scenario)
    if scenario.law == "pde" and vc.theorem3:
        checks += verify_theorem3(traj, scenario)
    if vc.monitors:
        checks += monitor_dissipation(traj, scenario)
    return traj, VerificationReport(scenario.name, tuple(checks))
