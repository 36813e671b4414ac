"""Scalar worked example: output regulation by the dynamic-gain law.

Runs the shipped scenario, prints a coarse time table of the output, the
Lyapunov value and the gain, then shows why the unmeasured state is not
input-to-state stable: with the output held at zero, w = 1 never moves.

    python demos/worked_example.py
"""

from pathlib import Path

import numpy as np

from dads_lab import AugmentedState, step_rk4
from dads_lab.harness import load_scenario, run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def regulation():
    sc = load_scenario(SCENARIOS / "worked-example.cfg")
    traj, report = run_scenario(sc)
    print(f"{'t':>6} {'y':>12} {'w':>12} {'V(y)':>12} {'z':>12}")
    for t_mark in (0, 1, 2, 5, 10, 20, 30, 40, 50):
        i = int(np.argmin(np.abs(traj.t - t_mark)))
        print(f"{traj.t[i]:6.1f} {traj.y[i, 0]:12.5g} {traj.norm_w[i]:12.5g} {traj.V[i]:12.5g} {traj.z[i]:12.5g}")
    print(f"\ndeadzone level eps = {sc.controller.epsilon}; tail max V = {traj.V[traj.t >= 40].max():.3g}")
    for c in report.checks:
        print(f"  {c.check_id:<20} {c.status}")


def spurious_equilibrium():
    state = AugmentedState(0.0, np.zeros(1), np.ones(1), 0.0)
    for _ in range(1000):
        state = step_rk4(lambda t, y, w, z: (0 * y, -(w * w - 1 - y * y) * w, 0.0), state, 0.01)
    print(f"\ny held at 0, w(0) = 1: w(10) = {state.w[0]:.12f}")


if __name__ == "__main__":
    regulation()
    spurious_equilibrium()
