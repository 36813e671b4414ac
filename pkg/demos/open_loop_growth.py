"""Uncontrolled diffusion plant: the closed-form growing solution as a grid oracle.

Prints the semi-discrete residual of the exact solution on three grids
(second order: ratios near 4) and the ratio of simulated growth to e^t.

    python demos/open_loop_growth.py
"""

import math
from pathlib import Path

import numpy as np

from dads_lab import PdePlant, explicit_unstable_solution, l2_norm, pde_rhs, simulate
from dads_lab.harness import load_scenario
from dads_lab.plants import explicit_solution_theta

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def residuals(p=1.0, theta2=6.0):
    theta = explicit_solution_theta(p, theta2)
    prev = None
    for n in (16, 32, 64, 128, 256):
        y, w = explicit_unstable_solution(0.0, p, theta2, n)
        wdot, ydot = pde_rhs(PdePlant(p=p, n_interior=n), w, y, 0.0, 0.0, theta)
        res = math.hypot(l2_norm(wdot.values - w.values), ydot - y)
        ratio = "" if prev is None else f"  ratio {prev / res:.3f}"
        print(f"N = {n:4d}  residual {res:.3e}{ratio}")
        prev = res


def growth():
    traj = simulate(load_scenario(SCENARIOS / "open-loop-explicit.cfg"))
    size = np.sqrt(traj.norm_w**2 + traj.y[:, 0] ** 2)
    ratio = size / (size[0] * np.exp(traj.t))
    print(f"\n||state(t)|| / (||state(0)|| e^t) over t in [0, 3]: min {ratio.min():.6f}, max {ratio.max():.6f}")


if __name__ == "__main__":
    residuals()
    growth()
