"""Reaction-diffusion loop: energy and gain against their closed-form bounds.

Runs the default scenario (64 interior points, step at the explicit
stability limit) and prints the energy ||w||^2 + y^2 next to its bound, the
gain z next to its ceiling and the dissipation monitor margins.

    python demos/diffusion_loop.py
"""

import math
import time
from pathlib import Path

import numpy as np

from dads_lab import theorem3_constants
from dads_lab.harness import load_scenario, run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def main():
    sc = load_scenario(SCENARIOS / "pde-default.cfg")
    ctl = sc.controller
    consts = theorem3_constants(sc.plant.p, ctl.c, ctl.a, ctl.b, ctl.epsilon, ctl.gamma_rate)
    print(f"kappa = {consts.kappa:.6g}, Kbar = {consts.Kbar:.6g}, Bbar = {consts.Bbar:.6g}")

    start = time.perf_counter()
    traj, report = run_scenario(sc)
    print(f"simulated t in [0, {traj.t[-1]:g}] with dt = {traj.dt:.3g} in {time.perf_counter() - start:.2f} s\n")

    energy = traj.norm_w**2 + traj.y[:, 0] ** 2
    print(f"{'t':>6} {'energy':>12} {'bound':>12} {'|y|':>10} {'||w||':>10} {'z':>10}")
    for t_mark in (0, 0.1, 0.5, 1, 2, 5, 10, 20, 30):
        i = int(np.argmin(np.abs(traj.t - t_mark)))
        print(f"{traj.t[i]:6.2f} {energy[i]:12.5g} {traj.bound_313[i]:12.5g} "
              f"{abs(traj.y[i, 0]):10.4g} {traj.norm_w[i]:10.4g} {traj.z[i]:10.4g}")

    print(f"\ntail |y| allowed {math.sqrt(2 * ctl.epsilon):.4g}, tail ||w|| allowed "
          f"{math.sqrt(2 * ctl.epsilon) / (sc.plant.p * math.pi**2) * 2:.4g}")
    for c in report.checks:
        print(f"  {c.check_id:<20} {c.status:<13} worst margin {c.worst_margin:.4g} at t = {c.worst_time:.4g}")


if __name__ == "__main__":
    main()
