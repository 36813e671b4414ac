"""Certificate data and explicit bound formulas.

Grid-checks the structural inequalities for the worked example and the
polynomial scenario, then evaluates the rate function of the comparison
lemma and the resulting estimate for a sample decay rate.

    python demos/certificates_tour.py
"""

from pathlib import Path

import numpy as np

from dads_lab import c_epsilon, check_assumption_a, lemma1_bound, worked_example_bundle
from dads_lab.comparison import power
from dads_lab.harness import load_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def grid_checks():
    print("worked example")
    print(check_assumption_a(worked_example_bundle()).table())
    print("\npolynomial-cubic")
    print(check_assumption_a(load_scenario(SCENARIOS / "polynomial-cubic.cfg").bundle).table())


def comparison_lemma(eps=0.2):
    rho = power(0.5, 2.0)
    print(f"\nrho(s) = 0.5 s^2, eps = {eps}")
    for tau in (0.05, 0.2, 0.5, 1.0, 2.0, 5.0):
        print(f"  c_eps({tau:4.2f}) = {c_epsilon(rho, eps, tau):.6f}")
    s = 3.0
    print(f"\nestimate from s = {s}, alpha = 0:")
    for t in np.linspace(0.0, 10.0, 6):
        print(f"  t = {t:4.1f}  V <= {lemma1_bound(s, t, 0.0, 0.0, eps, rho):.5f}")


if __name__ == "__main__":
    grid_checks()
    comparison_lemma()
