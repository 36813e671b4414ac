import math

import numpy as np
import pytest

from dads_lab.errors import ConfigurationError, DomainError
from dads_lab.grid import GridFunction, first_dirichlet_eigenvalue, l2_norm
from dads_lab.plants import (
    OdePlant,
    PdePlant,
    cfl_limit,
    explicit_solution_theta,
    explicit_unstable_solution,
    finite_dim_analog_rhs,
    ode_plant_rhs,
    pde_rhs,
    worked_example_bundle,
)

PLANT = OdePlant(worked_example_bundle())


class TestWorkedExample:
    def test_origin(self):
        ydot, wdot = ode_plant_rhs(PLANT, [0.0], [0.0], 0.0, [0.0], [5.0], [0.0])
        assert ydot.tolist() == [0.0] and wdot.tolist() == [0.0]

    def test_spurious_equilibrium(self):
        ydot, wdot = ode_plant_rhs(PLANT, [0.0], [1.0], 0.0, [0.0], [0.0], [0.0])
        assert ydot.tolist() == [0.0] and wdot.tolist() == [0.0]

    def test_hand_value(self):
        ydot, wdot = ode_plant_rhs(PLANT, [1.0], [2.0], 0.0, [0.0], [1.0], [0.0])
        assert ydot.tolist() == [4.0] and wdot.tolist() == [-4.0]

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigurationError):
            ode_plant_rhs(PLANT, [1.0, 2.0], [0.0], 0.0, [0.0], [1.0], [0.0])

    def test_certificate_values(self):
        b = worked_example_bundle()
        assert b.V(np.array([2.0])) == 2.0
        assert b.k(np.array([1.0])) == -2.0
        assert b.R(np.array([1.0])) == 0.5
        assert (b.n, b.l, b.m, b.p_dim, b.q, b.r, b.Lambda) == (1, 1, 1, 1, 1, 1.0, 0.0)


class TestAnalog:
    def test_values(self):
        assert finite_dim_analog_rhs(1, 0, 0, 0, 0, (0, 0)) == (0, 0)
        assert finite_dim_analog_rhs(1, 1, 0, 0, 0, (2, 0)) == (0, 2)
        ydot, wdot = finite_dim_analog_rhs(1, 0, 1, 0, 1, (0, 3))
        assert ydot == 4 and wdot == pytest.approx(-math.pi**2)

    def test_domain(self):
        with pytest.raises(DomainError):
            finite_dim_analog_rhs(0, 0, 0, 0, 0, (0, 0))


class TestPde:
    def test_zero_state(self):
        wdot, ydot = pde_rhs(PdePlant(n_interior=16), GridFunction.zeros(16), 0.0, 0.0, 0.0, (0.0, 0.0))
        assert not np.any(wdot.values) and ydot == 0.0

    def test_sine_mode_decays_at_discrete_rate(self):
        n = 64
        w = GridFunction.from_function(lambda x: np.sin(np.pi * x), n)
        wdot, _ = pde_rhs(PdePlant(n_interior=n), w, 0.0, 0.0, 0.0, (0.0, 0.0))
        lam = first_dirichlet_eigenvalue(n)
        assert np.max(np.abs(wdot.values + lam * w.values)) < 1e-9
        assert np.max(np.abs(wdot.values + np.pi**2 * w.values)) < 2 * (np.pi**4 / 12) / (n + 1) ** 2

    def test_explicit_solution_data(self):
        y, w = explicit_unstable_solution(0.0, 1.0, 6.0, 64)
        assert y == 1.0
        assert np.allclose(w.values, w.x * (w.x - 1.0))
        plant = PdePlant(p=1.0, n_interior=64)
        assert 6.0 * plant.L(w) == pytest.approx(1.0, abs=1e-3)
        y2, w2 = explicit_unstable_solution(math.log(2.0), 1.0, 6.0, 64)
        assert y2 == pytest.approx(2.0) and np.allclose(w2.values, 2 * w.values)

    def test_explicit_solution_domain(self):
        with pytest.raises(DomainError):
            explicit_unstable_solution(0.0, 1.0, 0.0, 16)
        assert explicit_solution_theta(1.0, 6.0) == (3.0, 6.0)

    def test_grid_mismatch(self):
        with pytest.raises(ConfigurationError):
            pde_rhs(PdePlant(n_interior=16), GridFunction.zeros(8), 0.0, 0.0, 0.0, (0.0, 0.0))

    def test_kernel_bounds(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 1, 1000)
        y = rng.uniform(-10, 10, 1000)
        for p in (0.05, 1.0, 7.0):
            for choice in ("paper-unstable", "linear-saturating", "zero"):
                plant = PdePlant(p=p, K_choice=choice, n_interior=32)
                assert np.all(np.abs(plant.K(x, y)) <= np.abs(y) + 1e-12)
        for choice in ("paper-integral", "norm-bounded-projection", "zero"):
            plant = PdePlant(L_choice=choice, n_interior=32)
            for _ in range(1000):
                w = rng.normal(size=32) * rng.uniform(0.1, 10)
                assert abs(plant.L(w)) <= l2_norm(w) + 1e-9

    def test_cfl_limit(self):
        assert cfl_limit(1.0, 64) == pytest.approx(0.5 / 65**2 / 2)

    def test_bad_choices(self):
        with pytest.raises(ConfigurationError):
            PdePlant(K_choice="cubic")
        with pytest.raises(ConfigurationError):
            PdePlant(p=-1.0)
