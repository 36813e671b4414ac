"""Property tests for the invariants of signals, bounds, laws and norms."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dads_lab.certificates import DadsParams, c_epsilon, chi
from dads_lab.comparison import power, sum_of_powers
from dads_lab.controller import dads_control, deadzone_rate, pde_dads_control
from dads_lab.grid import GridFunction, dirichlet_energy, first_dirichlet_eigenvalue, l2_norm
from dads_lab.plants import worked_example_bundle
from dads_lab.signals import KINDS, make_seeded_bounded, sample_signal, signal_sup_norm

finite = dict(allow_nan=False, allow_infinity=False)
seeds = st.integers(min_value=0, max_value=2**63 - 1)
kinds = st.sampled_from(KINDS)

PARAMS = DadsParams(epsilon=0.1, Gamma=1.0, a=0.5, beta=0.5, b=1.0, C=1.0, r=1.0)
GAMMA = sum_of_powers([(0.3, 1.0), (0.1, 2.0)])


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.floats(0, 50, **finite), kinds)
def test_signal_norm_bounds_samples(seed, dim, bound, kind):
    spec = make_seeded_bounded(seed, dim, bound, kind)
    assert signal_sup_norm(spec) <= bound * (1 + 1e-12)
    t = np.random.default_rng(seed % 2**32).uniform(0, 100, 10_000)
    norms = np.linalg.norm(sample_signal(spec, t), axis=1)
    assert np.all(norms <= signal_sup_norm(spec) + 1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.floats(0, 10, **finite), kinds)
def test_signal_specs_are_seed_determined(seed, dim, bound, kind):
    a = make_seeded_bounded(seed, dim, bound, kind)
    b = make_seeded_bounded(seed, dim, bound, kind)
    assert a.to_json().encode() == b.to_json().encode()
    t = np.linspace(0, 20, 101)
    assert sample_signal(a, t).tobytes() == sample_signal(b, t).tobytes()


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3), kinds)
def test_zero_bound_signals_vanish(seed, dim, kind):
    spec = make_seeded_bounded(seed, dim, 0.0, kind)
    assert not np.any(sample_signal(spec, np.linspace(0, 100, 1001)))


nonneg = st.floats(0, 20, **finite)


@settings(max_examples=300, deadline=None)
@given(st.tuples(nonneg, nonneg, nonneg, nonneg), st.integers(0, 3), st.floats(0, 5, **finite), st.floats(0, 2, **finite))
def test_chi_monotone(s, axis, step, lam):
    lo = list(s)
    hi = list(s)
    hi[axis] += step
    a, b = chi(*lo, PARAMS, GAMMA, lam), chi(*hi, PARAMS, GAMMA, lam)
    if axis == 3:
        assert b <= a * (1 + 1e-12)
    else:
        assert b >= a * (1 - 1e-12)


@settings(max_examples=200, deadline=None)
@given(nonneg, nonneg, nonneg)
def test_chi_inside_deadzone(s2, s3, s4):
    s3 = min(s3, PARAMS.b + s4)
    assert chi(0.0, s2, s3, s4, PARAMS, GAMMA, 0.0) == 0.5 * PARAMS.r * GAMMA(s2)


rhos = st.builds(power, st.floats(0.05, 5, **finite), st.floats(0.3, 4, **finite))


@settings(max_examples=40, deadline=None)
@given(rhos, st.floats(0.01, 3, **finite))
def test_c_epsilon_properties(rho, eps):
    taus = np.sort(np.random.default_rng(1).uniform(0, 30, 60))
    cs = np.array([c_epsilon(rho, eps, tau) for tau in taus])
    assert np.all(cs > 0)
    assert np.all(np.diff(cs) <= 1e-12)
    assert np.all(cs * np.maximum(taus - eps / 2, 0) <= rho(taus) * (1 + 1e-12))


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3, **finite), st.floats(-20, 10, **finite), st.floats(1, 4, **finite),
       st.floats(0.1, 1, **finite), st.floats(1, 4, **finite))
def test_pde_law_is_odd(y, z, c, a, b):
    assert pde_dads_control(c, a, b, -y, z) == -pde_dads_control(c, a, b, y, z)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3, **finite).filter(lambda v: abs(v) > 1e-6), st.floats(-20, 9, **finite), st.floats(0, 5, **finite))
def test_general_law_damping_grows_with_gain(y, z, dz):
    bundle = worked_example_bundle()
    p = DadsParams(0.1, 1.0, 1.0, 0.25, 1.0, 1.0)
    assert abs(dads_control(bundle, p, [y], z + dz)) >= abs(dads_control(bundle, p, [y], z)) * (1 - 1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3, **finite), st.floats(-10, 10, **finite))
def test_general_law_is_continuous(y, z):
    # increments shrink in proportion to the probe step
    bundle = worked_example_bundle()
    p = DadsParams(0.1, 1.0, 1.0, 0.25, 1.0, 1.0)
    u = dads_control(bundle, p, [y], z)
    tiny = 1e-12 * (1 + abs(u))
    for dy, dz in ((1.0, 0.0), (0.0, 1.0)):
        coarse = abs(dads_control(bundle, p, [y + 1e-5 * dy], z + 1e-5 * dz) - u)
        fine = abs(dads_control(bundle, p, [y + 1e-7 * dy], z + 1e-7 * dz) - u)
        assert fine <= 0.02 * coarse + tiny


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 10, **finite), st.floats(-20, 20, **finite), st.floats(0.01, 2, **finite))
def test_deadzone_rate_sign(V, z, eps):
    p = DadsParams(eps, 1.5, 1.0, 0.25, 1.0, 1.0)
    rate = deadzone_rate(p, V, z)
    assert rate >= 0
    assert (rate == 0) == (V <= eps)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_discrete_wirtinger(seed):
    n = 64
    lam = first_dirichlet_eigenvalue(n)
    vals = np.random.default_rng(seed).normal(size=(20, n))
    for v in vals:
        w = GridFunction(v)
        energy, norm2 = dirichlet_energy(w), l2_norm(w) ** 2
        assert energy >= lam * norm2 * (1 - 1e-12)
        assert energy >= math.pi**2 * (1 - 10 / n) * norm2
    assert lam <= math.pi**2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_worked_example_gradients(seed):
    assert worked_example_bundle().gradient_check_failures(n_points=5, seed=seed) == []
