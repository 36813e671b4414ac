"""Certificate data, controller parameter gates and explicit bound formulas."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import golden

from .comparison import ScalarClassFunction
from .errors import ContractError, DomainError

PI = math.pi


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DadsParams:
    """Constants of the general partial-state law and its gain update.

    ``r`` is copied from the certificate so that the coupling constraint
    ``2 a beta < b r`` can be checked on its own.
    """

    epsilon: float
    Gamma: float
    a: float
    beta: float
    b: float
    C: float
    r: float = 1.0


@dataclass(frozen=True)
class PdeDadsParams:
    """Constants of the reaction-diffusion law (``c`` replaces ``beta``/``C``)."""

    epsilon: float
    Gamma: float
    a: float
    b: float
    c: float


def check_params(params: DadsParams) -> ValidationResult:
    p = params
    bad = []
    if not p.epsilon > 0:
        bad.append("ε > 0")
    if not p.Gamma > 0:
        bad.append("Γ > 0")
    if not 0 < p.a <= 1:
        bad.append("a ∈ (0,1]")
    if not 0 < p.beta <= 1:
        bad.append("β ∈ (0,1]")
    if not p.b >= 1:
        bad.append("b ≥ 1")
    if not p.C >= 1:
        bad.append("C ≥ 1")
    if not p.r > 0:
        bad.append("r > 0")
    if not 2 * p.a * p.beta < p.b * p.r:
        bad.append("2aβ < br")
    return ValidationResult(tuple(bad))


def check_pde_params(params: PdeDadsParams) -> ValidationResult:
    p = params
    bad = []
    if not p.epsilon > 0:
        bad.append("ε > 0")
    if not p.Gamma > 0:
        bad.append("Γ > 0")
    if not (p.b >= 1 >= p.a > 0):
        bad.append("b ≥ 1 ≥ a > 0")
    if not p.c >= 1:
        bad.append("c ≥ 1")
    return ValidationResult(tuple(bad))


Vec = np.ndarray


@dataclass(frozen=True, eq=False)
class CertificateBundle:
    """Plant maps plus the Lyapunov-type data certifying the structural assumption.

    Callables take and return 1-D float arrays (scalars for ``V``, ``k``,
    ``mu``, ``Q``, ``Phi``, ``R``). ``phi0`` and ``A0`` are the regressor and
    disturbance maps evaluated at ``w = 0``.
    """

    n: int
    l: int
    m: int
    p_dim: int
    q: int
    V: Callable
    gradV: Callable
    k: Callable
    mu: Callable
    Q: Callable
    Phi: Callable
    R: Callable
    gradPhi: Callable
    gamma: ScalarClassFunction | Callable
    r: float
    Lambda: float
    f: Callable
    g: Callable
    phi0: Callable
    A0: Callable
    phi_full: Callable
    A_full: Callable
    h: Callable
    name: str = "bundle"
    meta: dict = field(default_factory=dict)

    def U(self, y, w) -> float:
        return float(self.V(y)) + 0.5 * self.r * float(self.Phi(w))

    @property
    def gamma_at_zero(self) -> float:
        return float(self.gamma(0.0))

    def point_check_failures(self) -> list[str]:
        y0, w0, d0 = np.zeros(self.n), np.zeros(self.l), np.zeros(self.q)
        checks = {
            "V(0)=0": float(self.V(y0)),
            "Q(0)=0": float(self.Q(y0)),
            "Phi(0)=0": float(self.Phi(w0)),
            "R(0)=0": float(self.R(w0)),
            "k(0)=0": float(self.k(y0)),
            "f(0)=0": float(np.linalg.norm(self.f(y0))),
            "phi(0,0)=0": float(np.linalg.norm(self.phi_full(y0, w0))),
            "h(0,0,0)=0": float(np.linalg.norm(self.h(y0, w0, d0))),
        }
        return [name for name, val in checks.items() if abs(val) > 1e-12]

    def gradient_check_failures(self, n_points: int = 20, seed: int = 0, rtol: float = 1e-5) -> list[str]:
        """Compare ``gradV``/``gradPhi`` with central differences at random points."""
        rng = np.random.default_rng(seed)
        failures = []
        for label, fn, grad, dim in (("gradV", self.V, self.gradV, self.n), ("gradPhi", self.Phi, self.gradPhi, self.l)):
            for _ in range(n_points):
                x = rng.uniform(-2, 2, dim)
                g_an = np.asarray(grad(x), dtype=float)
                g_fd = np.empty(dim)
                for j in range(dim):
                    h = 1e-6 * max(1.0, abs(x[j]))
                    e = np.zeros(dim)
                    e[j] = h
                    g_fd[j] = (float(fn(x + e)) - float(fn(x - e))) / (2 * h)
                scale = max(1.0, float(np.max(np.abs(g_an))))
                if np.max(np.abs(g_an - g_fd)) > rtol * scale:
                    failures.append(f"{label} mismatch at {x.tolist()}")
                    break
        return failures

    def mu_positive_failures(self, n_points: int = 200, seed: int = 0) -> list[str]:
        rng = np.random.default_rng(seed)
        return [f"mu <= 0 at {y.tolist()}" for y in rng.uniform(-3, 3, (n_points, self.n)) if not float(self.mu(y)) > 0]


# -- explicit bound formulas ------------------------------------------------


def chi(s1: float, s2: float, s3: float, s4: float, params: DadsParams, gamma, Lambda: float) -> float:
    """Input-to-state gain argument of the general closed loop.

    ``s1``..``s4`` stand for the sup-norms of d, delta, theta and the initial
    gain ``exp(z0)``.
    """
    if min(s1, s2, s3, s4) < 0 or Lambda < 0:
        raise DomainError("chi is defined for nonnegative arguments")
    a, b, beta = params.a, params.b, params.beta
    excess = max(s3 - b - s4, 0.0)
    num = s1**2 + s1**4 + excess**2 + excess**4 + 2 * beta * Lambda
    return 0.5 * params.r * float(gamma(s2)) + a * num / (b + s4)


def _require_kinf(rho):
    if not isinstance(rho, ScalarClassFunction) or not rho.is_Kinfinity:
        raise ContractError("rho must be a ScalarClassFunction of class K-infinity")


def c_epsilon(rho: ScalarClassFunction, epsilon: float, tau: float, n_grid: int = 2048) -> float:
    """Positive non-increasing rate with ``c(tau) * (tau - eps/2)^+ <= rho(tau)``.

    The infimum of ``2 rho(l) / (2 l - eps)`` over ``eps/2 < l <= tau`` is
    taken on a log-spaced grid, refined by golden-section search around the
    grid minimiser, and shrunk by a factor ``1 - 1e-6`` so the returned value
    never exceeds the exact one.
    """
    _require_kinf(rho)
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if not tau >= 0:
        raise DomainError("tau must be nonnegative")
    half = 0.5 * epsilon
    if tau <= half:
        return 1.0
    span = tau - half
    offsets = np.geomspace(span * 1e-12, span, n_grid)
    offsets[-1] = span
    ls = half + offsets
    ls[-1] = tau
    ratios = np.asarray(rho(ls)) / offsets  # 2 rho(l) / (2l - eps) with the 2s cancelled
    i = int(np.argmin(ratios))
    best = float(ratios[i])
    if 0 < i < n_grid - 1:

        def ratio(l):
            return float(rho(l)) / (l - half) if l > half else math.inf

        try:
            l_star = golden(ratio, brack=(ls[i - 1], ls[i], ls[i + 1]), tol=1e-8)
            if half < l_star <= tau:
                best = min(best, ratio(l_star))
        except (ValueError, RuntimeError):
            pass
    return min(1.0, best * (1.0 - 1e-6))


@functools.lru_cache(maxsize=4096)
def _c_epsilon_cached(rho: ScalarClassFunction, epsilon: float, tau: float) -> float:
    return c_epsilon(rho, epsilon, tau)


def lemma1_s(V0: float, alpha0: float, rho: ScalarClassFunction) -> float:
    """The level ``V(0) + rho^{-1}(alpha(0))`` that bounds the whole solution."""
    return float(V0) + rho.inverse(alpha0)


def lemma1_bound(s: float, t: float, t0: float, alpha_t0: float, epsilon: float, rho: ScalarClassFunction) -> float:
    """Upper estimate of ``V(t)`` for solutions of ``V' <= -rho(V) + alpha(t)``."""
    if t < t0 or t0 < 0:
        raise DomainError(f"need 0 <= t0 <= t, got t0={t0}, t={t}")
    if s < 0 or alpha_t0 < 0:
        raise DomainError("s and alpha(t0) must be nonnegative")
    c = _c_epsilon_cached(rho, float(epsilon), float(s))
    return min(s, s * math.exp(-c * (t - t0)) + 0.5 * epsilon + alpha_t0 / c)


@dataclass(frozen=True)
class Theorem3Constants:
    """Decay rate and gain constants of the reaction-diffusion closed loop."""

    kappa: float
    Kbar: float
    Bbar: float
    p: float
    c: float
    a: float
    b: float
    epsilon: float
    Gamma: float

    def energy_bound(self, t, initial_energy: float, d_sup: float, theta_sup: float):
        """Bound on ``||w(t)||^2 + y(t)^2``; ``t`` may be an array."""
        p, a, b, k = self.p, self.a, self.b, self.kappa
        offset = 2 * a * (d_sup**2 + theta_sup**8 + 2 / p**2) / (b * k) + theta_sup**4 / (2 * p**2 * PI**4 * k)
        return np.exp(-k * np.asarray(t, dtype=float)) * initial_energy + offset

    def gain_bound(self, z0: float, initial_energy: float, d_sup: float, theta_sup: float) -> float:
        """Upper bound on the dynamic gain ``z(t)`` for all times."""
        total = d_sup**2 + theta_sup**4 + theta_sup**8 + 2 / self.p**2 + initial_energy
        return math.log(math.exp(z0) + self.Bbar * total)

    def gain_forcing(self, initial_energy: float, d_sup: float, theta_sup: float) -> float:
        """Numerator ``a Kbar (...)`` of the forcing term driving ``V``."""
        total = d_sup**2 + theta_sup**4 + theta_sup**8 + 2 / self.p**2 + initial_energy
        return self.a * self.Kbar * total


def theorem3_constants(p: float, c: float, a: float, b: float, epsilon: float, Gamma: float) -> Theorem3Constants:
    if not p > 0:
        raise DomainError("hypothesis p > 0 violated")
    if not c >= 1:
        raise DomainError("hypothesis c ≥ 1 violated")
    if not (b >= 1 >= a > 0):
        raise DomainError("hypothesis b ≥ 1 ≥ a > 0 violated")
    if not epsilon > 0 or not Gamma > 0:
        raise DomainError("hypothesis ε, Γ > 0 violated")
    pp2 = p * PI**2
    kappa = min(pp2 / 2, 2 * c)
    Kbar = (4 * pp2 * (b * kappa + a * pp2) + 2 * b * kappa * p**2 * PI**4 + b) / (4 * pp2 * b * kappa)
    Bbar = (a * Kbar * (epsilon * Gamma + 2 * c) + epsilon * c * Gamma) / (4 * c**2 * epsilon)
    return Theorem3Constants(kappa, Kbar, Bbar, p, c, a, b, epsilon, Gamma)


# -- grid check of the structural certificate --------------------------------

INEQUALITY_IDS = ("nominal-decrease", "w-dissipation", "w-coupling-growth", "regressor-growth")


@dataclass(frozen=True)
class AssumptionGrid:
    """Tensor grid over ``(y, w, delta)`` in a box, capped at ``max_points``."""

    lo: float = -3.0
    hi: float = 3.0
    points_per_axis: int = 21
    max_points: int = 10_000

    def points(self, n: int, l: int, q: int) -> np.ndarray:
        dims = n + l + q
        per_axis = self.points_per_axis
        while per_axis > 2 and per_axis**dims > self.max_points:
            per_axis -= 1
        if per_axis % 2 == 0:
            per_axis -= 1  # odd counts keep 0 on every axis
        axis = np.linspace(self.lo, self.hi, per_axis)
        mesh = np.meshgrid(*([axis] * dims), indexing="ij")
        pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
        if not np.any(np.all(pts == 0.0, axis=1)):
            pts = np.vstack([np.zeros(dims), pts])
        return pts


@dataclass(frozen=True)
class InequalityRow:
    name: str
    min_slack: float
    argmin: tuple
    passed: bool


@dataclass(frozen=True)
class AssumptionReport:
    rows: tuple[InequalityRow, ...]
    n_points: int
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.rows)

    def table(self) -> str:
        lines = [f"{'inequality':<20} {'min_slack':>24}  pass  argmin (y | w | delta)"]
        for r in self.rows:
            lines.append(f"{r.name:<20} {r.min_slack:>24.17g}  {'yes' if r.passed else 'no ':<4}  {r.argmin}")
        if self.error:
            lines.append(f"error: {self.error}")
        return "\n".join(lines)


def _slacks(bundle: CertificateBundle, y, w, dl) -> tuple[float, float, float, float]:
    gy = np.asarray(bundle.g(y), float)
    gradV = np.asarray(bundle.gradV(y), float)
    Q, mu, R = float(bundle.Q(y)), float(bundle.mu(y)), float(bundle.R(w))
    lam, r = bundle.Lambda, bundle.r
    closed = np.asarray(bundle.f(y), float) + gy * float(bundle.k(y))
    s1 = -r * Q - float(gradV @ closed)
    hw = np.asarray(bundle.h(y, w, dl), float)
    s2 = -R + float(bundle.gamma(float(np.linalg.norm(dl)))) + Q - float(np.asarray(bundle.gradPhi(w), float) @ hw)
    phi0 = np.asarray(bundle.phi0(y), float)
    a0 = np.asarray(bundle.A0(y), float)
    dphi = np.asarray(bundle.phi_full(y, w), float) - phi0
    dA = np.asarray(bundle.A_full(y, w), float) - a0
    s3 = mu * (R + lam) - float(dphi @ dphi + dA @ dA)
    s4 = mu * (Q + lam + float(gradV @ gy) ** 2) - float(phi0 @ phi0)
    return s1, s2, s3, s4


def check_assumption_a(bundle: CertificateBundle, grid: AssumptionGrid | np.ndarray | None = None, tol: float = 1e-9) -> AssumptionReport:
    """Minimum slack (right minus left side) of the four certificate inequalities.

    ``grid`` is an :class:`AssumptionGrid` or an explicit ``(points, n+l+q)``
    array. The argmin is the first grid point attaining the minimum. A sampled
    box is a necessary check only; the inequalities are global claims.
    """
    n, l, q = bundle.n, bundle.l, bundle.q
    pts = (grid or AssumptionGrid()).points(n, l, q) if not isinstance(grid, np.ndarray) else np.asarray(grid, float)
    if pts.ndim != 2 or pts.shape[1] != n + l + q:
        raise DomainError(f"grid points must have {n + l + q} columns")
    best = [math.inf] * 4
    where = [None] * 4
    for idx, pt in enumerate(pts):
        y, w, dl = pt[:n], pt[n : n + l], pt[n + l :]
        try:
            vals = _slacks(bundle, y, w, dl)
        except Exception as exc:  # report the offending point instead of crashing
            rows = tuple(InequalityRow(name, math.nan, (), False) for name in INEQUALITY_IDS)
            return AssumptionReport(rows, idx, f"evaluation failed at y={y.tolist()}, w={w.tolist()}, delta={dl.tolist()}: {exc!r}")
        for j, v in enumerate(vals):
            if not math.isfinite(v):
                rows = tuple(InequalityRow(name, math.nan, (), False) for name in INEQUALITY_IDS)
                return AssumptionReport(rows, idx, f"non-finite {INEQUALITY_IDS[j]} slack at y={y.tolist()}, w={w.tolist()}, delta={dl.tolist()}")
            if v < best[j]:
                best[j] = v
                where[j] = (tuple(y.tolist()), tuple(w.tolist()), tuple(dl.tolist()))
    rows = tuple(InequalityRow(name, best[j], where[j], best[j] >= -tol) for j, name in enumerate(INEQUALITY_IDS))
    return AssumptionReport(rows, len(pts))
