"""Plant right-hand sides: the matched ODE class, its worked example, the
scalar analog of the diffusion loop, and the semi-discretized
reaction-diffusion plant with its explicit unstable open-loop solution.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels
from .certificates import CertificateBundle
from .comparison import constant
from .errors import ConfigurationError, DomainError
from .grid import GridFunction, grid_points, l2_norm

K_CHOICES = tuple(_kernels.K_CODES)
L_CHOICES = tuple(_kernels.L_CODES)


# -- general matched ODE class ----------------------------------------------


@dataclass(frozen=True)
class OdePlant:
    bundle: CertificateBundle


def ode_plant_rhs(plant: OdePlant, y, w, u: float, d, theta, delta):
    """``(ydot, wdot)`` of the matched system with measured ``y``, unmeasured ``w``."""
    b = plant.bundle
    y, w = np.atleast_1d(np.asarray(y, float)), np.atleast_1d(np.asarray(w, float))
    d, theta, delta = (np.atleast_1d(np.asarray(v, float)) for v in (d, theta, delta))
    for label, vec, dim in (("y", y, b.n), ("w", w, b.l), ("d", d, b.m), ("theta", theta, b.p_dim), ("delta", delta, b.q)):
        if vec.size != dim:
            raise ConfigurationError(f"{label} has dimension {vec.size}, bundle expects {dim}")
    drive = u + float(np.dot(b.phi_full(y, w), theta)) + float(np.dot(b.A_full(y, w), d))
    ydot = np.asarray(b.f(y), float) + np.asarray(b.g(y), float) * drive
    wdot = np.asarray(b.h(y, w, delta), float)
    return ydot, wdot


# worked example: ydot = u + theta w^2, wdot = -(w^2 - 1 - y^2) w


@njit(cache=True)
def _we_f(y):
    return np.zeros_like(y)


@njit(cache=True)
def _we_g(y):
    return np.ones_like(y)


@njit(cache=True)
def _we_k(y):
    return -y[0] - y[0] ** 3


@njit(cache=True)
def _we_V(y):
    return 0.5 * y[0] ** 2


@njit(cache=True)
def _we_gradV(y):
    return y.copy()


@njit(cache=True)
def _we_Q(y):
    return y[0] ** 2 + y[0] ** 4


@njit(cache=True)
def _we_mu(y):
    return 2.0


@njit(cache=True)
def _we_Phi(w):
    return 0.5 * w[0] ** 2


@njit(cache=True)
def _we_gradPhi(w):
    return w.copy()


@njit(cache=True)
def _we_R(w):
    return 0.5 * w[0] ** 4


@njit(cache=True)
def _we_zero1(y):
    return np.zeros(1)


@njit(cache=True)
def _we_phi_full(y, w):
    return np.array([w[0] ** 2])


@njit(cache=True)
def _we_A_full(y, w):
    return np.zeros(1)


@njit(cache=True)
def _we_h(y, w, delta):
    return np.array([-(w[0] ** 2 - 1.0 - y[0] ** 2) * w[0]])


@functools.cache
def worked_example_bundle() -> CertificateBundle:
    """Scalar example with the spurious equilibria ``w = +-1`` at ``y = 0``.

    The d- and delta-channels exist (``m = q = 1``) but are inert:
    ``A == 0`` and ``h`` ignores ``delta``; ``gamma == 1`` absorbs the rest.
    """
    return CertificateBundle(
        n=1,
        l=1,
        m=1,
        p_dim=1,
        q=1,
        V=_we_V,
        gradV=_we_gradV,
        k=_we_k,
        mu=_we_mu,
        Q=_we_Q,
        Phi=_we_Phi,
        R=_we_R,
        gradPhi=_we_gradPhi,
        gamma=constant(1.0),
        r=1.0,
        Lambda=0.0,
        f=_we_f,
        g=_we_g,
        phi0=_we_zero1,
        A0=_we_zero1,
        phi_full=_we_phi_full,
        A_full=_we_A_full,
        h=_we_h,
        name="worked-example",
    )


# -- finite-dimensional analog of the diffusion loop ------------------------


@dataclass(frozen=True)
class AnalogPlant:
    """Scalar stand-in for the diffusion loop: ``w' = -p pi^2 w + theta1 y``."""

    p: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise ConfigurationError("diffusion coefficient p must be positive")


def finite_dim_analog_rhs(p: float, y: float, w: float, u: float, d: float, theta):
    if not p > 0:
        raise DomainError("p must be positive")
    th1, th2 = (float(v) for v in np.asarray(theta, float).reshape(2))
    ydot = u + th2 * w + d
    wdot = -p * math.pi**2 * w + th1 * y
    return ydot, wdot


# -- reaction-diffusion plant -----------------------------------------------


def _default_psi(n_interior: int) -> np.ndarray:
    x = grid_points(n_interior)
    psi = x * (1.0 - x) * (1.0 + x)
    return psi / l2_norm(psi)


@dataclass(frozen=True)
class PdePlant:
    """Reaction-diffusion plant on a uniform grid with ``N`` interior points.

    ``K_choice``: ``paper-unstable`` is ``(x^2 - x - 2p)/(1 + 2p) y``,
    ``linear-saturating`` is ``K_scale x y / (1 + y^2)``.
    ``L_choice``: ``paper-integral`` is ``-int_0^1 w``,
    ``norm-bounded-projection`` is ``<w, psi>`` with a fixed unit-norm ``psi``.
    """

    p: float = 1.0
    K_choice: str = "paper-unstable"
    L_choice: str = "paper-integral"
    n_interior: int = 64
    K_scale: float = 1.0

    def __post_init__(self):
        if not self.p > 0:
            raise ConfigurationError("diffusion coefficient p must be positive")
        if self.K_choice not in K_CHOICES:
            raise ConfigurationError(f"K_choice must be one of {K_CHOICES}, got {self.K_choice!r}")
        if self.L_choice not in L_CHOICES:
            raise ConfigurationError(f"L_choice must be one of {L_CHOICES}, got {self.L_choice!r}")
        if int(self.n_interior) != self.n_interior or self.n_interior < 2:
            raise ConfigurationError("n_interior must be an integer >= 2")
        if not 0 <= self.K_scale <= 1:
            raise ConfigurationError("K_scale must lie in [0, 1] so that |K(x, y)| <= |y|")

    @property
    def dx(self) -> float:
        return 1.0 / (self.n_interior + 1)

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n_interior)

    @functools.cached_property
    def psi(self) -> np.ndarray:
        return _default_psi(self.n_interior)

    def K(self, x, y):
        code = _kernels.K_CODES[self.K_choice]
        x = np.asarray(x, float)
        if code == 1:
            return (x * x - x - 2 * self.p) / (1 + 2 * self.p) * y
        if code == 2:
            return self.K_scale * x * y / (1 + y * y)
        return np.zeros_like(x * y)

    def L(self, w) -> float:
        v = w.values if isinstance(w, GridFunction) else np.asarray(w, float)
        return float(_kernels.l_value(_kernels.L_CODES[self.L_choice], v, self.psi, self.dx))

    def kernel_args(self):
        return (
            _kernels.MODE_PDE,
            float(self.p),
            self.dx,
            _kernels.K_CODES[self.K_choice],
            float(self.K_scale),
            _kernels.L_CODES[self.L_choice],
            self.psi,
        )


def pde_rhs(plant: PdePlant, w: GridFunction, y: float, u: float, d: float, theta):
    """``(wdot, ydot)`` of the semi-discretized plant."""
    if w.n_interior != plant.n_interior:
        raise ConfigurationError(f"grid function has {w.n_interior} points, plant expects {plant.n_interior}")
    th1, th2 = (float(v) for v in np.asarray(theta, float).reshape(2))
    out = np.empty(plant.n_interior)
    ydot = _kernels.pde_rhs_core(
        w.values,
        float(y),
        float(u),
        float(d),
        th1,
        th2,
        float(plant.p),
        plant.dx,
        _kernels.K_CODES[plant.K_choice],
        float(plant.K_scale),
        _kernels.L_CODES[plant.L_choice],
        plant.psi,
        out,
    )
    return GridFunction(out), float(ydot)


def cfl_limit(p: float, n_interior: int, cfl_safety: float = 0.5) -> float:
    """Largest admissible explicit step for the diffusion term."""
    dx = 1.0 / (n_interior + 1)
    return cfl_safety * dx * dx / (2.0 * p)


# -- explicit exponentially growing open-loop solution -----------------------


def explicit_solution_theta(p: float, theta2: float) -> tuple[float, float]:
    """Parameter pair ``(theta1, theta2)`` with ``theta1 theta2 = 6 (1 + 2p)``."""
    if theta2 == 0:
        raise DomainError("theta2 must be nonzero")
    return 6.0 * (1.0 + 2.0 * p) / theta2, float(theta2)


def explicit_unstable_solution(t: float, p: float, theta2: float, n_interior: int):
    """``y = theta2/6 e^t``, ``w = e^t x (x - 1)`` sampled on the grid.

    Solves the open-loop plant with the paper-unstable ``K``, the
    paper-integral ``L``, ``d = 0`` and ``theta1`` from
    :func:`explicit_solution_theta`.
    """
    if theta2 == 0:
        raise DomainError("theta2 must be nonzero")
    if not p > 0:
        raise DomainError("p must be positive")
    growth = math.exp(t)
    x = grid_points(n_interior)
    return theta2 / 6.0 * growth, GridFunction(growth * x * (x - 1.0))
