"""Deadzone-adapted disturbance suppression feedback laws.

The scalar cores (``general_law``, ``pde_law``, ``gain_rate``) are compiled
with numba so the stepping kernels and the Python-facing functions share one
implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .certificates import CertificateBundle, DadsParams
from .errors import GainOverflowError

Z_MAX = 50.0


@dataclass(frozen=True)
class ControllerState:
    z: float
    params: DadsParams


@njit(cache=True)
def general_law(kval, gvg, mu, a0sq, phi0sq, z, a, beta, b, C):
    gain = (b + math.exp(z)) ** 3 / (a**3 * beta**2)
    return kval - C * mu * mu * gain * gvg**3 - C * (a0sq + phi0sq + mu + 1.0) * gain * gvg


@njit(cache=True)
def pde_law(c, a, b, y, z):
    return -c * (1.0 + (b + math.exp(z)) ** 7 / (4.0 * a**6)) * (y**7 + y**3 + y)


@njit(cache=True)
def pde_law_slopes(c, a, b, y, z):
    """Partial derivatives of ``pde_law`` in ``y`` and ``z`` (stiffness estimates)."""
    e = math.exp(z)
    gain = 1.0 + (b + e) ** 7 / (4.0 * a**6)
    du_dy = -c * gain * (7.0 * y**6 + 3.0 * y**2 + 1.0)
    du_dz = -c * 7.0 * (b + e) ** 6 * e / (4.0 * a**6) * (y**7 + y**3 + y)
    return du_dy, du_dz


@njit(cache=True)
def gain_rate(Gamma, V, epsilon, z):
    excess = V - epsilon
    if excess <= 0.0:
        return 0.0
    return Gamma * math.exp(-z) * excess


def _guard(z: float, z_max: float):
    if not math.isfinite(z) or z > z_max:
        raise GainOverflowError(
            f"dynamic gain z={z} exceeds z_max={z_max}; the gain should stay bounded "
            "(z0 <= z(t) <= finite limit), check the 2aβ < br constraint and the scenario"
        )


def dads_control(bundle: CertificateBundle, params: DadsParams, y, z: float, z_max: float = Z_MAX) -> float:
    """Control value of the general partial-state law at ``(y, z)``."""
    _guard(z, z_max)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    gvg = float(np.dot(bundle.gradV(y), bundle.g(y)))
    a0 = np.asarray(bundle.A0(y), dtype=float)
    phi0 = np.asarray(bundle.phi0(y), dtype=float)
    return float(
        general_law(
            float(bundle.k(y)),
            gvg,
            float(bundle.mu(y)),
            float(np.dot(a0, a0)),
            float(np.dot(phi0, phi0)),
            float(z),
            params.a,
            params.beta,
            params.b,
            params.C,
        )
    )


def deadzone_rate(params, V_of_y: float, z: float) -> float:
    """``Gamma exp(-z) (V - eps)^+``; exactly zero inside the deadzone."""
    return float(gain_rate(params.Gamma, float(V_of_y), params.epsilon, float(z)))


def pde_dads_control(c: float, a: float, b: float, y: float, z: float, z_max: float = Z_MAX) -> float:
    """Control value of the reaction-diffusion law (odd in ``y``)."""
    _guard(z, z_max)
    return float(pde_law(float(c), float(a), float(b), float(y), float(z)))
