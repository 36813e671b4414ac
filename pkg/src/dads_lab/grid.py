"""Uniform Dirichlet grid on [0, 1] and the discrete norms used throughout.

Only interior samples ``x_i = i dx, i = 1..N, dx = 1/(N+1)`` are stored; the
boundary values are zero by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class GridFunction:
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.size < 2:
            raise ConfigurationError("a grid function needs at least 2 interior points")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n_interior(self) -> int:
        return self.values.size

    @property
    def dx(self) -> float:
        return 1.0 / (self.n_interior + 1)

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n_interior)

    @classmethod
    def zeros(cls, n_interior: int) -> "GridFunction":
        return cls(np.zeros(n_interior))

    @classmethod
    def from_function(cls, fn, n_interior: int) -> "GridFunction":
        return cls(fn(grid_points(n_interior)))

    def padded(self) -> np.ndarray:
        """Samples including the two zero boundary values."""
        return np.concatenate(([0.0], self.values, [0.0]))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __mul__(self, other):
        return GridFunction(self.values * other)

    __rmul__ = __mul__


def grid_points(n_interior: int) -> np.ndarray:
    return np.arange(1, n_interior + 1) / (n_interior + 1)


def _vals(w) -> np.ndarray:
    return w.values if isinstance(w, GridFunction) else np.asarray(w, dtype=float)


def integral(w) -> float:
    """Composite trapezoid of ``w`` over [0, 1] (boundary samples are zero)."""
    v = _vals(w)
    return float(np.sum(v)) / (v.size + 1)


def inner(u, w) -> float:
    u, w = _vals(u), _vals(w)
    return float(np.dot(u, w)) / (u.size + 1)


def l2_norm(w) -> float:
    """Trapezoid approximation of the L2(0, 1) norm."""
    v = _vals(w)
    return math.sqrt(float(np.dot(v, v)) / (v.size + 1))


def dirichlet_energy(w) -> float:
    """Discrete ``||w_x||^2`` from forward differences, boundary gaps included."""
    v = _vals(w)
    dx = 1.0 / (v.size + 1)
    diffs = np.diff(np.concatenate(([0.0], v, [0.0])))
    return float(np.dot(diffs, diffs)) / dx


def laplacian(w) -> np.ndarray:
    """Second-order central difference of ``w`` with zero boundary values."""
    v = _vals(w)
    dx = 1.0 / (v.size + 1)
    padded = np.concatenate(([0.0], v, [0.0]))
    return (padded[:-2] - 2.0 * v + padded[2:]) / dx**2


def first_dirichlet_eigenvalue(n_interior: int) -> float:
    """Smallest eigenvalue of the discrete ``-d^2/dx^2``; tends to pi^2 from below."""
    dx = 1.0 / (n_interior + 1)
    return 2.0 / dx**2 * (1.0 - math.cos(math.pi * dx))
