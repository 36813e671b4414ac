"""Closed parametric family of scalar comparison functions.

Gains such as ``gamma`` in the certificate inequalities and the decay rate
``rho`` of the comparison lemma are drawn from this family so that
monotonicity and class-K / K-infinity membership are decidable from the
parameters, and inverses are available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import ConfigurationError, ContractError, DomainError

FAMILIES = ("power", "affine-power", "saturating", "constant", "sum-of-powers")


@dataclass(frozen=True)
class ScalarClassFunction:
    """``s -> value`` on ``[0, inf)`` from one of five families.

    ================  ====================  ==========================
    family            params                value
    ================  ====================  ==========================
    power             (coeff, exp)          coeff * s**exp
    affine-power      (c0, c1, exp)         c0 + c1 * s**exp
    saturating        (c,)                  c * s / (1 + s)
    constant          (c,)                  c
    sum-of-powers     (c1, e1, c2, e2 ...)  sum c_i * s**e_i
    ================  ====================  ==========================
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown comparison-function family {self.family!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        expected = {"power": 2, "affine-power": 3, "saturating": 1, "constant": 1}
        n = len(self.params)
        if self.family in expected and n != expected[self.family]:
            raise ConfigurationError(f"{self.family} takes {expected[self.family]} params, got {n}")
        if self.family == "sum-of-powers" and (n == 0 or n % 2):
            raise ConfigurationError("sum-of-powers takes (coeff, exp) pairs")
        if any(c < 0 for c in self._coefficients()):
            raise ConfigurationError("coefficients must be nonnegative")
        if any(e <= 0 for e in self._exponents()):
            raise ConfigurationError("exponents must be positive")

    def _coefficients(self):
        p = self.params
        if self.family == "power":
            return (p[0],)
        if self.family == "affine-power":
            return (p[0], p[1])
        if self.family == "sum-of-powers":
            return p[0::2]
        return (p[0],)

    def _exponents(self):
        p = self.params
        if self.family == "power":
            return (p[1],)
        if self.family == "affine-power":
            return (p[2],)
        if self.family == "sum-of-powers":
            return p[1::2]
        return ()

    def __call__(self, s):
        if isinstance(s, (float, int)):
            return self._scalar(float(s))
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < 0):
            raise DomainError("comparison functions are defined on [0, inf)")
        p = self.params
        if self.family == "power":
            out = p[0] * s_arr ** p[1]
        elif self.family == "affine-power":
            out = p[0] + p[1] * s_arr ** p[2]
        elif self.family == "saturating":
            out = p[0] * s_arr / (1.0 + s_arr)
        elif self.family == "constant":
            out = np.full_like(s_arr, p[0])
        else:
            out = np.zeros_like(s_arr)
            for c, e in zip(p[0::2], p[1::2]):
                out = out + c * s_arr**e
        return float(out) if out.ndim == 0 else out

    def _scalar(self, s: float) -> float:
        # plain-float path used inside scalar minimisation and bisection loops
        if s < 0:
            raise DomainError("comparison functions are defined on [0, inf)")
        p = self.params
        if self.family == "power":
            return p[0] * s ** p[1]
        if self.family == "affine-power":
            return p[0] + p[1] * s ** p[2]
        if self.family == "saturating":
            return p[0] * s / (1.0 + s)
        if self.family == "constant":
            return p[0]
        return sum(c * s**e for c, e in zip(p[0::2], p[1::2]))

    @property
    def is_nondecreasing(self) -> bool:
        return True  # every family with nonnegative coefficients is

    @property
    def is_K(self) -> bool:
        p = self.params
        if self.family == "power":
            return p[0] > 0
        if self.family == "affine-power":
            return p[0] == 0 and p[1] > 0
        if self.family == "saturating":
            return p[0] > 0
        if self.family == "sum-of-powers":
            return any(c > 0 for c in p[0::2])
        return False

    @property
    def is_Kinfinity(self) -> bool:
        return self.is_K and self.family != "saturating"

    @property
    def supremum(self) -> float:
        p = self.params
        if self.family in ("saturating", "constant"):
            return p[0]
        if self.family == "affine-power":
            return float("inf") if p[1] > 0 else p[0]
        return float("inf") if self.is_K else 0.0

    def inverse(self, value: float) -> float:
        """Preimage of ``value`` by bisection, to 1e-12 relative tolerance.

        The bracket starts at [0, 1] and its upper end is doubled until it
        covers ``value``.
        """
        if not self.is_K:
            raise ContractError(f"{self.family} function with params {self.params} is not of class K")
        value = float(value)
        if value < 0:
            raise DomainError("inverse is defined on [0, sup)")
        if value == 0.0:
            return 0.0
        if value >= self.supremum:
            raise DomainError(f"{value} is outside the range of the function (sup {self.supremum})")
        hi = 1.0
        while self(hi) < value:
            hi *= 2.0
        return bisect(lambda s: self(s) - value, 0.0, hi, xtol=1e-300, rtol=1e-12, maxiter=2000)

    def validation_failures(self, threshold: float = 1e6, grid=None) -> list[str]:
        """Check the declared flags against sampled behaviour."""
        grid = np.geomspace(1e-6, 1e6, 400) if grid is None else np.asarray(grid, dtype=float)
        vals = np.asarray(self(grid))
        failures = []
        if np.any(np.diff(vals) < 0):
            failures.append("not non-decreasing on the test grid")
        if self.is_K:
            if self(0.0) != 0.0:
                failures.append("class K but nonzero at 0")
            if np.any(np.diff(vals) <= 0):
                failures.append("class K but not strictly increasing on the test grid")
        if self.is_Kinfinity and not self(1e9) > threshold:
            failures.append(f"class K-infinity but value at 1e9 does not exceed {threshold}")
        return failures

    def to_dict(self) -> dict:
        return {"family": self.family, "params": list(self.params)}


def power(coeff: float, exp: float) -> ScalarClassFunction:
    return ScalarClassFunction("power", (coeff, exp))


def affine_power(c0: float, c1: float, exp: float) -> ScalarClassFunction:
    return ScalarClassFunction("affine-power", (c0, c1, exp))


def saturating(c: float) -> ScalarClassFunction:
    return ScalarClassFunction("saturating", (c,))


def constant(c: float) -> ScalarClassFunction:
    return ScalarClassFunction("constant", (c,))


def sum_of_powers(terms) -> ScalarClassFunction:
    flat = []
    for c, e in terms:
        flat.extend((c, e))
    return ScalarClassFunction("sum-of-powers", tuple(flat))
