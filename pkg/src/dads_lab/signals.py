"""Deterministic exogenous inputs with exactly known sup-norms.

Every disturbance ``d``, parameter ``theta`` and wrench ``delta`` fed to a
simulation is a :class:`SignalSpec`: an immutable member of a small
parametric family whose essential supremum follows from the parameters
alone. Bound formulas then use :func:`signal_sup_norm` instead of a sampled
estimate.

Flat parameter layout (the ``params`` list of scenario files), per kind,
with ``D = dim``:

* ``zero``                 -- empty
* ``constant``             -- ``v_1 .. v_D``
* ``sinusoid-sum``         -- repeated ``a_1 .. a_D, freq, phase`` per term
* ``piecewise-constant``   -- ``v0_1 .. v0_D`` then repeated ``t_k, vk_1 .. vk_D``
* ``decaying-exponential`` -- ``a_1 .. a_D, rate``
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

KINDS = ("zero", "constant", "sinusoid-sum", "piecewise-constant", "decaying-exponential")
KIND_CODES = {kind: code for code, kind in enumerate(KINDS)}

Row = tuple[float, ...]


def _row(values, dim: int) -> Row:
    row = tuple(float(v) for v in np.ravel(np.asarray(values, dtype=float)))
    if len(row) != dim:
        raise ConfigurationError(f"expected {dim} components, got {len(row)}")
    if not all(math.isfinite(v) for v in row):
        raise ConfigurationError("signal parameters must be finite")
    return row


@dataclass(frozen=True)
class SignalSpec:
    """Immutable description of a bounded input signal.

    ``amplitudes`` holds one row per sinusoid term, per constant piece, or the
    single amplitude/value row of the constant and exponential kinds.
    """

    kind: str
    dim: int
    amplitudes: tuple[Row, ...] = ()
    frequencies: Row = ()
    phases: Row = ()
    breakpoints: Row = ()
    rate: float = 0.0
    seed: int | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise ConfigurationError(f"unsupported signal kind {self.kind!r}; expected one of {KINDS}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ConfigurationError(f"signal dim must be a positive integer, got {self.dim!r}")
        for row in self.amplitudes:
            if len(row) != self.dim:
                raise ConfigurationError("amplitude rows must have length dim")
        rows = len(self.amplitudes)
        if self.kind == "zero" and rows:
            raise ConfigurationError("zero signal takes no parameters")
        if self.kind in ("constant", "decaying-exponential") and rows != 1:
            raise ConfigurationError(f"{self.kind} signal needs exactly one amplitude row")
        if self.kind == "sinusoid-sum":
            if not (len(self.frequencies) == len(self.phases) == rows):
                raise ConfigurationError("sinusoid-sum needs one frequency and phase per term")
        if self.kind == "piecewise-constant":
            if rows != len(self.breakpoints) + 1:
                raise ConfigurationError("piecewise-constant needs one more value row than breakpoints")
            if any(b1 <= b0 for b0, b1 in zip(self.breakpoints, self.breakpoints[1:])):
                raise ConfigurationError("breakpoints must be strictly increasing")
            if self.breakpoints and self.breakpoints[0] <= 0.0:
                raise ConfigurationError("breakpoints must be positive")
        if self.kind == "decaying-exponential" and not self.rate > 0.0:
            raise ConfigurationError("decaying-exponential rate must be positive")

    @property
    def sup_norm(self) -> float:
        return signal_sup_norm(self)

    @property
    def params(self) -> list[float]:
        """Flat parameter list in the layout documented at module level."""
        out: list[float] = []
        if self.kind in ("constant",):
            out.extend(self.amplitudes[0])
        elif self.kind == "sinusoid-sum":
            for row, freq, phase in zip(self.amplitudes, self.frequencies, self.phases):
                out.extend(row)
                out.extend((freq, phase))
        elif self.kind == "piecewise-constant":
            out.extend(self.amplitudes[0])
            for brk, row in zip(self.breakpoints, self.amplitudes[1:]):
                out.append(brk)
                out.extend(row)
        elif self.kind == "decaying-exponential":
            out.extend(self.amplitudes[0])
            out.append(self.rate)
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "params": self.params, "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def is_constant(self) -> bool:
        return self.kind in ("zero", "constant")

    def vanishes_at_infinity(self) -> bool:
        return self.kind in ("zero", "decaying-exponential")


# -- constructors -----------------------------------------------------------


def zero_signal(dim: int = 1) -> SignalSpec:
    return SignalSpec("zero", int(dim))


def constant_signal(value) -> SignalSpec:
    value = np.atleast_1d(np.asarray(value, dtype=float))
    return SignalSpec("constant", value.size, (_row(value, value.size),))


def sinusoid_sum(amplitudes, frequencies, phases=None) -> SignalSpec:
    """Sum of ``a_j sin(freq_j t + phase_j)``; ``amplitudes`` is (terms,) or (terms, dim)."""
    amps = np.asarray(amplitudes, dtype=float)
    if amps.ndim == 1:
        amps = amps[:, None]
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    phases = np.zeros_like(freqs) if phases is None else np.atleast_1d(np.asarray(phases, dtype=float))
    dim = amps.shape[1]
    return SignalSpec(
        "sinusoid-sum",
        dim,
        tuple(_row(r, dim) for r in amps),
        tuple(float(f) for f in freqs),
        tuple(float(p) for p in phases),
    )


def piecewise_constant(breakpoints, values) -> SignalSpec:
    vals = np.asarray(values, dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    dim = vals.shape[1]
    return SignalSpec(
        "piecewise-constant",
        dim,
        tuple(_row(r, dim) for r in vals),
        breakpoints=tuple(float(b) for b in np.atleast_1d(breakpoints)),
    )


def decaying_exponential(amplitude, rate: float) -> SignalSpec:
    amp = np.atleast_1d(np.asarray(amplitude, dtype=float))
    return SignalSpec("decaying-exponential", amp.size, (_row(amp, amp.size),), rate=float(rate))


def from_params(kind: str, dim: int, params=(), seed: int | None = None) -> SignalSpec:
    """Build a spec from the flat ``params`` layout used in scenario files."""
    if kind not in KIND_CODES:
        raise ConfigurationError(f"unsupported signal kind {kind!r}")
    dim = int(dim)
    vals = [float(v) for v in params]
    if kind == "zero":
        if vals:
            raise ConfigurationError("zero signal takes no params")
        return SignalSpec("zero", dim, seed=seed)
    if kind == "constant":
        return SignalSpec("constant", dim, (_row(vals, dim),), seed=seed)
    if kind == "decaying-exponential":
        if len(vals) != dim + 1:
            raise ConfigurationError(f"decaying-exponential expects {dim + 1} params")
        return SignalSpec(kind, dim, (_row(vals[:dim], dim),), rate=vals[dim], seed=seed)
    if kind == "sinusoid-sum":
        width = dim + 2
        if not vals or len(vals) % width:
            raise ConfigurationError(f"sinusoid-sum params come in groups of {width}")
        terms = [vals[i : i + width] for i in range(0, len(vals), width)]
        return SignalSpec(
            kind,
            dim,
            tuple(_row(t[:dim], dim) for t in terms),
            tuple(t[dim] for t in terms),
            tuple(t[dim + 1] for t in terms),
            seed=seed,
        )
    # piecewise-constant
    if len(vals) < dim or (len(vals) - dim) % (dim + 1):
        raise ConfigurationError("piecewise-constant params: v0 then groups of (t_k, v_k)")
    rows = [_row(vals[:dim], dim)]
    breaks = []
    for i in range(dim, len(vals), dim + 1):
        breaks.append(vals[i])
        rows.append(_row(vals[i + 1 : i + 1 + dim], dim))
    return SignalSpec(kind, dim, tuple(rows), breakpoints=tuple(breaks), seed=seed)


# -- evaluation -------------------------------------------------------------


def eval_signal(spec: SignalSpec, t: float) -> np.ndarray:
    """Value of the signal at time ``t >= 0``."""
    t = float(t)
    if not t >= 0.0:
        raise DomainError(f"signals are defined for t >= 0, got t={t}")
    if spec.kind == "zero":
        return np.zeros(spec.dim)
    if spec.kind == "constant":
        return np.array(spec.amplitudes[0])
    if spec.kind == "decaying-exponential":
        return np.array(spec.amplitudes[0]) * math.exp(-spec.rate * t)
    if spec.kind == "piecewise-constant":
        # right-continuous: at a breakpoint the new value already holds
        return np.array(spec.amplitudes[bisect.bisect_right(spec.breakpoints, t)])
    out = np.zeros(spec.dim)
    for row, freq, phase in zip(spec.amplitudes, spec.frequencies, spec.phases):
        out += np.array(row) * math.sin(freq * t + phase)
    return out


def signal_sup_norm(spec: SignalSpec) -> float:
    """Essential sup of ``|eval_signal(spec, t)|`` over ``t >= 0``.

    Exact for every kind except sinusoid sums with non-aligned terms, where
    the sum of term amplitudes is the (attainable in the aligned case) upper
    bound.
    """
    if spec.kind == "zero":
        return 0.0
    norms = [math.sqrt(sum(v * v for v in row)) for row in spec.amplitudes]
    if spec.kind == "sinusoid-sum":
        return math.fsum(norms)
    return max(norms)


def sample_signal(spec: SignalSpec, times) -> np.ndarray:
    """Evaluate at each time in ``times``; returns shape (len(times), dim)."""
    return np.array([eval_signal(spec, t) for t in np.asarray(times, dtype=float)]).reshape(-1, spec.dim)


# -- randomized constructors -----------------------------------------------


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    n = np.linalg.norm(v)
    return v / n if n > 0 else np.eye(dim)[0]


def make_seeded_bounded(seed: int, dim: int, bound: float, kind: str) -> SignalSpec:
    """Random spec of the given kind with ``sup_norm <= bound``.

    Draws come from a Philox counter-based generator keyed by ``seed`` so the
    result depends on nothing but the arguments.
    """
    if kind not in KIND_CODES:
        raise ConfigurationError(f"unsupported signal kind {kind!r}")
    if not bound >= 0.0:
        raise DomainError("bound must be nonnegative")
    if dim < 1:
        raise DomainError("dim must be >= 1")
    seed = int(seed)
    if bound == 0.0 or kind == "zero":
        return SignalSpec("zero", dim, seed=seed)
    rng = np.random.Generator(np.random.Philox(seed & 0xFFFFFFFFFFFFFFFF))
    if kind == "constant":
        spec = SignalSpec(kind, dim, (_row(bound * rng.uniform(0.5, 1.0) * _unit(rng, dim), dim),), seed=seed)
    elif kind == "decaying-exponential":
        amp = bound * rng.uniform(0.5, 1.0) * _unit(rng, dim)
        spec = SignalSpec(kind, dim, (_row(amp, dim),), rate=float(rng.uniform(0.1, 2.0)), seed=seed)
    elif kind == "sinusoid-sum":
        n_terms = int(rng.integers(1, 4))
        weights = rng.dirichlet(np.ones(n_terms))
        rows = tuple(_row(bound * w * _unit(rng, dim), dim) for w in weights)
        spec = SignalSpec(
            kind,
            dim,
            rows,
            tuple(float(f) for f in rng.uniform(0.2, 3.0, n_terms)),
            tuple(float(p) for p in rng.uniform(0.0, 2 * math.pi, n_terms)),
            seed=seed,
        )
    else:
        n_breaks = int(rng.integers(1, 6))
        breaks = np.sort(rng.uniform(0.0, 50.0, n_breaks)) + 1e-3
        rows = tuple(_row(bound * rng.uniform(0.0, 1.0) * _unit(rng, dim), dim) for _ in range(n_breaks + 1))
        spec = SignalSpec(kind, dim, rows, breakpoints=tuple(float(b) for b in breaks), seed=seed)
    return _clip_to_bound(spec, bound)


def _clip_to_bound(spec: SignalSpec, bound: float) -> SignalSpec:
    # rounding in the unit vectors can push the norm a few ulps past bound
    s = signal_sup_norm(spec)
    if s <= bound:
        return spec
    scale = bound / s * (1.0 - 1e-12)
    rows = tuple(tuple(v * scale for v in row) for row in spec.amplitudes)
    return SignalSpec(spec.kind, spec.dim, rows, spec.frequencies, spec.phases, spec.breakpoints, spec.rate, spec.seed)


def kernel_arrays(spec: SignalSpec):
    """Array encoding consumed by the compiled stepping kernels.

    Returns ``(kind_code, amps[rows, dim], freqs, phases, breaks)``; the
    decay rate of the exponential kind travels in ``freqs[0]``.
    """
    amps = np.array(spec.amplitudes, dtype=float).reshape(-1, spec.dim)
    if amps.shape[0] == 0:
        amps = np.zeros((1, spec.dim))
    if spec.kind == "decaying-exponential":
        freqs = np.array([spec.rate])
    else:
        freqs = np.array(spec.frequencies, dtype=float).reshape(-1)
    phases = np.array(spec.phases, dtype=float).reshape(-1)
    breaks = np.array(spec.breakpoints, dtype=float).reshape(-1)
    return (np.int64(KIND_CODES[spec.kind]), amps, freqs, phases, breaks)
