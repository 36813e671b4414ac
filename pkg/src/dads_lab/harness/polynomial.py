"""Certificate bundles written as polynomial expressions in a scenario file.

Variables are ``y1..yn``, ``w1..wl`` and ``delta1..deltaq``; when a dimension
is 1 the bare names ``y``, ``w``, ``delta`` work too. Vector-valued entries
separate components with ``;``. Gradients of ``V`` and ``Phi`` are derived
symbolically.
"""

from __future__ import annotations

import sympy as sp

import numpy as np

from ..certificates import CertificateBundle
from ..comparison import ScalarClassFunction
from ..errors import ConfigurationError

_DEFAULTS = {
    "f": "0",
    "g": "1",
    "k": "0",
    "mu": "1",
    "phi": "0",
    "A": "0",
    "h": "0",
}
_REQUIRED = ("V", "Q", "Phi", "R")


def _symbols(prefix: str, dim: int):
    syms = sp.symbols(f"{prefix}1:{dim + 1}")
    names = {str(s): s for s in syms}
    if dim == 1:
        names[prefix] = syms[0]
    return list(syms), names


def _parse(text: str, names: dict, key: str, allowed) -> sp.Expr:
    try:
        expr = sp.parse_expr(text, local_dict=dict(names), evaluate=True)
    except Exception as exc:
        raise ConfigurationError(f"bundle.{key}: cannot parse {text!r}: {exc}") from exc
    extra = expr.free_symbols - set(allowed)
    if extra:
        raise ConfigurationError(f"bundle.{key}: unknown symbols {sorted(map(str, extra))}")
    if not expr.is_polynomial(*allowed):
        raise ConfigurationError(f"bundle.{key}: {text!r} is not polynomial")
    return expr


def _vector(text: str, dim: int, names, key, allowed) -> list:
    parts = [p.strip() for p in str(text).split(";")]
    if len(parts) == 1 and dim > 1:
        parts = parts * dim
    if len(parts) != dim:
        raise ConfigurationError(f"bundle.{key} needs {dim} components, got {len(parts)}")
    return [_parse(p, names, key, allowed) for p in parts]


def _scalar_fn(expr, args):
    fn = sp.lambdify(args, expr, "math")
    return lambda *vs: float(fn(*np.concatenate([np.atleast_1d(np.asarray(v, float)) for v in vs])))


def _vector_fn(exprs, args):
    fn = sp.lambdify(args, exprs, "math")
    return lambda *vs: np.array(fn(*np.concatenate([np.atleast_1d(np.asarray(v, float)) for v in vs])), dtype=float)


def polynomial_bundle(entries: dict[str, str], name: str = "polynomial") -> CertificateBundle:
    """Build a bundle from ``bundle.*`` config entries (without the prefix)."""
    try:
        n = int(entries.get("n", 1))
        l = int(entries.get("l", 1))
        m = int(entries.get("m", 1))
        p_dim = int(entries.get("p", 1))
        q = int(entries.get("q", 1))
        r = float(entries.get("r", 1.0))
        lam = float(entries.get("Lambda", 0.0))
    except ValueError as exc:
        raise ConfigurationError(f"bundle dimensions/constants: {exc}") from exc
    if min(n, l, m, p_dim, q) < 1:
        raise ConfigurationError("bundle dimensions must be >= 1")
    if not r > 0 or lam < 0:
        raise ConfigurationError("bundle needs r > 0 and Lambda >= 0")
    missing = [k for k in _REQUIRED if k not in entries]
    if missing:
        raise ConfigurationError(f"polynomial bundle is missing {', '.join('bundle.' + k for k in missing)}")

    ys, yn = _symbols("y", n)
    ws, wn = _symbols("w", l)
    ds, dn = _symbols("delta", q)
    names = {**yn, **wn, **dn}
    get = lambda key: entries.get(key, _DEFAULTS.get(key))  # noqa: E731

    V = _parse(get("V"), names, "V", ys)
    Q = _parse(get("Q"), names, "Q", ys)
    k = _parse(get("k"), names, "k", ys)
    mu = _parse(get("mu"), names, "mu", ys)
    Phi = _parse(get("Phi"), names, "Phi", ws)
    R = _parse(get("R"), names, "R", ws)
    f = _vector(get("f"), n, names, "f", ys)
    g = _vector(get("g"), n, names, "g", ys)
    phi = _vector(get("phi"), p_dim, names, "phi", ys + ws)
    A = _vector(get("A"), m, names, "A", ys + ws)
    h = _vector(get("h"), l, names, "h", ys + ws + ds)
    at_w0 = {s: 0 for s in ws}

    family = entries.get("gamma.family", "constant")
    gparams = [float(v) for v in str(entries.get("gamma.params", "0")).replace(",", " ").split()]
    gamma = ScalarClassFunction(family, tuple(gparams))

    return CertificateBundle(
        n=n,
        l=l,
        m=m,
        p_dim=p_dim,
        q=q,
        V=_scalar_fn(V, ys),
        gradV=_vector_fn([sp.diff(V, s) for s in ys], ys),
        k=_scalar_fn(k, ys),
        mu=_scalar_fn(mu, ys),
        Q=_scalar_fn(Q, ys),
        Phi=_scalar_fn(Phi, ws),
        R=_scalar_fn(R, ws),
        gradPhi=_vector_fn([sp.diff(Phi, s) for s in ws], ws),
        gamma=gamma,
        r=r,
        Lambda=lam,
        f=_vector_fn(f, ys),
        g=_vector_fn(g, ys),
        phi0=_vector_fn([e.subs(at_w0) for e in phi], ys),
        A0=_vector_fn([e.subs(at_w0) for e in A], ys),
        phi_full=_vector_fn(phi, ys + ws),
        A_full=_vector_fn(A, ys + ws),
        h=_vector_fn(h, ys + ws + ds),
        name=name,
        meta={"expressions": {key: str(entries[key]) for key in sorted(entries)}},
    )
