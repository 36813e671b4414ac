"""Flat dotted-key scenario files.

One ``key = value`` per line, ``#`` starts a comment. Lists are written as
comma- or space-separated numbers. Example::

    name = worked-example
    plant.type = worked-example
    controller.epsilon = 0.1
    theta.kind = constant
    theta.params = 5
    integrator.dt = 1e-3
"""

from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

from ..errors import ConfigurationError
from ..scenario import (
    ControllerConfig,
    InitialState,
    PlantConfig,
    Scenario,
    StepControl,
    VerifyConfig,
)
from ..signals import SignalSpec, from_params, make_seeded_bounded
from .polynomial import polynomial_bundle

_SIGNAL_FIELDS = ("kind", "dim", "params", "seed", "bound")
_TOP = ("name", "seed")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{source}:{lineno}: empty key")
        if key in entries:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def load_config(path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, str(path))


# -- typed conversions -------------------------------------------------------


def _num(key: str, value: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ConfigurationError(f"{key}: expected a number, got {value!r}") from None
    if math.isnan(out):
        raise ConfigurationError(f"{key}: NaN is not allowed")
    return out


def _int(key: str, value: str) -> int:
    x = _num(key, value)
    if x != int(x):
        raise ConfigurationError(f"{key}: expected an integer, got {value!r}")
    return int(x)


def _bool(key: str, value: str) -> bool:
    low = value.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"{key}: expected a boolean, got {value!r}")


def _numbers(key: str, value: str) -> tuple[float, ...]:
    parts = value.replace(",", " ").split()
    return tuple(_num(key, p) for p in parts)


def _section(entries: dict, prefix: str) -> dict[str, str]:
    n = len(prefix) + 1
    return {k[n:]: v for k, v in entries.items() if k.startswith(prefix + ".")}


# -- builders ----------------------------------------------------------------

_PLANT_KEYS = {"type": str, "p": _num, "n_interior": _int, "K_choice": str, "L_choice": str, "K_scale": _num}
_CONTROLLER_KEYS = {
    "law": str, "epsilon": _num, "gamma_rate": _num, "a": _num, "beta": _num, "b": _num, "C": _num, "c": _num, "z0": _num,
}
_INTEGRATOR_KEYS = {
    "dt": _num, "t_end": _num, "sample_every": _int, "sample_dt": _num, "cfl_safety": _num, "blowup_guard": _num, "z_max": _num,
}


def _typed(section: dict, spec: dict, prefix: str) -> dict:
    out = {}
    for key, value in section.items():
        if key not in spec:
            raise ConfigurationError(f"unknown key {prefix}.{key}")
        conv = spec[key]
        out[key] = value if conv is str else conv(f"{prefix}.{key}", value)
    return out


def _signal(section: dict, prefix: str, default_dim: int) -> SignalSpec | None:
    if not section:
        return None
    for key in section:
        if key not in _SIGNAL_FIELDS:
            raise ConfigurationError(f"unknown key {prefix}.{key}")
    kind = section.get("kind", "zero")
    dim = _int(f"{prefix}.dim", section["dim"]) if "dim" in section else default_dim
    seed = _int(f"{prefix}.seed", section["seed"]) if "seed" in section else None
    if "bound" in section:
        if "params" in section:
            raise ConfigurationError(f"{prefix}: give either params or seed/bound, not both")
        return make_seeded_bounded(seed or 0, dim, _num(f"{prefix}.bound", section["bound"]), kind)
    params = _numbers(f"{prefix}.params", section.get("params", ""))
    return from_params(kind, dim, params, seed)


def _initial(section: dict) -> InitialState:
    out = {}
    for key, value in section.items():
        if key not in ("y", "w"):
            raise ConfigurationError(f"unknown key initial.{key}")
        low = value.strip().lower()
        out[key] = low if low in ("zero", "sin", "explicit") else _numbers(f"initial.{key}", value)
    return InitialState(**out)


def _verify(section: dict) -> VerifyConfig:
    fields = VerifyConfig.__dataclass_fields__
    out = {}
    for key, value in section.items():
        if key not in fields:
            raise ConfigurationError(f"unknown key verify.{key}")
        out[key] = _bool(f"verify.{key}", value) if fields[key].type == "bool" else _num(f"verify.{key}", value)
    return VerifyConfig(**out)


def scenario_from_config(entries: dict[str, str], name: str | None = None) -> Scenario:
    known = {"plant", "controller", "integrator", "initial", "verify", "bundle", "d", "theta", "delta"}
    for key in entries:
        head = key.split(".", 1)[0]
        if key not in _TOP and head not in known:
            raise ConfigurationError(f"unknown key {key!r}")

    plant_kw = _typed(_section(entries, "plant"), _PLANT_KEYS, "plant")
    bundle_entries = _section(entries, "bundle")
    ptype = plant_kw.get("type", "worked-example")
    if ptype == "polynomial":
        plant_kw["bundle"] = polynomial_bundle(bundle_entries, name=entries.get("name", "polynomial"))
    elif bundle_entries:
        raise ConfigurationError("bundle.* keys require plant.type = polynomial")
    plant = PlantConfig(**plant_kw)

    controller = ControllerConfig(**_typed(_section(entries, "controller"), _CONTROLLER_KEYS, "controller"))
    integ_raw = _section(entries, "integrator")
    auto_dt = integ_raw.get("dt", "").strip().lower() in ("cfl", "auto")
    if auto_dt:
        integ_raw = {k: v for k, v in integ_raw.items() if k != "dt"}
    integ_kw = _typed(integ_raw, _INTEGRATOR_KEYS, "integrator")
    if auto_dt:
        integ_kw["dt"] = None
    integrator = StepControl(**integ_kw)

    scenario = Scenario(
        name=name or entries.get("name", "scenario"),
        plant=plant,
        controller=controller,
        integrator=integrator,
        initial=_initial(_section(entries, "initial")),
        verify=_verify(_section(entries, "verify")),
        seed=_int("seed", entries["seed"]) if "seed" in entries else 0,
    )
    dims = scenario.dims
    signals = {}
    for key, dim_key in (("d", "m"), ("theta", "p"), ("delta", "q")):
        signals[key] = _signal(_section(entries, key), key, dims[dim_key])
    return replace(scenario, **signals)


def load_scenario(path) -> Scenario:
    path = Path(path)
    entries = load_config(path)
    return scenario_from_config(entries, name=entries.get("name", path.stem))
