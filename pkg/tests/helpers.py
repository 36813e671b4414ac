"""Scenario loading helpers shared by the test modules."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from dads_lab.harness import load_scenario

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


def scenario(name: str):
    return load_scenario(SCENARIOS / f"{name}.cfg")


def shortened(sc, t_end: float):
    """Same scenario with a shorter horizon, used to trigger compilation."""
    return replace(sc, integrator=replace(sc.integrator, t_end=t_end))
