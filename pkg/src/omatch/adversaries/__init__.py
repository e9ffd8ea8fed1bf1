"""Adaptive lower-bound adversaries and the game loop."""

from __future__ import annotations

from ..errors import UnknownScenario
from ..metric import Instance, ofal_instance, omm2_instance
from .base import PUNISH, Adversary, RatioReport, enumerate_game_tree, play_game
from .branches import SCENARIOS, Branch, closed_form, enumerate_branches, lower_bound
from .ofal import OFAL3Adversary, OFAL4Adversary, OFAL5Adversary
from .omm2 import OMM2Adversary

ADVERSARIES = {
    "omm2": OMM2Adversary,
    "ofal3": OFAL3Adversary,
    "ofal4": OFAL4Adversary,
    "ofal5": OFAL5Adversary,
}


def scenario_instance(scenario: str, capacity: int = 1, d: float = 1.0) -> Instance:
    """The instance an adversary plays on: servers at -d, +d for omm2, else 0..k-1."""
    if scenario == "omm2":
        return omm2_instance(-d, d, capacity, capacity)
    if scenario in ADVERSARIES:
        return ofal_instance(int(scenario[4:]), capacity)
    raise UnknownScenario(f"unknown scenario {scenario!r}")


def make_adversary(scenario: str, inst: Instance) -> Adversary:
    try:
        return ADVERSARIES[scenario](inst)
    except KeyError:
        raise UnknownScenario(f"unknown scenario {scenario!r}") from None


__all__ = [
    "ADVERSARIES",
    "PUNISH",
    "SCENARIOS",
    "Adversary",
    "Branch",
    "OFAL3Adversary",
    "OFAL4Adversary",
    "OFAL5Adversary",
    "OMM2Adversary",
    "RatioReport",
    "closed_form",
    "enumerate_branches",
    "enumerate_game_tree",
    "lower_bound",
    "make_adversary",
    "play_game",
    "scenario_instance",
]
