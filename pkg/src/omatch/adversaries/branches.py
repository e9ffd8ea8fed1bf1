"""Closed-form branch costs and the lower bounds they certify.

Values are computed from the branch algebra, never from gameplay, so that
``play_game`` results can be checked against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import UnknownScenario

SCENARIOS = ("omm2", "ofal3", "ofal4", "ofal5")


@dataclass(frozen=True)
class Branch:
    label: str
    alg_cost: float
    opt_cost: float

    @property
    def ratio(self) -> float:
        return self.alg_cost / self.opt_cost

    def as_tuple(self):
        return (self.label, self.alg_cost, self.opt_cost, self.ratio)


def lower_bound(scenario: str) -> float:
    r6, r73 = math.sqrt(6), math.sqrt(73)
    bounds = {"omm2": 3.0, "ofal3": 1 + r6, "ofal4": (4 + r73) / 3, "ofal5": 13 / 3}
    try:
        return bounds[scenario]
    except KeyError:
        raise UnknownScenario(f"unknown scenario {scenario!r}") from None


def enumerate_branches(scenario: str, d: float = 1.0) -> list[Branch]:
    """Every finite branch of `scenario`; `d` is the omm2 half-distance."""
    r6, r73 = math.sqrt(6), math.sqrt(73)
    if scenario == "omm2":
        return [Branch("case1", 3 * d, d)]
    if scenario == "ofal3":
        return [
            Branch("case1", 4 - r6, r6 - 2),
            Branch("case2-1", 8 - 2 * r6, 2 * r6 - 4),
            Branch("case2-2", 4 * r6 - 6, 6 - 2 * r6),
        ]
    if scenario == "ofal4":
        return [
            Branch("case1", (15 - r73) / 2, (r73 - 7) / 2),
            Branch("case2-1", (105 - 7 * r73) / 8, (7 * r73 - 49) / 8),
            Branch("case2-2", (15 * r73 - 73) / 8, (73 - 7 * r73) / 8),
        ]
    if scenario == "ofal5":
        return [
            Branch("case1", 39 / 8, 9 / 8),
            Branch("case2-1", 81 / 8, 17 / 8),
            Branch("case2-2", 65 / 8, 15 / 8),
        ]
    raise UnknownScenario(f"unknown scenario {scenario!r}")


def closed_form(scenario: str, label: str, d: float = 1.0) -> Branch | None:
    """Closed form for a played branch label; mirrored labels share their twin's."""
    base = label.removeprefix("mirror-")
    return next((b for b in enumerate_branches(scenario, d) if b.label == base), None)
