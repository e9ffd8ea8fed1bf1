"""Two-server adversary forcing ratio 3 on any deterministic algorithm."""

from __future__ import annotations

from ..errors import PreconditionError
from .base import Adversary


class OMM2Adversary(Adversary):
    """Fill both servers up to one free slot, probe the midpoint, then
    request at the server the algorithm just used."""

    scenario = "omm2"

    def __init__(self, inst):
        super().__init__(inst)
        if inst.k != 2:
            raise PreconditionError("omm2 adversary needs exactly two servers")
        if min(inst.capacities) < 1:
            raise PreconditionError("omm2 adversary needs both capacities >= 1")
        self.constants = {"d": abs(self.pos[1] - self.pos[0]) / 2}

    def script(self):
        if (yield from self.prefix()):
            yield from self.punish([self.at(0), self.at(1)])
            return
        self.phase = "probe-1"
        mid = (self.pos[0] + self.pos[1]) / 2
        got = yield mid
        # the server taken becomes s1
        self.mirror = got == 1
        self.branch = "case1"
        self.phase = "finish"
        yield self.at(0)
