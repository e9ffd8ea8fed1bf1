"""Line adversaries for three, four and five unit-spaced servers."""

from __future__ import annotations

import math

from ..errors import PreconditionError
from .base import Adversary


class _OFALAdversary(Adversary):
    k = 0

    def __init__(self, inst):
        super().__init__(inst)
        if inst.variant != "ofal" or inst.k != self.k:
            raise PreconditionError(f"{self.scenario} adversary needs an ofal instance with {self.k} servers")
        if min(inst.capacities) < 1:
            raise PreconditionError("capacity must be at least 1")

    def _opening(self):
        """Prefix phase; True if the game already ended in a punish branch."""
        if (yield from self.prefix()):
            yield from self.punish([self.at(i) for i in range(self.k)])
            return True
        return False


class OFAL3Adversary(_OFALAdversary):
    scenario = "ofal3"
    k = 3

    def __init__(self, inst):
        super().__init__(inst)
        r6 = math.sqrt(6)
        self.constants = {"x": r6 - 2, "y": 3 * r6 - 7}

    def script(self):
        if (yield from self._opening()):
            return
        x, y = self.constants["x"], self.constants["y"]
        self.phase = "probe-1"
        q = self.at(1, x)
        got = yield q
        if self.side(got, q) == "R":
            self.branch, self.phase = "case1", "finish"
            yield self.at(2)
            yield self.at(0)
            return
        self.branch, self.phase = "case2", "probe-2"
        q = self.at(1, -y)
        got = yield q
        self.phase = "finish"
        if self.side(got, q) == "L":
            self.branch = "case2-1"
            yield self.at(0)
        else:
            self.branch = "case2-2"
            yield self.at(2)


class OFAL4Adversary(_OFALAdversary):
    scenario = "ofal4"
    k = 4

    def __init__(self, inst):
        super().__init__(inst)
        r73 = math.sqrt(73)
        self.constants = {"x": (10 - r73) / 2, "y": (11 * r73 - 93) / 8}

    def script(self):
        if (yield from self._opening()):
            return
        x, y = self.constants["x"], self.constants["y"]
        self.phase = "probe-1"
        q = (self.at(1) + self.at(2)) / 2
        got = yield q
        # whichever side was taken becomes s2
        self.mirror = self.side(got, q) == "R"
        self.phase = "probe-2"
        q = self.at(0, x)
        got = yield q
        if self.side(got, q) == "L":
            self.branch, self.phase = "case1", "finish"
            yield self.at(0)
            yield self.at(3)
            return
        self.branch, self.phase = "case2", "probe-3"
        q = self.at(2, y)
        got = yield q
        self.phase = "finish"
        if self.side(got, q) == "R":
            self.branch = "case2-1"
            yield self.at(3)
        else:
            self.branch = "case2-2"
            yield self.at(0)


class OFAL5Adversary(_OFALAdversary):
    scenario = "ofal5"
    k = 5

    def __init__(self, inst):
        super().__init__(inst)
        self.constants = {"offset": 7 / 8}

    def script(self):
        if (yield from self._opening()):
            return
        self.phase = "probe-1"
        got = yield self.at(2)
        if got != 2:
            yield from self.punish([self.at(0), self.at(1), self.at(3), self.at(4)])
            return
        self.phase = "probe-2"
        got = yield self.at(2)
        self.mirror = self.side(got, self.at(2)) == "R"
        self.phase = "probe-3"
        q = self.at(0, self.constants["offset"])
        got = yield q
        if self.side(got, q) == "L":
            self.branch, self.phase = "case1", "finish"
            yield self.at(0)
            yield self.at(4)
            return
        self.branch, self.phase = "case2", "probe-4"
        q = self.at(3)
        got = yield q
        self.phase = "finish"
        if self.side(got, q) == "L":
            self.branch = "case2-1"
            yield self.at(0)
        else:
            self.branch = "case2-2"
            yield self.at(4)
