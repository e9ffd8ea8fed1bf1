"""Adaptive adversary machinery and the game loop."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DesyncError, PreconditionError
from ..io import fmt_ratio
from ..metric import Instance, Point, validate
from ..offline import AssignmentPlan, optimal_assignment
from ..online import (
    GameTrace,
    OnlineAlgorithm,
    Scripted,
    ServerState,
    is_surrounding_oriented,
    play_step,
)
from ..reductions import ratio

PUNISH = "punish-infinite"


class Adversary:
    """Request generator whose next request depends on the algorithm's choices.

    Subclasses write ``script`` as a generator in the *paper frame*: it yields
    request positions and receives the (paper-frame) index of the server the
    algorithm picked. Setting ``self.mirror`` reflects every later position
    and server index about the middle of the server array, which is how a
    "without loss of generality, the algorithm went left" step is executed.

    ``next_request`` replays the whole history through a fresh script, so
    the output is a pure function of the history.
    """

    scenario = "abstract"

    def __init__(self, inst: Instance):
        report = validate(inst)
        if not report.ok:
            raise PreconditionError("; ".join(report.violations))
        if inst.metric.kind != "line":
            raise PreconditionError("adversaries play on the line metric")
        self.inst = inst
        self.pos = [float(p) for p in inst.positions]
        self.constants: dict[str, float] = {}
        self._reset()

    def _reset(self) -> None:
        self.phase = "prefix"
        self.branch = ""
        self.mirror = False
        self.done = False

    @property
    def branch_label(self) -> str:
        if not self.branch:
            return ""
        if self.branch == PUNISH:
            return PUNISH
        return ("mirror-" if self.mirror else "") + self.branch

    # frame conversions
    def at(self, i: int, offset: float = 0.0) -> float:
        return self.pos[i] + offset

    def _to_actual(self, q: float) -> float:
        return self.pos[0] + self.pos[-1] - q if self.mirror else q

    def _to_paper(self, s: int) -> int:
        return self.inst.k - 1 - s if self.mirror else s

    def side(self, server: int, request: float) -> str:
        """'L', 'R' or 'at': where the chosen server lies relative to the request."""
        p = self.pos[server]
        if p < request:
            return "L"
        if p > request:
            return "R"
        return "at"

    def prefix(self):
        """ℓ-1 requests at every server position (c_i - 1 for unequal capacities).

        Returns True when the algorithm matched one of them away from its own
        server, after which the caller should ``punish``.
        """
        self.phase = "prefix"
        deviated = False
        for i, c in enumerate(self.inst.capacities):
            for _ in range(c - 1):
                got = yield self.at(i)
                deviated |= got != i
        return deviated

    def punish(self, positions):
        """Requests that let OPT reach zero cost while ALG has already paid."""
        self.phase = "punish"
        self.branch = PUNISH
        for q in positions:
            yield q

    def script(self):
        raise NotImplementedError
        yield  # pragma: no cover

    def next_request(self, history: GameTrace) -> Point | None:
        self._reset()
        gen = self.script()
        q = _advance(gen, None)
        for i, st in enumerate(history.steps):
            if q is None:
                raise DesyncError("history is longer than the adversary's sequence")
            if self._to_actual(q) != st.request:
                raise DesyncError(
                    f"step {i}: history has request {st.request!r}, "
                    f"adversary emitted {self._to_actual(q)!r}"
                )
            q = _advance(gen, self._to_paper(st.server))
        if q is None:
            self.done = True
            self.phase = "done"
            return None
        return self._to_actual(q)


def _advance(gen, value):
    try:
        return next(gen) if value is None else gen.send(value)
    except StopIteration:
        return None


@dataclass
class RatioReport:
    scenario: str
    algorithm: str
    alg_cost: float
    opt_cost: float
    ratio: float
    branch_label: str
    trace: GameTrace
    opt_plan: AssignmentPlan
    surrounding: bool = True
    constants: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "algorithm": self.algorithm,
            "branch": self.branch_label,
            "alg_cost": self.alg_cost,
            "opt_cost": self.opt_cost,
            "ratio": fmt_ratio(self.ratio),
            "surrounding_oriented": self.surrounding,
            "constants": dict(self.constants),
            "trace": self.trace.to_dict(),
            "opt_plan": self.opt_plan.to_dict(),
        }


def _same_instance(a: Instance, b: Instance) -> bool:
    return a.positions == b.positions and a.capacities == b.capacities


def _report(inst: Instance, adv: Adversary, name: str, trace: GameTrace) -> RatioReport:
    plan = optimal_assignment(inst, trace.requests)
    alg = trace.total_cost
    return RatioReport(
        scenario=adv.scenario,
        algorithm=name,
        alg_cost=alg,
        opt_cost=plan.total_cost,
        ratio=ratio(alg, plan.total_cost),
        branch_label=adv.branch_label,
        trace=trace,
        opt_plan=plan,
        surrounding=is_surrounding_oriented(inst, trace),
        constants=dict(adv.constants),
    )


def play_game(inst: Instance, algorithm: OnlineAlgorithm, adversary: Adversary) -> RatioReport:
    if not _same_instance(inst, adversary.inst):
        raise PreconditionError("adversary was built for a different instance")
    state, trace = ServerState(inst), GameTrace()
    limit = inst.total_capacity
    while True:
        q = adversary.next_request(trace)
        if q is None:
            break
        if len(trace) >= limit:
            raise PreconditionError("adversary exceeded the total capacity")
        play_step(inst, algorithm, state, trace, q)
    return _report(inst, adversary, algorithm.name, trace)


def enumerate_game_tree(inst: Instance, make_adversary, max_leaves: int = 100_000) -> list[RatioReport]:
    """Play every legal server choice at every request.

    Any deterministic algorithm facing a deterministic adversary follows
    exactly one root-to-leaf path, so the leaves cover all of them.
    """
    leaves: list[RatioReport] = []
    stack: list[list[int]] = [[]]
    while stack:
        choices = stack.pop()
        adv = make_adversary(inst)
        state, trace = ServerState(inst), GameTrace()
        alg = Scripted(choices)
        expanded = False
        while (q := adv.next_request(trace)) is not None:
            if len(trace) == len(choices):
                stack.extend(choices + [s] for s in reversed(state.free()))
                expanded = True
                break
            play_step(inst, alg, state, trace, q)
        if expanded:
            continue
        leaves.append(_report(inst, adv, alg.name, trace))
        if len(leaves) > max_leaves:
            raise PreconditionError(f"game tree exceeds {max_leaves} leaves")
    return leaves
