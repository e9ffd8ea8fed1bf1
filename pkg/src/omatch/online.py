"""Online algorithms, the game loop, and trace-level predicates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import config
from .errors import (
    IllegalMove,
    PreconditionError,
    TracePlanMismatch,
    UnknownAlgorithm,
    UnsupportedMetric,
)
from .metric import Instance, Point, as_requests, distance
from .offline import AssignmentPlan


class ServerState:
    """Remaining capacity per server. Only the game loop mutates it."""

    def __init__(self, inst: Instance):
        self.capacity = list(inst.capacities)
        self.remaining = list(inst.capacities)

    def is_free(self, s: int) -> bool:
        return 0 <= s < len(self.remaining) and self.remaining[s] > 0

    def free(self) -> list[int]:
        return [s for s, left in enumerate(self.remaining) if left > 0]

    def take(self, s: int) -> None:
        if not self.is_free(s):
            raise IllegalMove(f"server {s} is not free")
        self.remaining[s] -= 1

    def copy(self) -> ServerState:
        other = ServerState.__new__(ServerState)
        other.capacity = list(self.capacity)
        other.remaining = list(self.remaining)
        return other


@dataclass(frozen=True)
class Step:
    request: Point
    server: int
    cost: float


@dataclass
class GameTrace:
    steps: list[Step] = field(default_factory=list)

    @property
    def total_cost(self) -> float:
        return float(sum(st.cost for st in self.steps))

    @property
    def requests(self) -> tuple[Point, ...]:
        return tuple(st.request for st in self.steps)

    @property
    def servers(self) -> list[int]:
        return [st.server for st in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        return {
            "steps": [[st.request, st.server, st.cost] for st in self.steps],
            "total_cost": self.total_cost,
        }


class OnlineAlgorithm:
    """Decides which free server receives each request.

    ``serve`` must be a deterministic function of its arguments and must
    return a free server; the game loop raises IllegalMove otherwise.
    """

    name = "abstract"

    def serve(self, inst: Instance, state: ServerState, request: Point, history: GameTrace) -> int:
        raise NotImplementedError


def greedy_serve(inst: Instance, state: ServerState, request: Point) -> int:
    """Closest free server; equidistant servers resolve to the lowest index."""
    best, best_d = -1, 0.0
    for s in state.free():
        d = distance(inst, request, inst.servers[s].pos)
        if best < 0 or d < best_d - config.TOL:
            best, best_d = s, d
    if best < 0:
        raise PreconditionError("no free server")
    return best


class Greedy(OnlineAlgorithm):
    name = "greedy"

    def serve(self, inst, state, request, history):
        return greedy_serve(inst, state, request)


def surrounding_servers(inst: Instance, state: ServerState, request: float):
    """Nearest free server at or left of `request`, and at or right of it.

    Either side is None when no free server lies there. A free server sitting
    exactly on the request is both.
    """
    if inst.metric.kind != "line":
        raise UnsupportedMetric("surrounding servers need the line metric")
    tol = config.TOL
    left = right = None
    for s in state.free():
        p = float(inst.servers[s].pos)
        if p <= request + tol and (left is None or p > float(inst.servers[left].pos) + tol):
            left = s
        if p >= request - tol and (right is None or p < float(inst.servers[right].pos) - tol):
            right = s
    return left, right


class SidePolicy(OnlineAlgorithm):
    """Surrounding-oriented algorithm driven by a fixed list of side choices.

    Each time the two surrounding servers differ, the next entry of `sides`
    ('L' or 'R') picks one; once the list runs out the last entry repeats.
    A single-character policy is therefore one of the two extremists.
    """

    def __init__(self, sides: str):
        if not sides or set(sides) - {"L", "R"}:
            raise ValueError(f"sides must be a non-empty string over L/R, got {sides!r}")
        self.sides = sides
        self.name = {"L": "left", "R": "right"}[sides] if len(sides) == 1 else f"policy:{sides}"

    def serve(self, inst, state, request, history):
        left, right = surrounding_servers(inst, state, request)
        if left is None or right is None or left == right:
            return left if right is None else right
        # decisions already taken are replayed from the history
        used = _count_decisions(inst, history)
        side = self.sides[min(used, len(self.sides) - 1)]
        return left if side == "L" else right


def _count_decisions(inst: Instance, history: GameTrace) -> int:
    state = ServerState(inst)
    n = 0
    for st in history.steps:
        left, right = surrounding_servers(inst, state, st.request)
        if left is not None and right is not None and left != right:
            n += 1
        state.take(st.server)
    return n


class Farthest(OnlineAlgorithm):
    """Farthest free server (lowest index on ties). Deliberately bad; not surrounding-oriented."""

    name = "farthest"

    def serve(self, inst, state, request, history):
        best, best_d = -1, 0.0
        for s in state.free():
            d = distance(inst, request, inst.servers[s].pos)
            if best < 0 or d > best_d + config.TOL:
                best, best_d = s, d
        return best


class Scripted(OnlineAlgorithm):
    """Replays a fixed list of server choices, one per request."""

    def __init__(self, choices):
        self.choices = list(choices)
        self.name = "scripted:" + ",".join(map(str, self.choices))

    def serve(self, inst, state, request, history):
        return self.choices[len(history)]


ALGORITHMS: dict[str, Callable[[], OnlineAlgorithm]] = {
    "greedy": Greedy,
    "left": lambda: SidePolicy("L"),
    "right": lambda: SidePolicy("R"),
    "farthest": Farthest,
}


def register_algorithm(name: str, factory: Callable[[], OnlineAlgorithm]) -> None:
    ALGORITHMS[name] = factory


def get_algorithm(name: str) -> OnlineAlgorithm:
    if name.startswith("policy:"):
        return SidePolicy(name.split(":", 1)[1])
    try:
        return ALGORITHMS[name]()
    except KeyError:
        known = ", ".join(sorted(ALGORITHMS))
        raise UnknownAlgorithm(f"unknown algorithm {name!r} (known: {known}, policy:<L|R...>)")


def play_step(inst: Instance, alg: OnlineAlgorithm, state: ServerState, trace: GameTrace, request) -> Step:
    s = alg.serve(inst, state, request, trace)
    if not state.is_free(s):
        raise IllegalMove(f"{alg.name} chose full or missing server {s} for request {request!r}")
    state.take(s)
    step = Step(request, s, distance(inst, request, inst.servers[s].pos))
    trace.steps.append(step)
    return step


def run_online(inst: Instance, alg: OnlineAlgorithm, seq) -> GameTrace:
    """Serve a fixed (non-adaptive) request sequence."""
    state, trace = ServerState(inst), GameTrace()
    for r in as_requests(seq):
        play_step(inst, alg, state, trace, r)
    return trace


def greedy_trace(inst: Instance, seq) -> GameTrace:
    return run_online(inst, Greedy(), seq)


def check_trace(inst: Instance, trace: GameTrace) -> list[str]:
    """Every broken GameTrace invariant (empty when valid)."""
    out = []
    state = ServerState(inst)
    for i, st in enumerate(trace.steps):
        if not state.is_free(st.server):
            out.append(f"step {i}: server {st.server} was not free")
            continue
        state.take(st.server)
        if abs(distance(inst, st.request, inst.servers[st.server].pos) - st.cost) > config.TOL:
            out.append(f"step {i}: cost differs from the distance")
    return out


@dataclass(frozen=True)
class RequestType:
    greedy_server: int
    opt_server: int

    @property
    def same(self) -> bool:
        return self.greedy_server == self.opt_server


def classify_types(trace: GameTrace, plan: AssignmentPlan) -> list[RequestType]:
    if len(trace) != len(plan.pairs):
        raise TracePlanMismatch(f"trace has {len(trace)} steps, plan has {len(plan.pairs)} pairs")
    opt = plan.server_of()
    return [RequestType(st.server, o) for st, o in zip(trace.steps, opt)]


def is_surrounding_oriented(inst: Instance, trace: GameTrace) -> bool:
    if inst.metric.kind != "line":
        raise UnsupportedMetric("surrounding-oriented is defined on the line metric only")
    state = ServerState(inst)
    for st in trace.steps:
        left, right = surrounding_servers(inst, state, st.request)
        pos = float(inst.servers[st.server].pos)
        allowed = [float(inst.servers[s].pos) for s in (left, right) if s is not None]
        # co-located servers are interchangeable
        if not any(abs(pos - p) <= config.TOL for p in allowed):
            return False
        state.take(st.server)
    return True
