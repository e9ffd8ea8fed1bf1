"""Rate-monotone rewrites of two-server inputs.

``make_anti_opt`` drops requests that GREEDY and OPT send to the same
server, shrinking that server's capacity by one each time.
``make_one_sided_priority`` then reorders an anti-opt input so that GREEDY
fills one server completely before touching the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import config
from .errors import PreconditionError
from .metric import Instance, RequestSequence, as_requests
from .offline import AssignmentPlan, optimal_assignment
from .online import GameTrace, classify_types, greedy_trace


def ratio(alg_cost: float, opt_cost: float, tol: float | None = None) -> float:
    """ALG/OPT with 0/0 -> 1 and positive/0 -> inf."""
    tol = config.TOL if tol is None else tol
    if opt_cost <= tol:
        return 1.0 if alg_cost <= tol else math.inf
    return alg_cost / opt_cost


def rate(inst: Instance, seq) -> float:
    reqs = as_requests(seq)
    plan = optimal_assignment(inst, reqs)
    return ratio(greedy_trace(inst, reqs).total_cost, plan.total_cost)


@dataclass
class ReducedInput:
    instance: Instance
    sequence: RequestSequence
    provenance: list[dict] = field(default_factory=list)
    # Rate after each edit; rates[0] is the input's rate.
    rates: list[float] = field(default_factory=list)
    # The OPT matching the reduction reasoned with (reordered alongside moves).
    opt_plan: AssignmentPlan | None = None

    def to_dict(self) -> dict:
        from .io import dump_instance, fmt_ratio

        return {
            "instance": dump_instance(self.instance),
            "requests": list(self.sequence.requests),
            "provenance": [dict(p) for p in self.provenance],
            "rates": [fmt_ratio(r) for r in self.rates],
            "opt_pairs": [list(p) for p in self.opt_plan.pairs] if self.opt_plan else None,
        }


def _require_omm2(inst: Instance) -> None:
    if inst.k != 2:
        raise PreconditionError("reductions are defined for two servers only")


def is_anti_opt(inst: Instance, seq, plan: AssignmentPlan | None = None) -> bool:
    reqs = as_requests(seq)
    plan = optimal_assignment(inst, reqs) if plan is None else plan
    return not any(t.same for t in classify_types(greedy_trace(inst, reqs), plan))


def first_full(inst: Instance, trace: GameTrace):
    """(server, step index) at which GREEDY first exhausts a server, or None."""
    load = [0] * inst.k
    for t, st in enumerate(trace.steps):
        load[st.server] += 1
        if load[st.server] == inst.servers[st.server].cap:
            return st.server, t
    return None


def is_one_sided_priority(inst: Instance, seq) -> bool:
    """GREEDY sends r_1..r_c to the server s of r_1 (c its capacity), the rest elsewhere."""
    trace = greedy_trace(inst, as_requests(seq))
    if not trace.steps:
        return True
    sx = trace.steps[0].server
    c = inst.servers[sx].cap
    return all((st.server == sx) == (i < c) for i, st in enumerate(trace.steps))


def make_anti_opt(inst: Instance, seq) -> ReducedInput:
    _require_omm2(inst)
    reqs = list(as_requests(seq))
    caps = list(inst.capacities)
    provenance: list[dict] = []
    cur = inst
    plan = optimal_assignment(cur, reqs)
    rates = [ratio(greedy_trace(cur, reqs).total_cost, plan.total_cost)]
    while True:
        types = classify_types(greedy_trace(cur, reqs), plan)
        same = next((i for i, t in enumerate(types) if t.same), None)
        if same is None:
            break
        s = types[same].greedy_server
        provenance.append({"op": "remove", "index": same, "server": s})
        del reqs[same]
        caps[s] -= 1
        cur = inst.with_capacities(caps)
        plan = optimal_assignment(cur, reqs)
        rates.append(ratio(greedy_trace(cur, reqs).total_cost, plan.total_cost))
    return ReducedInput(cur, RequestSequence(tuple(reqs)), provenance, rates, plan)


def prioritize_first_full(inst: Instance, seq, plan: AssignmentPlan | None = None) -> ReducedInput:
    """Move requests until GREEDY fills its first-exhausted server before anything else.

    Let r_t be the request that first fills a server s_x under GREEDY. The
    earliest request before r_t that GREEDY sends elsewhere is moved to just
    after r_t; repeat. GREEDY's choices, and so its cost, are unchanged. The
    OPT matching in `plan` (canonical optimum by default) is reordered along
    with the requests and stays optimal because the request multiset is fixed.
    """
    _require_omm2(inst)
    reqs = list(as_requests(seq))
    if len(reqs) != inst.total_capacity:
        raise PreconditionError("one-sided reduction needs n equal to the total capacity")
    plan = optimal_assignment(inst, reqs) if plan is None else plan
    opt = plan.server_of()
    provenance: list[dict] = []
    rates = [ratio(greedy_trace(inst, reqs).total_cost, plan.total_cost)]
    while True:
        trace = greedy_trace(inst, reqs)
        hit = first_full(inst, trace)
        if hit is None:
            break
        sx, t = hit
        early = next((i for i in range(t) if trace.steps[i].server != sx), None)
        if early is None:
            break
        if len(provenance) >= len(reqs):
            raise RuntimeError("one-sided reduction did not converge")
        provenance.append({"op": "move", "index": early, "after": t})
        reqs.insert(t, reqs.pop(early))
        opt.insert(t, opt.pop(early))
        rates.append(ratio(greedy_trace(inst, reqs).total_cost, plan.total_cost))
    out_plan = AssignmentPlan(tuple(enumerate(opt)), plan.total_cost)
    return ReducedInput(inst, RequestSequence(tuple(reqs)), provenance, rates, out_plan)


def make_one_sided_priority(inst: Instance, seq, plan: AssignmentPlan | None = None) -> ReducedInput:
    """Anti-opt input -> anti-opt and one-sided-priority input of the same rate.

    On two servers an anti-opt input never has a request routed away from
    the first-filled server before it fills (swapping the two OPT servers
    would be strictly cheaper), so the result equals the input with empty
    provenance. The rewrite is still run so the claim is checked, not assumed.
    """
    _require_omm2(inst)
    reqs = as_requests(seq)
    if len(reqs) != inst.total_capacity:
        raise PreconditionError("one-sided reduction needs n equal to the total capacity")
    plan = optimal_assignment(inst, reqs) if plan is None else plan
    if not is_anti_opt(inst, reqs, plan):
        raise PreconditionError("input is not anti-opt")
    return prioritize_first_full(inst, reqs, plan)


def replay(inst: Instance, seq, provenance) -> tuple[Instance, RequestSequence]:
    """Re-apply edit records to the original input."""
    reqs = list(as_requests(seq))
    caps = list(inst.capacities)
    for rec in provenance:
        if rec["op"] == "remove":
            del reqs[rec["index"]]
            caps[rec["server"]] -= 1
        elif rec["op"] == "move":
            reqs.insert(rec["after"], reqs.pop(rec["index"]))
        else:
            raise ValueError(f"unknown edit {rec!r}")
    return inst.with_capacities(caps), RequestSequence(tuple(reqs))
