"""Offline optimum: capacitated min-cost assignment of requests to servers.

``optimal_assignment`` inserts requests one at a time and routes each along a
shortest augmenting path (successive shortest paths). The residual graph is
condensed onto servers: moving an already placed request ``r`` from server
``a`` to server ``b`` is an arc ``a -> b`` of cost ``d(r, b) - d(r, a)``.
With only k server nodes, Bellman-Ford on that graph is cheap and copes
with the negative arcs directly.

Among all optimal plans the lexicographically smallest pair list is
returned; ``brute_force_assignment`` applies the same rule by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapacityExceeded, InvalidPlan, OracleSizeError
from .metric import Instance, as_requests, distance

BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class AssignmentPlan:
    pairs: tuple[tuple[int, int], ...]
    total_cost: float

    def server_of(self) -> list[int]:
        """Server index per request, in request order."""
        out = [-1] * len(self.pairs)
        for r, s in self.pairs:
            out[r] = s
        return out

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "cost": self.total_cost}


def cost_matrix(inst: Instance, seq) -> list[list[float]]:
    return [[distance(inst, r, s.pos) for s in inst.servers] for r in as_requests(seq)]


def _check_feasible(inst: Instance, n: int) -> None:
    if n > inst.total_capacity:
        raise CapacityExceeded(f"{n} requests exceed total capacity {inst.total_capacity}")


def _plan(cost, assign) -> AssignmentPlan:
    pairs = tuple((r, s) for r, s in enumerate(assign))
    return AssignmentPlan(pairs, float(sum(cost[r][s] for r, s in pairs)))


class _Residual:
    """Current partial assignment plus shortest-path queries on servers."""

    def __init__(self, cost, caps):
        self.cost = cost
        self.caps = caps
        self.k = len(caps)
        self.assign: list[int] = []
        self.members: list[list[int]] = [[] for _ in caps]

    def load(self, s: int) -> int:
        return len(self.members[s])

    def shortest(self, dist: list[float], movable) -> list:
        """Bellman-Ford over server nodes starting from initial labels `dist`.

        Mutates `dist`; returns predecessor links ``(prev_server, request)``.
        """
        k, cost, eps = self.k, self.cost, config.SOLVER_EPS
        pred = [None] * k
        for _ in range(max(k - 1, 1)):
            changed = False
            for a in range(k):
                da = dist[a]
                if da == np.inf:
                    continue
                for r in self.members[a]:
                    if not movable(r):
                        continue
                    row = cost[r]
                    base = da - row[a]
                    for b in range(k):
                        if b == a or self.caps[b] == 0:
                            continue
                        cand = base + row[b]
                        if cand < dist[b] - eps:
                            dist[b] = cand
                            pred[b] = (a, r)
                            changed = True
            if not changed:
                break
        return pred

    def reroute(self, pred, end: int) -> int:
        """Shift requests along the predecessor chain ending at `end`.

        Returns the server at the head of the chain, which now has one
        request fewer than before.
        """
        cur, seen = end, {end}
        while pred[cur] is not None:
            prev, r = pred[cur]
            if prev in seen:
                raise RuntimeError("cycle in shortest-path tree")
            seen.add(prev)
            self.members[prev].remove(r)
            self.members[cur].append(r)
            self.assign[r] = cur
            cur = prev
        return cur

    def insert(self, r: int) -> None:
        row = self.cost[r]
        dist = [row[s] if self.caps[s] > 0 else np.inf for s in range(self.k)]
        pred = self.shortest(dist, lambda _: True)
        best = min(
            (s for s in range(self.k) if self.load(s) < self.caps[s]),
            key=lambda s: dist[s],
        )
        head = self.reroute(pred, best)
        self.assign.append(head)
        self.members[head].append(r)

    def canonicalize(self, tol: float) -> None:
        """Rewrite the optimum into the lexicographically smallest one within `tol`."""
        cost, k = self.cost, self.k
        target = sum(cost[r][s] for r, s in enumerate(self.assign)) + tol
        for i in range(len(self.assign)):
            j0 = self.assign[i]
            current = sum(cost[r][s] for r, s in enumerate(self.assign))
            for j in range(j0):
                if self.caps[j] == 0:
                    continue
                dist = [np.inf] * k
                dist[j] = 0.0
                pred = self.shortest(dist, lambda r, i=i: r > i)
                ends = [j0] + [s for s in range(k) if self.load(s) < self.caps[s]]
                end = min(ends, key=lambda s: dist[s])
                delta = cost[i][j] - cost[i][j0] + dist[end]
                if current + delta <= target:
                    self.reroute(pred, end)
                    self.members[j0].remove(i)
                    self.members[j].append(i)
                    self.assign[i] = j
                    break


def optimal_assignment(inst: Instance, seq) -> AssignmentPlan:
    reqs = as_requests(seq)
    _check_feasible(inst, len(reqs))
    cost = cost_matrix(inst, reqs)
    res = _Residual(cost, list(inst.capacities))
    for r in range(len(reqs)):
        res.insert(r)
    res.canonicalize(config.TOL)
    return _plan(cost, res.assign)


def brute_force_assignment(inst: Instance, seq) -> AssignmentPlan:
    """Exhaustive oracle: every map from requests to servers is scored."""
    reqs = as_requests(seq)
    n, k = len(reqs), inst.k
    if n > BRUTE_FORCE_MAX_N:
        raise OracleSizeError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    _check_feasible(inst, n)
    if n == 0:
        return AssignmentPlan((), 0.0)
    cost = np.asarray(cost_matrix(inst, reqs))
    caps = np.asarray(inst.capacities)
    # digit r of the row index (most significant first) is the server of request r,
    # so row order is lexicographic order of the pair list
    place = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    total = k**n
    chunk = 1 << 18

    def scan():
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            digits = (idx[:, None] // place) % k
            counts = np.stack([(digits == s).sum(axis=1) for s in range(k)], axis=1)
            feasible = np.all(counts <= caps, axis=1)
            c = cost[np.arange(n), digits].sum(axis=1)
            c[~feasible] = np.inf
            yield digits, c

    best = min(float(c.min()) for _, c in scan())
    for digits, c in scan():
        hit = np.flatnonzero(c <= best + config.TOL)
        if hit.size:
            return _plan(cost.tolist(), digits[hit[0]].tolist())
    raise CapacityExceeded("no feasible assignment")


def check_plan(inst: Instance, seq, plan: AssignmentPlan) -> list[str]:
    """Return every broken AssignmentPlan invariant (empty when valid)."""
    reqs = as_requests(seq)
    out = []
    seen = [0] * len(reqs)
    load = [0] * inst.k
    for r, s in plan.pairs:
        if not (0 <= r < len(reqs) and 0 <= s < inst.k):
            out.append(f"pair ({r}, {s}) references a missing request or server")
            continue
        seen[r] += 1
        load[s] += 1
    out += [f"request {r} assigned {c} times" for r, c in enumerate(seen) if c != 1]
    out += [
        f"server {s} over capacity ({load[s]} > {c})"
        for s, c in enumerate(inst.capacities)
        if load[s] > c
    ]
    if not out and abs(assignment_cost(inst, reqs, plan) - plan.total_cost) > config.TOL:
        out.append("total_cost does not match the pair distances")
    return out


def assignment_cost(inst: Instance, seq, plan: AssignmentPlan) -> float:
    reqs = as_requests(seq)
    total = 0.0
    for r, s in plan.pairs:
        if not (0 <= r < len(reqs) and 0 <= s < inst.k):
            raise InvalidPlan(f"pair ({r}, {s}) references a missing request or server")
        total += distance(inst, reqs[r], inst.servers[s].pos)
    return total
