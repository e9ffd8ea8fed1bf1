"""Problem instances: metric, capacitated servers, request sequences.

Two metrics are supported. On the ``line`` metric a point is a finite real
coordinate. On the ``matrix`` metric a point is an integer index into an
explicit distance matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import pairwise
from typing import Iterable, Sequence, Union

import numpy as np

from . import config
from .errors import InvalidPoint

Point = Union[float, int]

VARIANTS = ("omm2", "ofal", "general")


@dataclass(frozen=True)
class Metric:
    kind: str = "line"
    matrix: tuple[tuple[float, ...], ...] | None = None

    @classmethod
    def line(cls) -> Metric:
        return cls("line")

    @classmethod
    def from_matrix(cls, rows: Iterable[Iterable[float]]) -> Metric:
        return cls("matrix", tuple(tuple(float(v) for v in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.matrix) if self.matrix is not None else 0


@dataclass(frozen=True)
class Server:
    pos: Point
    cap: int


@dataclass(frozen=True)
class Instance:
    metric: Metric
    servers: tuple[Server, ...]
    variant: str = "general"
    # OFAL inputs are rescaled to unit spacing; distances are in units of `scale`.
    scale: float = 1.0

    @property
    def k(self) -> int:
        return len(self.servers)

    @property
    def positions(self) -> tuple[Point, ...]:
        return tuple(s.pos for s in self.servers)

    @property
    def capacities(self) -> tuple[int, ...]:
        return tuple(s.cap for s in self.servers)

    @property
    def total_capacity(self) -> int:
        return sum(s.cap for s in self.servers)

    def with_capacities(self, caps: Sequence[int]) -> Instance:
        servers = tuple(Server(s.pos, int(c)) for s, c in zip(self.servers, caps))
        return replace(self, servers=servers)


@dataclass(frozen=True)
class RequestSequence:
    requests: tuple[Point, ...] = ()

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    def __getitem__(self, i):
        return self.requests[i]


def as_requests(seq) -> tuple[Point, ...]:
    if isinstance(seq, RequestSequence):
        return seq.requests
    return tuple(seq)


def line_instance(positions, caps, variant="general") -> Instance:
    if isinstance(caps, int):
        caps = [caps] * len(positions)
    servers = tuple(Server(float(p), int(c)) for p, c in zip(positions, caps))
    return Instance(Metric.line(), servers, variant)


def omm2_instance(p1: float, p2: float, c1: int, c2: int) -> Instance:
    return line_instance([p1, p2], [c1, c2], "omm2")


def ofal_instance(k: int, cap: int, origin: float = 0.0) -> Instance:
    """k unit-spaced servers starting at `origin`, each of capacity `cap`."""
    return line_instance([origin + i for i in range(k)], cap, "ofal")


def distance(inst: Instance, a: Point, b: Point) -> float:
    metric = inst.metric
    if metric.kind == "line":
        return abs(float(a) - float(b))
    n = metric.size
    for p in (a, b):
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not 0 <= p < n:
            raise InvalidPoint(f"point {p!r} is not an index into a {n}x{n} matrix")
    return metric.matrix[a][b]


def check_point(inst: Instance, p) -> str | None:
    """Return a violation message for an invalid point, else None."""
    if inst.metric.kind == "line":
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p):
            return f"line coordinate {p!r} is not a finite real"
        return None
    n = inst.metric.size
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not 0 <= p < n:
        return f"point id {p!r} out of range for {n}x{n} matrix"
    return None


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    scale: float = 1.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "scale": self.scale}


def _metric_violations(metric: Metric, tol: float) -> list[str]:
    if metric.kind == "line":
        return [] if metric.matrix is None else ["line metric must not carry a matrix"]
    if metric.kind != "matrix":
        return [f"unknown metric kind {metric.kind!r}"]
    if not metric.matrix:
        return ["matrix metric needs a non-empty distance matrix"]
    n = len(metric.matrix)
    if any(len(row) != n for row in metric.matrix):
        return ["distance matrix is not square"]
    d = np.asarray(metric.matrix, dtype=float)
    out = []
    if not np.all(np.isfinite(d)):
        out.append("distance matrix has non-finite entries")
        return out
    if np.any(d < 0):
        out.append("distance matrix has negative entries")
    if np.any(np.abs(np.diag(d)) > tol):
        out.append("distance matrix has a nonzero diagonal")
    if np.any(np.abs(d - d.T) > tol):
        out.append("distance matrix is not symmetric")
    # d[a, c] <= d[a, b] + d[b, c] for every triple
    via = d[:, :, None] + d[None, :, :]
    if np.any(d[:, None, :] > via + tol):
        out.append("distance matrix violates the triangle inequality")
    return out


def validate(inst: Instance, tol: float | None = None) -> ValidationReport:
    tol = config.TOL if tol is None else tol
    report = ValidationReport(scale=inst.scale)
    v = report.violations
    v.extend(_metric_violations(inst.metric, tol))
    if inst.variant not in VARIANTS:
        v.append(f"unknown variant {inst.variant!r}")
    if not inst.servers:
        v.append("instance has no servers")
    metric_ok = not v
    for i, s in enumerate(inst.servers):
        if metric_ok:
            msg = check_point(inst, s.pos)
            if msg:
                v.append(f"server {i}: {msg}")
        if isinstance(s.cap, bool) or not isinstance(s.cap, (int, np.integer)):
            v.append(f"server {i}: capacity must be an integer")
        elif s.cap < 0:
            v.append(f"server {i}: negative capacity")
    if inst.servers and inst.total_capacity < 1:
        v.append("total capacity must be at least 1")

    if inst.variant == "omm2" and inst.k != 2:
        v.append("omm2 requires exactly 2 servers")
    if inst.variant == "ofal" and not v:
        if inst.metric.kind != "line":
            v.append("ofal requires the line metric")
        else:
            v.extend(_ofal_violations(inst, tol))
    return report


def _ofal_violations(inst: Instance, tol: float) -> list[str]:
    out = []
    pos = [float(p) for p in inst.positions]
    gaps = [b - a for a, b in pairwise(pos)]
    if any(g < -tol for g in gaps):
        out.append("server positions must be nondecreasing")
    elif gaps:
        if max(gaps) - min(gaps) > tol:
            out.append("unequal consecutive gaps")
        elif abs(gaps[0] - 1.0) > tol:
            out.append("ofal spacing must be normalized to 1")
    if len(set(inst.capacities)) > 1:
        out.append("ofal servers must share one capacity")
    return out


def validate_requests(inst: Instance, seq) -> list[str]:
    reqs = as_requests(seq)
    out = [f"request {i}: {m}" for i, p in enumerate(reqs) if (m := check_point(inst, p))]
    if len(reqs) > inst.total_capacity:
        out.append(f"{len(reqs)} requests exceed total capacity {inst.total_capacity}")
    return out


def normalize_ofal(inst: Instance, seq=None, tol: float | None = None):
    """Rescale a uniformly spaced line instance (and its requests) to unit gaps.

    Returns ``(instance, requests)``; the applied factor is stored in
    ``instance.scale``. Inputs that are not uniformly spaced, or already unit
    spaced, are returned unchanged so that ``validate`` can report them.
    """
    tol = config.TOL if tol is None else tol
    reqs = as_requests(seq) if seq is not None else None
    if inst.variant != "ofal" or inst.metric.kind != "line" or inst.k < 2:
        return inst, (RequestSequence(reqs) if reqs is not None else None)
    pos = [float(p) for p in inst.positions]
    gaps = [b - a for a, b in pairwise(pos)]
    g = gaps[0]
    uniform = g > tol and max(gaps) - min(gaps) <= tol * max(1.0, g)
    if not uniform or abs(g - 1.0) <= tol:
        return inst, (RequestSequence(reqs) if reqs is not None else None)
    servers = tuple(Server(p / g, s.cap) for p, s in zip(pos, inst.servers))
    scaled = replace(inst, servers=servers, scale=inst.scale * g)
    if reqs is not None:
        reqs = RequestSequence(tuple(float(r) / g for r in reqs))
    return scaled, reqs
