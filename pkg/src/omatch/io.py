"""Strict JSON (de)serialization of instances, requests and results."""

from __future__ import annotations

import json
import math
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, StrictFloat, StrictInt, ValidationError

from .errors import OmatchError
from .metric import Instance, Metric, RequestSequence, Server, normalize_ofal

Number = Union[StrictInt, StrictFloat]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MetricModel(_Strict):
    kind: Literal["line", "matrix"]
    d: Optional[List[List[Number]]] = None


class ServerModel(_Strict):
    pos: Number
    cap: StrictInt


class InstanceModel(_Strict):
    metric: MetricModel
    servers: List[ServerModel]
    variant: Literal["omm2", "ofal", "general"]


class RequestsModel(_Strict):
    requests: List[Number]


class InputError(OmatchError):
    """Malformed JSON input."""


def _parse(model, text: str):
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise InputError(str(exc)) from None


def instance_from_model(m: InstanceModel) -> Instance:
    if m.metric.kind == "line":
        if m.metric.d is not None:
            raise InputError("line metric takes no 'd' matrix")
        metric = Metric.line()
        servers = tuple(Server(float(s.pos), s.cap) for s in m.servers)
    else:
        if m.metric.d is None:
            raise InputError("matrix metric requires 'd'")
        metric = Metric.from_matrix(m.metric.d)
        if any(not isinstance(s.pos, int) for s in m.servers):
            raise InputError("matrix metric server positions must be integer point ids")
        servers = tuple(Server(s.pos, s.cap) for s in m.servers)
    return Instance(metric, servers, m.variant)


def load_problem(instance_text: str, requests_text: str | None = None):
    """Parse instance (and optionally requests) JSON; OFAL inputs come back unit-spaced."""
    inst = instance_from_model(_parse(InstanceModel, instance_text))
    seq = None
    if requests_text is not None:
        raw = _parse(RequestsModel, requests_text).requests
        if inst.metric.kind == "line":
            seq = RequestSequence(tuple(float(r) for r in raw))
        else:
            if any(not isinstance(r, int) for r in raw):
                raise InputError("matrix metric requests must be integer point ids")
            seq = RequestSequence(tuple(raw))
    return normalize_ofal(inst, seq)


def dump_instance(inst: Instance) -> dict:
    metric = {"kind": inst.metric.kind}
    if inst.metric.kind == "matrix":
        metric["d"] = [list(row) for row in inst.metric.matrix]
    return {
        "metric": metric,
        "servers": [{"pos": s.pos, "cap": s.cap} for s in inst.servers],
        "variant": inst.variant,
    }


def fmt_ratio(x: float):
    """JSON has no infinity; unbounded ratios are written as the string "inf"."""
    return "inf" if math.isinf(x) else x


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
