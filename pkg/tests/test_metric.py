import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omatch.errors import InvalidPoint
from omatch.io import InputError, load_problem
from omatch.metric import (
    Instance,
    Metric,
    Server,
    distance,
    line_instance,
    ofal_instance,
    omm2_instance,
    validate,
    validate_requests,
)

X3 = math.sqrt(6) - 2

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_distance_identity():
    assert distance(ofal_instance(3, 1), 0.0, 0.0) == 0.0


def test_distance_ofal3_case1_leg():
    inst = ofal_instance(3, 1)
    assert distance(inst, 1 + X3, 2.0) == pytest.approx(3 - math.sqrt(6), abs=1e-12)
    assert distance(inst, 1 + X3, 2.0) == pytest.approx(0.5505102572, abs=1e-9)


def test_distance_matrix_symmetric():
    d = [[0, 5, 3], [5, 0, 4], [3, 4, 0]]
    inst = Instance(Metric.from_matrix(d), (Server(0, 1), Server(1, 1)))
    assert distance(inst, 0, 1) == 5
    assert distance(inst, 1, 0) == 5


@pytest.mark.parametrize("bad", [3, -1, 1.5, True])
def test_distance_matrix_invalid_point(bad):
    d = [[0, 1], [1, 0]]
    inst = Instance(Metric.from_matrix(d), (Server(0, 1),))
    with pytest.raises(InvalidPoint):
        distance(inst, bad, 0)


@given(reals, reals, reals)
def test_line_triangle_inequality(a, b, c):
    inst = ofal_instance(2, 1)
    assert distance(inst, a, c) <= distance(inst, a, b) + distance(inst, b, c) + 1e-9


@given(reals, reals)
def test_line_symmetry(a, b):
    inst = ofal_instance(2, 1)
    assert distance(inst, a, b) == distance(inst, b, a)


def test_validate_ok_examples():
    assert validate(ofal_instance(3, 1)).ok
    assert validate(omm2_instance(-1, 1, 2, 3)).ok
    d = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    assert validate(Instance(Metric.from_matrix(d), (Server(0, 1), Server(2, 0)))).ok


def test_validate_unequal_gaps():
    rep = validate(line_instance([0, 1, 2.5], 1, "ofal"))
    assert rep.violations == ["unequal consecutive gaps"]


def test_validate_omm2_three_servers():
    rep = validate(line_instance([0, 1, 2], 1, "omm2"))
    assert rep.violations == ["omm2 requires exactly 2 servers"]


# each mutant breaks exactly one invariant of an otherwise valid instance
MUTANTS = {
    "non-finite coordinate": line_instance([0, math.inf], 1),
    "negative capacity": line_instance([0, 1], [3, -1]),
    "zero total capacity": line_instance([0, 1], 0),
    "no servers": Instance(Metric.line(), ()),
    "decreasing ofal": line_instance([2, 1, 0], 1, "ofal"),
    "unnormalized ofal": line_instance([0, 2, 4], 1, "ofal"),
    "unequal ofal caps": line_instance([0, 1, 2], [1, 2, 1], "ofal"),
    "ofal on matrix": Instance(Metric.from_matrix([[0, 1], [1, 0]]), (Server(0, 1), Server(1, 1)), "ofal"),
    "asymmetric matrix": Instance(Metric.from_matrix([[0, 1], [2, 0]]), (Server(0, 1),)),
    "nonzero diagonal": Instance(Metric.from_matrix([[1, 1], [1, 0]]), (Server(0, 1),)),
    "triangle": Instance(Metric.from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]]), (Server(0, 1),)),
    "point out of range": Instance(Metric.from_matrix([[0, 1], [1, 0]]), (Server(7, 1),)),
    "unknown variant": line_instance([0, 1], 1, "omm3"),
    "omm2 one server": line_instance([0], 1, "omm2"),
}


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_single_violation_mutants(name):
    rep = validate(MUTANTS[name])
    assert not rep.ok
    assert len(rep.violations) == 1, rep.violations


def test_negative_matrix_entry():
    # d(a,a) <= 2 d(a,b) fails too, so the triangle check necessarily fires as well
    rep = validate(Instance(Metric.from_matrix([[0, -1], [-1, 0]]), (Server(0, 1),)))
    assert "distance matrix has negative entries" in rep.violations


def test_validate_requests_capacity_and_points():
    inst = omm2_instance(-1, 1, 1, 1)
    assert validate_requests(inst, [0.0, 1.0]) == []
    assert validate_requests(inst, [0.0, 1.0, 2.0]) == ["3 requests exceed total capacity 2"]
    assert validate_requests(inst, [math.nan])[0].startswith("request 0")


LINE_INST = '{"metric":{"kind":"line"},"servers":[{"pos":0,"cap":1},{"pos":2,"cap":1},{"pos":4,"cap":1}],"variant":"ofal"}'


def test_load_normalizes_ofal_spacing():
    inst, seq = load_problem(LINE_INST, '{"requests":[3.0, 1]}')
    assert inst.positions == (0.0, 1.0, 2.0)
    assert inst.scale == 2.0
    assert seq.requests == (1.5, 0.5)
    assert validate(inst).ok


@pytest.mark.parametrize(
    "text",
    [
        '{"metric":{"kind":"line"},"servers":[],"variant":"ofal","extra":1}',
        '{"metric":{"kind":"line","colour":1},"servers":[],"variant":"ofal"}',
        '{"metric":{"kind":"line"},"servers":[{"pos":0,"cap":1,"name":"a"}],"variant":"ofal"}',
        '{"metric":{"kind":"line"},"servers":[{"pos":0,"cap":1.5}],"variant":"ofal"}',
        '{"metric":{"kind":"line"},"servers":[{"pos":"0","cap":1}],"variant":"ofal"}',
        '{"metric":{"kind":"sphere"},"servers":[],"variant":"ofal"}',
        '{"metric":{"kind":"matrix"},"servers":[],"variant":"general"}',
        '{"metric":{"kind":"matrix","d":[[0]]},"servers":[{"pos":0.5,"cap":1}],"variant":"general"}',
        "not json",
    ],
)
def test_strict_parsing_rejects(text):
    with pytest.raises(InputError):
        load_problem(text)


def test_requests_unknown_key_rejected():
    with pytest.raises(InputError):
        load_problem(LINE_INST, '{"requests":[1], "n": 1}')
