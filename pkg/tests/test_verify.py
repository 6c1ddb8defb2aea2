import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from effinsep.index_algebra import ALL, LOOP, finite_set_index
from effinsep.pairs import finite_pair, kleene_pair
from effinsep.verify import (
    ScenarioError,
    SetDesc,
    all_pass,
    build_scenario,
    build_superset_scenario,
    check_witness,
    dumps,
    member,
    negative_controls,
    outside_points,
    scan_disjoint,
    t_and,
    t_iff,
    t_not,
    t_or,
)

K3 = st.sampled_from([True, False, None])


@given(K3, K3)
def test_k3_connectives_agree_with_bool(a, b):
    if a is not None and b is not None:
        assert t_and(a, b) == (a and b)
        assert t_or(a, b) == (a or b)
        assert t_iff(a, b) == (a == b)
    assert t_not(t_not(a)) == a
    assert t_and(a, False) is False and t_or(a, True) is True


def test_k3_unknown_propagates():
    assert t_and(True, None) is None
    assert t_or(False, None) is None
    assert t_iff(None, True) is None


def test_member_verdicts():
    fin = finite_set_index({3}).idx
    assert member(fin, 3, 100).status == "Confirmed"
    assert member(fin, 4, 100).status == "Refuted"
    assert member(LOOP, 4, 100).status == "Refuted"  # the empty table
    assert member(ALL, 9, 100).status == "Confirmed"
    p, _ = kleene_pair()
    # a general program that does not halt is never refuted
    assert member(p.a.idx, 0, 1000).status == "Unknown"


def test_scan_disjoint():
    assert scan_disjoint(finite_pair({1}, {2}), 10, 100).status == "Confirmed"


def test_superset_scenario_rejects_visible_overlap():
    p = finite_pair({1}, {2})
    with pytest.raises(ScenarioError):
        build_superset_scenario(p, {2}, ())
    with pytest.raises(ScenarioError):
        build_superset_scenario(p, {5}, {5})
    s = build_superset_scenario(p, {5}, {6})
    assert s.wi.label() == "A + {5}"


def test_outside_points():
    p = finite_pair({0, 1}, {2})
    assert outside_points(p, 3) == [3, 4, 5]


@pytest.fixture(scope="module")
def controls():
    return dict(negative_controls())


def test_negative_controls_fail(controls):
    assert set(controls) == {"control-ei", "control-kp", "control-dg"}
    for rep in controls.values():
        assert rep.failed
        assert any(c.status == "FAIL" and c.premise_verdict == "Confirmed" for c in rep.clauses)


def test_zero_fuel_is_all_unknown():
    for _, rep in negative_controls(0):
        assert not rep.failed
        assert {c.premise_verdict for c in rep.clauses} == {"Unknown"}
        assert {c.status for c in rep.clauses} == {"UNKNOWN"}


def test_kleene_witness_reports_serialise():
    p, w = kleene_pair()
    reps = [check_witness(w, build_scenario(p, SetDesc("none"), SetDesc("all")), 10**4)]
    assert all_pass(reps)
    data = json.loads(dumps(reps))
    assert data[0]["witness_kind"] == "KP" and data[0]["overall"] == "PASS"


def test_binary_kind_needs_binary_scenario():
    from effinsep.verify import ReductionScenario

    p, w = kleene_pair()
    with pytest.raises(ValueError):
        check_witness(w, ReductionScenario("r", finite_pair({1}, {2}), (1,)), 10)
