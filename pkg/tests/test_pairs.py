import pytest
from hypothesis import given
from hypothesis import strategies as st

from effinsep.index_algebra import LOOP, Asm, finite_set_index
from effinsep.kernel.machine import DECJZ, INC, Halted, encode_program, run
from effinsep.kernel.numbering import pair
from effinsep.pairs import (
    Kind,
    finite_pair,
    kleene_pair,
    lift_pair,
    sigma,
    sigma_decide,
    stage_race,
    swap_witness,
    value_pair,
)
from effinsep.verify import scan_disjoint

ONE = encode_program([INC(1)])  # halts in one step
TWO = encode_program([INC(1), INC(1)])
FUEL = 10**5


def member(e, x, fuel=FUEL):
    return isinstance(run(e, x, fuel), Halted)


def test_stage_race_outcomes():
    assert stage_race(ONE, 0, TWO, 0, 100) == 0
    assert stage_race(TWO, 0, ONE, 0, 100) == 1
    assert stage_race(ONE, 0, ONE, 5, 100) == 2
    assert stage_race(LOOP, 0, LOOP, 0, 100) == 3
    slow = encode_program([INC(1), DECJZ(1, 1), DECJZ(2, 0)])
    assert stage_race(slow, 0, LOOP, 0, 100) is None


def test_kleene_pair_membership():
    p, w = kleene_pair()
    assert w.kind == Kind.KP
    assert member(p.a.idx, pair(ONE, LOOP))
    assert member(p.b.idx, pair(LOOP, ONE))
    assert not member(p.a.idx, pair(ONE, ONE), 2000)
    assert p.decide(0, pair(ONE, TWO), 100) is True
    assert p.decide(1, pair(ONE, TWO), 100) is False


def test_kleene_pair_scan_clean():
    p, _ = kleene_pair()
    assert scan_disjoint(p, 200, FUEL).status == "Confirmed"


def test_overlapping_pair_is_caught():
    p = finite_pair({1, 2}, {3})
    bad = p.__class__(p.a, finite_set_index({2}), p.disjointness, "bad")
    assert scan_disjoint(bad, 10, 100).status == "Refuted"


def test_finite_pair_rejects_overlap():
    with pytest.raises(ValueError):
        finite_pair({1}, {1, 2})


def returns(v: int) -> int:
    a = Asm()
    a.set(0, v)
    return a.index()


def test_value_pair():
    with pytest.raises(ValueError):
        value_pair(0, 0)
    p = value_pair(0, 1)
    e0, e1 = returns(0), returns(1)
    assert member(p.a.idx, e0) and not member(p.b.idx, e0, 2000)
    assert member(p.b.idx, e1)
    assert p.decide(0, e0, 100) is True and p.decide(1, e0, 100) is False
    assert p.decide(0, LOOP, 100) is None


def test_lift_pair():
    p = lift_pair(finite_set_index({5}), finite_set_index({6}))
    five, six = returns(5), returns(6)
    assert member(p.a.idx, five) and member(p.b.idx, six)
    assert not member(p.b.idx, five, 2000)
    assert p.decide(0, five, 1000) is True and p.decide(1, five, 1000) is False


def test_swap_witness():
    p, w = kleene_pair()
    s = swap_witness(w)
    assert s.pair.a == p.b and s.payload.call2(3, 4) == w.payload.call2(4, 3)


# -- sigma --------------------------------------------------------------------------


def sigma_sets(i, j, bound=50):
    si, sj = sigma(i, j), sigma(j, i)
    return {x for x in range(bound) if member(si, x)}, {x for x in range(bound) if member(sj, x)}


def test_sigma_overlap_example():
    i, j = finite_set_index({1, 2}).idx, finite_set_index({2, 3}).idx
    a, b = sigma_sets(i, j)
    assert 1 in a and 3 in b and (2 in a) != (2 in b)


def test_sigma_disjoint_example():
    i, j = finite_set_index({1}).idx, finite_set_index({3}).idx
    a, _ = sigma_sets(i, j)
    assert a == {1}


def test_sigma_same_index_is_empty():
    i = finite_set_index({4, 8}).idx
    assert sigma_sets(i, i) == (set(), set())


@given(st.frozensets(st.integers(0, 20), max_size=5), st.frozensets(st.integers(0, 20), max_size=5))
def test_sigma_contract(a, b):
    i, j = finite_set_index(a).idx, finite_set_index(b).idx
    for x in range(22):
        in_ij, in_ji = sigma_decide(i, j, x, FUEL), sigma_decide(j, i, x, FUEL)
        assert not (in_ij and in_ji)
        if x in a and x not in b:
            assert in_ij
        if x in b and x not in a:
            assert in_ji
        if not (a & b):
            assert in_ij == (x in a)


def test_sigma_host_matches_program():
    i, j = finite_set_index({1, 2}).idx, finite_set_index({2, 5}).idx
    s = sigma(i, j)
    for x in range(8):
        assert member(s, x) == bool(sigma_decide(i, j, x, FUEL))
