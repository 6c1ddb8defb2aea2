import pytest

from effinsep.convert import ConversionError, derive_path, find_path, weaken
from effinsep.pairs import Kind, kleene_pair
from effinsep.verify import all_pass, run_suite


@pytest.fixture(scope="module")
def kp():
    return kleene_pair()[1]


def kinds(path):
    return [path[0].src, *(e.dst for e in path)] if path else []


def test_kp_to_du_route():
    assert kinds(find_path(Kind.KP, Kind.DU)) == [Kind.KP, Kind.CEI, Kind.EI, Kind.WEI, Kind.DU]


def test_trivial_path_is_empty():
    assert find_path(Kind.EI, Kind.EI) == []


@pytest.mark.parametrize("k", list(Kind))
def test_every_kind_reachable_both_ways(k):
    there, back = find_path(Kind.KP, k), find_path(k, Kind.EI)
    assert not there or there[-1].dst == k
    assert not back or back[-1].dst == Kind.EI
    for a, b in zip(there, there[1:]):
        assert a.dst == b.src


def test_weaken_rejects_unrelated_kind(kp):
    with pytest.raises(ConversionError):
        weaken(kp, Kind.EI)


@pytest.mark.parametrize("k", [k for k in Kind if k != Kind.DG])
def test_derived_witness_survives_low_fuel_suite(kp, k):
    w = derive_path(kp, k)
    assert w.kind == k and w.pair == kp.pair
    assert len(w.derivation) >= 1
    reps = run_suite(w, 10**4)
    assert len(reps) >= 3 and all_pass(reps)


def test_round_trip_to_ei(kp):
    for k in (Kind.SF, Kind.DU, Kind.DCP):
        w = derive_path(derive_path(kp, k), Kind.EI)
        assert w.kind == Kind.EI
        assert all_pass(run_suite(w, 10**4))
