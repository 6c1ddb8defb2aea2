import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effinsep.convert import derive_path
from effinsep.index_algebra import LOOP, finite_set_index
from effinsep.kernel.machine import INC, Halted, encode_program, run
from effinsep.kernel.numbering import pair
from effinsep.metamath import (
    LanguageError,
    atomic_oracle,
    classify_shoenfield_code,
    ei_theory_witness,
    equivalence_axioms,
    escape_witness,
    gn,
    independent_sentence,
    nuclei,
    parse,
    pair_theory,
    prove,
    ri_reduction_index,
    shoenfield_pair,
    shoenfield_sentences,
    shoenfield_theory,
    ungn,
)
from effinsep.metamath.shoenfield import phi, psi, upsilon
from effinsep.metamath.syntax import Not, Pred, num, size
from effinsep.pairs import Kind, finite_pair, kleene_pair
from effinsep.verify import all_pass, build_superset_scenario, check_witness, run_suite, scan_disjoint

A, B = {2}, {3}


@pytest.fixture(scope="module")
def small():
    return pair_theory(finite_set_index(A), finite_set_index(B), "T(2|3)")


def test_pair_theory_proves_its_atoms(small):
    assert prove(small, parse("P(2)"), 10**4).status == "Confirmed"
    assert prove(small, parse("~P(3)"), 10**4).status == "Confirmed"
    assert prove(small, parse("P(3)"), 10**4).status == "Unknown"
    assert prove(small, parse("(P(2) & ~P(3))"), 10**4).status == "Confirmed"
    assert prove(small, parse("ex x.P(x)"), 10**4).status == "Confirmed"


def test_language_mismatch(small):
    with pytest.raises(LanguageError):
        prove(small, parse("all x.R(x,x)"), 100)


@settings(max_examples=40)
@given(st.integers(0, 12), st.booleans())
def test_oracle_agrees_with_search(n, neg):
    t = pair_theory(finite_set_index({1, 4, 9}), finite_set_index({0, 6}))
    s = Not(Pred(num(n))) if neg else Pred(num(n))
    truth = atomic_oracle({1, 4, 9}, {0, 6}, s)
    got = prove(t, s, 10**4).status
    assert got == ("Confirmed" if truth else "Unknown")


def test_axiom_set_program(small):
    ax = small.axioms.idx
    assert isinstance(run(ax, gn(parse("P(2)")), 10**5), Halted)
    assert isinstance(run(ax, gn(parse("~P(3)")), 10**5), Halted)
    assert not isinstance(run(ax, gn(parse("P(3)")), 10**4), Halted)


def test_host_axiom_test_matches_program(small):
    texts = ["P(2)", "~P(3)", "P(3)", "~P(2)", "0=0", "~0=S(0)", "~S(0)=S(S(0))", "all x.P(x)"]
    codes = [gn(parse(s)) for s in texts] + list(range(300))
    for c in codes:
        host, _ = small.is_axiom(c, 10**5)
        assert (host is True) == isinstance(run(small.axioms.idx, c, 10**5), Halted), c


def test_nuclei(small):
    nu = nuclei(small)
    assert isinstance(run(nu.tp.idx, gn(parse("P(2)")), 10**6), Halted)
    assert isinstance(run(nu.tr.idx, gn(parse("P(3)")), 10**6), Halted)
    assert isinstance(run(nu.tp.idx, gn(parse("~P(3)")), 10**6), Halted)
    assert not isinstance(run(nu.tp.idx, gn(parse("P(3)")), 10**5), Halted)


def test_nuclei_are_disjoint(small):
    from effinsep.metamath.theory import nuclei_pair

    p = nuclei_pair(small, finite_pair(A, B).decide)
    assert scan_disjoint(p, 80, 10**4).status == "Confirmed"


@pytest.fixture(scope="module")
def theory_witness():
    kp, w = kleene_pair()
    return ei_theory_witness(derive_path(w, Kind.EI))


def test_ei_theory_witness_suite(theory_witness):
    reps = run_suite(theory_witness, 10**5)
    assert len(reps) >= 3 and all_pass(reps)


def test_ei_theory_witness_emits_numerals(theory_witness):
    p = theory_witness.pair
    s = build_superset_scenario(p)
    f = ungn(theory_witness.payload.call2(s.i, s.j))
    assert isinstance(f, Pred) and f.t.base is None


def test_broken_witness_fails_against_nuclei():
    kp, w = kleene_pair()
    broken = escape_witness(kp, 0)  # a constant is no EI witness for the Kleene pair
    tw = ei_theory_witness(broken)
    p = tw.pair
    s = build_superset_scenario(p, {gn(parse("P(0)"))}, ())
    assert check_witness(tw, s, 10**5).failed


def test_independent_sentence_and_broken_control():
    eo = finite_pair({0, 2, 4}, {1, 3})
    good = escape_witness(eo, 5)
    f = independent_sentence(ei_theory_witness(good), LOOP, LOOP)
    assert f == Pred(num(5))
    assert not atomic_oracle({0, 2, 4}, {1, 3}, f) and not atomic_oracle({0, 2, 4}, {1, 3}, Not(f))
    bad = independent_sentence(ei_theory_witness(escape_witness(eo, 2)), LOOP, LOOP)
    assert atomic_oracle({0, 2, 4}, {1, 3}, bad)


def test_ei_theory_witness_needs_ei():
    with pytest.raises(ValueError):
        ei_theory_witness(kleene_pair()[1])


# -- one equivalence relation -------------------------------------------------------


IDENT = encode_program([INC(1)])
SLOW = encode_program([INC(1), INC(1), INC(1)])


def test_shoenfield_pair_examples():
    p = shoenfield_pair(IDENT)
    assert p.decide(0, pair(IDENT, LOOP), 10**4) is True
    assert p.decide(0, pair(7, IDENT), 10**4) is False  # a tie goes nowhere
    assert p.decide(1, pair(7, IDENT), 10**4) is False
    assert isinstance(run(p.a.idx, pair(IDENT, LOOP), 10**5), Halted)
    q = shoenfield_pair(SLOW)  # now the second program wins the race
    assert q.decide(1, pair(7, IDENT), 10**4) is True
    assert isinstance(run(q.b.idx, pair(7, IDENT), 10**5), Halted)


def test_shoenfield_pair_of_empty_index():
    # e = LOOP never halts, so no x enters the first side
    p = shoenfield_pair(LOOP)
    assert not any(isinstance(run(p.a.idx, x, 10**4), Halted) for x in range(100))


def test_sentence_shapes():
    f0, g0, u0 = shoenfield_sentences(0)
    assert f0 == phi(0) and g0 == psi(0) and u0 == upsilon(0)
    # phi(0): a class with exactly one element
    assert gn(phi(0), "LR") == gn(parse("ex x.all w.(R(x,w) -> w=x)"), "LR")
    sizes = [sum(size(f) for f in shoenfield_sentences(n)) for n in range(1, 21)]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert sizes[-1] < 40 * 20**3


@pytest.mark.parametrize("n", range(0, 12))
def test_classification(n):
    assert classify_shoenfield_code(gn(phi(n), "LR")) == 2 + pair(0, n)
    assert classify_shoenfield_code(gn(Not(phi(n)), "LR")) == 2 + pair(1, n)
    assert classify_shoenfield_code(gn(psi(n), "LR")) == 1
    assert classify_shoenfield_code(gn(upsilon(n), "LR")) == 1


def test_classification_rejects_others():
    for f in equivalence_axioms():
        assert classify_shoenfield_code(gn(f, "LR")) == 1
    for c in range(200):
        if classify_shoenfield_code(c) == 0:
            assert all(gn(g, "LR") != c for n in range(6) for g in (phi(n), psi(n), upsilon(n)))


def test_shoenfield_theory_axioms():
    t = shoenfield_theory(finite_set_index({1, 4}), finite_set_index({2}))
    yes = [phi(1), phi(4), Not(phi(2)), psi(3), upsilon(2), *equivalence_axioms()]
    no = [phi(2), phi(3), Not(phi(1)), Not(phi(3))]
    for f in yes:
        assert t.is_axiom(gn(f, "LR"), 10**4)[0] is True
    for f in no:
        assert t.is_axiom(gn(f, "LR"), 10**4)[0] is not True
    assert isinstance(run(t.axioms.idx, gn(phi(4), "LR"), 10**6), Halted)


def test_reduction_index_is_total_and_matches():
    ri = ri_reduction_index()
    for e in range(20):
        assert isinstance(run(ri.idx, e, 10**5), Halted)
    p = shoenfield_pair(IDENT)
    t = shoenfield_theory(p.a, p.b)
    assert ri(IDENT) == t.axioms.idx == run(ri.idx, IDENT, 10**5).value
