from hypothesis import given
from hypothesis import strategies as st

from effinsep.index_algebra import (
    ALL,
    LOOP,
    Transformer,
    compose_idx,
    const_fn,
    curry,
    finite_members,
    finite_set_index,
    intersection,
    pad,
    preimage_transformer,
    singleton,
    smn_fn,
    swap_program,
    union,
    universal,
)
from effinsep.index_algebra.expr import Call, Const, Fst, Pair, Smn, Snd, Var, evaluate, lam, tup
from effinsep.kernel.machine import INC, Halted, encode_program, run, smn
from effinsep.kernel.numbering import pair

small_sets = st.frozensets(st.integers(0, 40), max_size=6)
FUEL = 10**5


def member(e, x, fuel=FUEL):
    return isinstance(run(e, x, fuel), Halted)


def transformer_agrees(t: Transformer, x: int) -> bool:
    out = run(t.idx, x, 10**6)
    return isinstance(out, Halted) and out.value == t(x)


@given(small_sets)
def test_finite_set_index_and_table(s):
    e = finite_set_index(s).idx
    assert finite_members(e) == s
    for x in range(45):
        assert member(e, x) == (x in s)


def test_finite_members_rejects_other_programs():
    assert finite_members(swap_program()) is None
    assert finite_members(ALL) is None
    assert finite_members(LOOP) == frozenset()


@given(small_sets, small_sets)
def test_union_and_intersection(a, b):
    ea, eb = finite_set_index(a).idx, finite_set_index(b).idx
    u, i = union(ea, eb).idx, intersection(ea, eb).idx
    for x in range(42):
        assert member(u, x) == (x in a or x in b)
        if x in a and x in b:
            assert member(i, x)
    for x in sorted(a ^ b)[:3]:
        assert not member(i, x, 2000)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_swap_and_universal(a, b):
    assert run(swap_program(), pair(a, b), 100).value == pair(b, a)
    inc = encode_program([INC(0)])
    assert run(universal(), pair(inc, a), 100).value == a + 1


@given(st.integers(0, 100))
def test_const_singleton_and_pad(c):
    assert transformer_agrees(const_fn(c), 7)
    assert member(singleton(c).idx, c)
    assert not member(singleton(c).idx, c + 1, 2000)
    inc = encode_program([INC(0)])
    assert pad(inc) != inc and run(pad(inc), c, 100).value == c + 1


@given(st.integers(0, 50))
def test_curry_and_smn_fn(a):
    inc = encode_program([INC(0)])
    assert transformer_agrees(curry(inc, a), 3)
    assert transformer_agrees(smn_fn(inc), a)
    assert curry(inc, a)(3) == smn(inc, pair(a, 3))


def test_compose():
    inc = encode_program([INC(0)])
    assert run(compose_idx(inc, inc), 5, 100).value == 7


@given(small_sets)
def test_preimage_law(s):
    double = encode_program([])  # identity
    h = preimage_transformer(double)
    i = finite_set_index(s).idx
    hi = h(i)
    assert transformer_agrees(h, i)
    for x in range(42):
        assert member(hi, x) == (x in s)


def test_preimage_of_empty_set():
    h = preimage_transformer(encode_program([INC(0)]))
    assert not any(member(h(LOOP), x, 2000) for x in range(50))


@given(st.integers(0, 10**4), st.integers(0, 10**4))
def test_expr_backends_agree(a, b):
    inc = Transformer(encode_program([INC(0)]), lambda n: n + 1, "inc")
    body = tup(Snd(Var("v")), Call(inc, Fst(Var("v"))), Smn(Const(5), Var("v")), Pair(Const(1), Var("v")))
    t = lam("v", body)
    v = pair(a, b)
    assert t(v) == evaluate(body, {"v": v})
    assert transformer_agrees(t, v)
