import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from effinsep.kernel import _fast
from effinsep.kernel import machine as M
from effinsep.kernel.asm import format_program, parse_program
from effinsep.kernel.machine import (
    DECJZ,
    INC,
    Halted,
    Instr,
    Op,
    OutOfFuel,
    decode_program,
    encode_program,
    kleene_t,
    run,
    smn,
)
from effinsep.kernel.numbering import (
    gpair,
    gunpair,
    pair,
    seq_code,
    seq_decode,
    tuple_code,
    unpair,
    untuple,
)

naturals = st.integers(min_value=0, max_value=10**6)
big = st.integers(min_value=0, max_value=1 << 4000)


@given(naturals, naturals)
def test_pair_roundtrip(a, b):
    assert unpair(pair(a, b)) == (a, b)


@given(big, big)
def test_pair_roundtrip_big(a, b):
    assert unpair(pair(a, b)) == (a, b)


@given(big)
def test_unpair_is_onto(n):
    assert pair(*unpair(n)) == n


def test_pair_small_values():
    assert [pair(0, 0), pair(1, 0), pair(0, 1), pair(2, 0)] == [0, 1, 2, 3]


@given(naturals, naturals)
def test_graded_pair_roundtrip(a, b):
    assert gunpair(gpair(a, b)) == (a, b)


@given(st.lists(naturals, max_size=6))
def test_sequence_code_roundtrip(xs):
    assert seq_decode(seq_code(xs)) == xs


@given(st.lists(naturals, min_size=1, max_size=5))
def test_tuple_roundtrip(xs):
    assert untuple(tuple_code(*xs), len(xs)) == tuple(xs)


@given(st.integers(min_value=0, max_value=1 << 300))
def test_program_numbering_bijective(n):
    assert encode_program(decode_program(n)) == n


def test_known_codes():
    assert encode_program([]) == 0
    assert encode_program([INC(1)]) == 24


def test_asm_roundtrip():
    prog = decode_program(123456789)
    assert parse_program(format_program(prog)) == prog


# -- semantics --------------------------------------------------------------


def prog(*instrs):
    return encode_program(list(instrs))


def test_empty_program_is_identity():
    assert run(0, 7, 10) == Halted(7, 0)


def test_inc_and_loop():
    assert run(prog(INC(0), INC(0)), 3, 10) == Halted(5, 2)
    loop = prog(DECJZ(1, 0))
    assert run(loop, 0, 1000) == OutOfFuel(1000)


def test_decjz_moves_register():
    # r1 := r0 by counting down r0
    p = prog(DECJZ(0, 3), INC(1), DECJZ(2, 0), Instr(Op.MOV, (0, 1)))
    assert run(p, 4, 100).value == 4


def test_pair_and_eval_ops():
    p = prog(Instr(Op.SET, (1, 3)), Instr(Op.PAIR, (0, 1, 0)))
    assert run(p, 5, 10).value == pair(3, 5)
    q = prog(Instr(Op.UNPAIR, (1, 2, 0)), Instr(Op.ADD, (0, 1, 2)))
    assert run(q, pair(4, 9), 10).value == 13
    inc = prog(INC(0))
    ev = prog(Instr(Op.SET, (1, inc)), Instr(Op.EVAL, (0, 1, 0)))
    out = run(ev, 10, 100)
    assert out.value == 11 and out.steps == 3


def test_clock_reports_steps_plus_one():
    two = prog(INC(0), INC(0))
    c = prog(Instr(Op.SET, (1, two)), Instr(Op.SET, (2, 5)), Instr(Op.CLOCK, (0, 1, 0, 2)))
    assert run(c, 0, 100).value == 3
    tight = prog(Instr(Op.SET, (1, two)), Instr(Op.SET, (2, 1)), Instr(Op.CLOCK, (0, 1, 0, 2)))
    assert run(tight, 0, 100).value == 0


def test_nested_steps_share_one_budget():
    loop = prog(DECJZ(1, 0))
    ev = prog(Instr(Op.SET, (1, loop)), Instr(Op.EVAL, (0, 1, 0)))
    assert run(ev, 0, 500) == OutOfFuel(500)


def test_fuel_monotone():
    p = prog(INC(0), INC(0), INC(0))
    assert isinstance(run(p, 0, 2), OutOfFuel)
    assert run(p, 0, 3) == Halted(3, 3)
    assert run(p, 0, 30) == Halted(3, 3)


def test_kleene_t_unique_step():
    p = prog(INC(0), INC(0))
    hits = [y for y in range(10) if kleene_t(p, 0, y)]
    assert hits == [2]


@given(st.integers(0, 50), st.integers(0, 50))
def test_smn_law(a, x):
    add = prog(Instr(Op.UNPAIR, (1, 2, 0)), Instr(Op.ADD, (0, 1, 2)))
    assert run(smn(add, a), x, 100).value == a + x


@given(st.integers(0, 1 << 3000), st.integers(0, 9), st.integers(0, 40))
def test_smn_law_on_big_lopsided_pairs(w, k, x):
    add = prog(Instr(Op.UNPAIR, (1, 2, 0)), Instr(Op.ADD, (0, 1, 2)))
    a = pair(k, pair(w, 3))
    e = smn(add, a)
    # stored as components, not as the doubled Cantor code
    assert e.bit_length() < w.bit_length() + 400
    assert run(e, x, 10**5).value == a + x


@given(st.integers(0, 1 << 600), st.integers(0, 1 << 600), st.integers(0, 1 << 600), st.integers(0, 1 << 600))
def test_smn_injective(e1, a1, e2, a2):
    if (e1, a1) != (e2, a2):
        assert smn(e1, a1) != smn(e2, a2)
    assert smn(e1, pair(a1, 5)) != smn(e1, pair(a1, 6))


# -- exact memo and compiled loop -------------------------------------------------------


def random_program(rng: random.Random, n: int) -> int:
    ops = []
    for _ in range(n):
        r = rng.randint(0, 3)
        if rng.random() < 0.5:
            ops.append(INC(r))
        else:
            ops.append(DECJZ(r, rng.randint(0, n)))
    return encode_program(ops)


def _outcome(e, x, fuel, memo, fast):
    saved = M.MEMO, _fast.COMPILED
    M.MEMO, _fast.COMPILED = memo, fast and saved[1]
    M.clear_memo()
    try:
        return run(e, x, fuel)
    finally:
        M.MEMO, _fast.COMPILED = saved


@given(st.integers(0, 2**32), st.integers(0, 40), st.sampled_from([50, 300, 2000]))
def test_memo_and_fast_path_change_nothing(seed, x, fuel):
    e = random_program(random.Random(seed), random.Random(seed).randint(1, 8))
    ref = _outcome(e, x, fuel, memo=False, fast=False)
    assert _outcome(e, x, fuel, memo=True, fast=False) == ref
    assert _outcome(e, x, fuel, memo=True, fast=True) == ref


def test_memo_repeated_queries_agree():
    from effinsep.pairs import _kleene_side

    e = _kleene_side(0)
    x = pair(prog(INC(0)), prog(DECJZ(1, 0)))
    fuels = [40, 400, 4000]
    M.clear_memo()
    first = [run(e, x, f) for f in fuels]
    again = [run(e, x, f) for f in reversed(fuels)][::-1]
    assert first == again


@pytest.mark.parametrize("loop", [_fast._core_loop, _fast.core_loop])
def test_core_loop_bails_out_before_overflow(loop):
    table = _fast.core_table(((0, 0, 0, 0, 0),))
    regs = np.array([_fast.LIMIT], dtype=np.int64)
    status, pc, g = loop(table, regs, 0, 0, 10)
    assert status == _fast.OVERFLOW and pc == 0 and g == 0


def test_large_input_takes_the_exact_path():
    p = prog(*[INC(0)] * 3)
    x = 1 << 70
    assert run(p, x, 1000) == Halted(x + 3, 3)


def test_core_table_rejects_extended_ops():
    code, _ = M._compile(prog(Instr(Op.SET, (1, 2))))
    assert _fast.core_table(code) is None


def test_numpy_fallback_matches_compiled():
    rng = random.Random(7)
    for _ in range(50):
        e = random_program(rng, rng.randint(1, 8))
        code, nregs = M._compile(e)
        table = _fast.core_table(code)
        outs = []
        for loop in (_fast._core_loop, _fast.core_loop):
            regs = np.zeros(nregs, dtype=np.int64)
            regs[0] = 5
            outs.append((loop(table, regs, 0, 0, 700), list(regs)))
        assert outs[0] == outs[1]
