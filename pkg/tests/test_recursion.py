import pytest

from effinsep.index_algebra import ALL, finite_set_index, swap_program
from effinsep.kernel.machine import Halted, run
from effinsep.kernel.numbering import pair, tuple_code
from effinsep.recursion import (
    ReRelation,
    always,
    cross_recursion,
    equals,
    in_set,
    in_w,
    kleene_fixed_point,
    never,
    param_recursion,
    scenario_recursion,
    sdrt,
)

FUEL = 10**6
XS = range(50)


def member(e, x):
    return isinstance(run(e, x, FUEL), Halted)


def holds(rel: ReRelation, *args):
    return member(rel.prog, tuple_code(*args))


def agrees(idx, expected: set, extra=()):
    """Membership of idx matches ``expected`` on x < 50 and the extra points."""
    return all(member(idx, x) == (x in expected) for x in [*XS, *extra])


def test_kleene_fixed_point_quine():
    # F(n) = index of the constant-n program, so phi_n(x) = n
    from effinsep.index_algebra import smn_fn
    from effinsep.index_algebra.library import const_body

    n = kleene_fixed_point(smn_fn(const_body()))
    assert run(n, 3, FUEL).value == n


def test_relation_vocabulary():
    assert holds(equals(3, "x", "z"), 4, 0, 4)
    assert not holds(equals(3, "x", "z"), 4, 0, 5)
    assert holds(always(3), 1, 2, 3) and not holds(never(3), 1, 2, 3)
    s = finite_set_index({2})
    assert holds(in_set(3, "y", s), 0, 2, 0)
    assert holds(in_w(3, "x", "y"), 2, s.idx, 0)


SDRT_CASES = {
    "self-singleton": (equals(5, "x", "z1"), equals(5, "x", "z2")),
    "mutual quine": (equals(5, "x", "z2"), equals(5, "x", "z1")),
    "copy W_i and {j}": (in_w(5, "x", "y1"), equals(5, "x", "y2")),
}


@pytest.mark.parametrize("case", sorted(SDRT_CASES))
def test_sdrt_contract(case):
    R1, R2 = SDRT_CASES[case]
    t1, t2 = sdrt(R1, R2)
    i, j = finite_set_index({3, 7}).idx, 11
    a, b = t1.call2(i, j), t2.call2(i, j)
    for x in [*XS, a, b]:
        assert member(a, x) == holds(R1, x, i, j, a, b)
        assert member(b, x) == holds(R2, x, i, j, a, b)
    expected = {
        "self-singleton": ({a}, {b}),
        "mutual quine": ({b}, {a}),
        "copy W_i and {j}": ({3, 7}, {11}),
    }[case]
    assert agrees(a, expected[0], (a, b)) and agrees(b, expected[1], (a, b))


CROSS_CASES = {
    "mutual quine": (equals(4, "x", "z2"), equals(4, "x", "z1")),
    "self-singletons": (equals(4, "x", "z1"), equals(4, "x", "z2")),
    "cross copies": (in_w(4, "x", "y"), in_w(4, "x", "y")),
}


@pytest.mark.parametrize("case", sorted(CROSS_CASES))
def test_cross_recursion_contract(case):
    M1, M2 = CROSS_CASES[case]
    t1, t2 = cross_recursion(M1, M2)
    y1, y2 = finite_set_index({1}).idx, finite_set_index({2, 4}).idx
    a, b = t1.call2(y1, y2), t2.call2(y1, y2)
    for x in [*XS, a, b]:
        assert member(a, x) == holds(M1, x, y2, a, b)
        assert member(b, x) == holds(M2, x, y1, a, b)
    expected = {
        "mutual quine": ({b}, {a}),
        "self-singletons": ({a}, {b}),
        "cross copies": ({2, 4}, {1}),
    }[case]
    assert agrees(a, expected[0], (a, b)) and agrees(b, expected[1], (a, b))


PARAM_CASES = {
    "value of g": (ALL, equals(3, "x", "z"), equals(3, "x", "y")),
    "swapped value": (swap_program(), equals(3, "x", "z"), equals(3, "x", "z")),
    "copy W_y": (ALL, in_w(3, "x", "y"), never(3)),
}


@pytest.mark.parametrize("case", sorted(PARAM_CASES))
def test_param_recursion_contract(case):
    g, M1, M2 = PARAM_CASES[case]
    f1, f2 = param_recursion(M1, M2, g)
    y = finite_set_index({5, 6}).idx if case == "copy W_y" else 9
    a, b = f1(y), f2(y)
    z = run(g, pair(a, b), FUEL).value
    for x in [*XS, z]:
        assert member(a, x) == holds(M1, x, y, z)
        assert member(b, x) == holds(M2, x, y, z)
    expected = {
        "value of g": ({z}, {9}),
        "swapped value": ({z}, {z}),
        "copy W_y": ({5, 6}, set()),
    }[case]
    assert agrees(a, expected[0], (z,)) and agrees(b, expected[1], (z,))


@pytest.mark.parametrize("y", [0, 1, 2])
def test_scenario_recursion_contract(y):
    A, B = finite_set_index({0}), finite_set_index({1})
    C, D = finite_set_index({10, 12}), finite_set_index({13})
    f1, f2 = scenario_recursion(A, B, C, D, ALL)
    a, b = f1(y), f2(y)
    c = pair(a, b)
    left, right = {10, 12}, {13}
    if y == 0:
        right = right | {c}
    elif y == 1:
        left = left | {c}
    assert agrees(a, left, (c,)) and agrees(b, right, (c,))


def test_arity_errors():
    with pytest.raises(ValueError):
        sdrt(equals(4, "x", "y"), equals(5, "x", "z1"))
    with pytest.raises(ValueError):
        equals(4, "x", "y") | equals(5, "x", "z1")
