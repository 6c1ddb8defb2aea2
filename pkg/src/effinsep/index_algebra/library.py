"""Library of fixed model programs and the transformers built from them.

Every transformer here is a genuine program index.  Most also carry a host
callable computing the same total function directly (``Transformer.host``);
the test-suite checks the two agree, and callers use the host path to avoid
simulating index arithmetic step by step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from typing import Callable, Iterable

from ..kernel.machine import (
    Halted,
    Index,
    Instr,
    Op,
    decode_program,
    encode_program,
    run,
    smn,
)
from ..kernel.numbering import label, pair, unpair
from .builder import END, Asm

ALL: Index = 0  # empty program: identity, halts on every input
LOOP: Index = encode_program([Instr(Op.DECJZ, (1, 0))])  # diverges everywhere

TOTAL_FUEL = 10**7


class Diverged(RuntimeError):
    """A computation expected to be total ran out of fuel."""


def run_total(e: Index, x: int, fuel: int = TOTAL_FUEL) -> int:
    out = run(e, x, fuel)
    if not isinstance(out, Halted):
        raise Diverged(f"program {label(e)} did not halt on {x} within {fuel} steps")
    return out.value


@dataclass(frozen=True)
class Transformer:
    """A total function given by a program index plus a host shortcut."""

    idx: Index
    host: Callable[[int], int] | None = field(default=None, compare=False)
    note: str = field(default="", compare=False)

    def __call__(self, x: int) -> int:
        if self.host is not None:
            return self.host(x)
        return run_total(self.idx, x)

    def call2(self, a: int, b: int) -> int:
        return self(pair(a, b))


@dataclass(frozen=True)
class ReSet:
    """W_idx with a human-readable note on how it was built."""

    idx: Index
    provenance: str = field(default="", compare=False)


def as_transformer(g: Index | Transformer) -> Transformer:
    return g if isinstance(g, Transformer) else Transformer(g)


# -- fixed programs ------------------------------------------------------------


@cache
def universal() -> Index:
    """UNIV on pair(e, x) behaves as e on x."""
    a = Asm()
    e, x = a.regs(2)
    a.unpair(e, x, 0)
    a.eval(0, e, x)
    return a.index()


@cache
def swap_program() -> Index:
    """pair(a, b) -> pair(b, a)."""
    a = Asm()
    p, q = a.regs(2)
    a.unpair(p, q, 0)
    a.pair(0, q, p)
    return a.index()


@cache
def preimage_body() -> Index:
    """On pair(pair(g, i), x): compute y = g(x), then run i on y."""
    a = Asm()
    r = a.unpack((("g", "i"), "x"), 0)
    y = a.reg()
    a.eval(y, r["g"], r["x"])
    a.eval(0, r["i"], y)
    return a.index()


@cache
def or_body() -> Index:
    """On pair(pair(p, q), x): halt iff p or q halts on x."""
    a = Asm()
    r = a.unpack((("p", "q"), "x"), 0)
    a.either(r["p"], r["x"], r["q"], r["x"], END)
    return a.index()


@cache
def and_body() -> Index:
    """On pair(pair(p, q), x): halt iff both p and q halt on x."""
    a = Asm()
    r = a.unpack((("p", "q"), "x"), 0)
    t = a.reg()
    a.eval(t, r["p"], r["x"])
    a.eval(t, r["q"], r["x"])
    a.mov(0, r["x"])
    return a.index()


@cache
def eq_body() -> Index:
    """On pair(c, x): halt iff x == c."""
    a = Asm()
    r = a.unpack(("c", "x"), 0)
    a.jeq(r["c"], r["x"], END)
    a.diverge()
    return a.index()


@cache
def const_body() -> Index:
    """On pair(c, x): return c."""
    a = Asm()
    r = a.unpack(("c", "x"), 0)
    a.mov(0, r["c"])
    return a.index()


@cache
def curry_body() -> Index:
    """On pair(pair(K, a), x): return smn(K, pair(a, x))."""
    a = Asm()
    r = a.unpack((("K", "a"), "x"), 0)
    t = a.reg()
    a.pair(t, r["a"], r["x"])
    a.smn(0, r["K"], t)
    return a.index()


# -- finite sets -----------------------------------------------------------------


def finite_set_index(members: Iterable[int]) -> ReSet:
    """W = members exactly: halts iff the input is listed in a literal table."""
    s = sorted(set(members))
    if not s:
        return ReSet(LOOP, "finite {}")
    a = Asm()
    t = a.reg()
    for m in s:
        a.set(t, m)
        a.jeq(0, t, END)
    a.diverge()
    return ReSet(a.index(), "finite {" + ",".join(map(str, s)) + "}")


def finite_members(e: Index) -> frozenset[int] | None:
    """Recover the table of a program shaped like ``finite_set_index`` output.

    Returns None for anything else.  Used to decide non-membership exactly.
    """
    if e == LOOP:
        return frozenset()
    ins = decode_program(e).instrs
    n = len(ins)
    if n < 3 or n % 2 == 0:
        return None
    last = ins[-1]
    if last.op != Op.DECJZ or last.args[1] != n - 1:
        return None
    t = None
    out = []
    for k in range(0, n - 1, 2):
        s, j = ins[k], ins[k + 1]
        if s.op != Op.SET or j.op != Op.JEQ:
            return None
        if t is None:
            t = s.args[0]
        if s.args[0] != t or t in (0, last.args[0]):
            return None
        if j.args != (0, t, n):
            return None
        out.append(s.args[1])
    if last.args[0] == t:
        return None
    return frozenset(out)


# -- transformers ------------------------------------------------------------------


def curry(K: Index, a: int) -> Transformer:
    """Program for ``x -> smn(K, pair(a, x))``."""
    idx = smn(curry_body(), pair(K, a))
    return Transformer(idx, lambda x: smn(K, pair(a, x)), f"curry({label(K)},{label(a)})")


def smn_fn(K: Index) -> Transformer:
    """Program for ``x -> smn(K, x)``."""
    a = Asm()
    k = a.const(K)
    a.smn(0, k, 0)
    return Transformer(a.index(), lambda x: smn(K, x), f"smn({label(K)}, .)")


def const_fn(c: int) -> Transformer:
    return Transformer(smn(const_body(), c), lambda x: c, f"const {label(c)}")


def singleton(c: int) -> ReSet:
    """W = {c}, by comparison rather than a table (c may be huge)."""
    return ReSet(smn(eq_body(), c), f"singleton {label(c)}")


def union(p: Index, q: Index) -> ReSet:
    return ReSet(smn(or_body(), pair(p, q)), f"union({label(p)},{label(q)})")


def intersection(p: Index, q: Index) -> ReSet:
    return ReSet(smn(and_body(), pair(p, q)), f"intersection({label(p)},{label(q)})")


@cache
def compose_body() -> Index:
    """On pair(pair(g, f), x): return g(f(x))."""
    a = Asm()
    r = a.unpack((("g", "f"), "x"), 0)
    t = a.reg()
    a.eval(t, r["f"], r["x"])
    a.eval(0, r["g"], t)
    return a.index()


def compose_idx(g: Index, f: Index) -> Index:
    """x -> g(f(x))."""
    return smn(compose_body(), pair(g, f))


def pad(e: Index) -> Index:
    """An index behaving as ``e`` but distinct from it."""
    p = encode_program([Instr(Op.SET, (1, e)), Instr(Op.EVAL, (0, 1, 0))])
    assert p != e
    return p


def preimage_transformer(g: Index | Transformer) -> Transformer:
    """h with W_{h(i)} = g^{-1}[W_i], for total g.

    If g diverges on some x then x silently drops out of every W_{h(i)}.
    """
    gi = g.idx if isinstance(g, Transformer) else g
    t = curry(preimage_body(), gi)
    return Transformer(t.idx, t.host, f"preimage along {label(gi)}")


def pairs_fn(fn: Callable[[int, int], int]) -> Callable[[int], int]:
    """Lift a host binary function to one reading a Cantor pair."""

    def h(n: int) -> int:
        i, j = unpair(n)
        return fn(i, j)

    return h
