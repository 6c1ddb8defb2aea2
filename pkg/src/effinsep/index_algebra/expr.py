"""A tiny first-order language of index arithmetic with two back ends.

An expression built from constants, argument variables, pairing, projections,
``smn`` and calls of total programs can be *evaluated* on the host or
*compiled* to a model program.  Transformers defined this way therefore carry
both an authoritative index and a fast path that agrees with it by
construction of the compiler (the test-suite checks it anyway).

``Call`` runs a known ``Transformer`` (host shortcut available); ``Apply``
runs an index computed at run time and always simulates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..kernel.machine import Index, smn
from ..kernel.numbering import pair, unpair
from .builder import Asm
from .library import Transformer, run_total

Pattern = Union[str, tuple]


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: int


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Pair(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Fst(Expr):
    n: Expr


@dataclass(frozen=True)
class Snd(Expr):
    n: Expr


@dataclass(frozen=True)
class Smn(Expr):
    e: Expr
    a: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: Transformer
    x: Expr


@dataclass(frozen=True)
class Apply(Expr):
    e: Expr
    x: Expr


def lift(v: Expr | int) -> Expr:
    return v if isinstance(v, Expr) else Const(v)


def tup(*xs: Expr | int) -> Expr:
    """Right-nested pairing of expressions."""
    acc = lift(xs[-1])
    for x in reversed(xs[:-1]):
        acc = Pair(lift(x), acc)
    return acc


# -- host back end ---------------------------------------------------------------


def evaluate(ex: Expr, env: dict[str, int]) -> int:
    memo: dict[Expr, int] = {}

    def ev(e: Expr) -> int:
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Var):
            return env[e.name]
        got = memo.get(e)
        if got is not None:
            return got
        if isinstance(e, Pair):
            v = pair(ev(e.a), ev(e.b))
        elif isinstance(e, Fst):
            v = unpair(ev(e.n))[0]
        elif isinstance(e, Snd):
            v = unpair(ev(e.n))[1]
        elif isinstance(e, Smn):
            v = smn(ev(e.e), ev(e.a))
        elif isinstance(e, Call):
            v = e.fn(ev(e.x))
        elif isinstance(e, Apply):
            v = run_total(ev(e.e), ev(e.x))
        else:
            raise TypeError(f"not an expression: {e!r}")
        memo[e] = v
        return v

    return ev(ex)


def bind(pattern: Pattern, value: int, env: dict[str, int] | None = None) -> dict[str, int]:
    env = {} if env is None else env
    if isinstance(pattern, str):
        env[pattern] = value
    else:
        a, b = unpair(value)
        bind(pattern[0], a, env)
        bind(pattern[1], b, env)
    return env


# -- model back end ----------------------------------------------------------------


def compile_expr(ex: Expr, pattern: Pattern) -> Index:
    """Program that destructures its input per ``pattern`` and returns ``ex``."""
    a = Asm()
    regs = a.unpack(pattern, 0)
    memo: dict[Expr, int] = {}

    def go(e: Expr) -> int:
        if isinstance(e, Var):
            return regs[e.name]
        got = memo.get(e)
        if got is not None:
            return got
        if isinstance(e, Const):
            r = a.const(e.value)
        elif isinstance(e, Pair):
            x, y = go(e.a), go(e.b)
            r = a.reg()
            a.pair(r, x, y)
        elif isinstance(e, (Fst, Snd)):
            n = go(e.n)
            r, other = a.regs(2)
            if isinstance(e, Fst):
                a.unpair(r, other, n)
            else:
                a.unpair(other, r, n)
        elif isinstance(e, Smn):
            x, y = go(e.e), go(e.a)
            r = a.reg()
            a.smn(r, x, y)
        elif isinstance(e, Call):
            x = go(e.x)
            f = go(Const(e.fn.idx))
            r = a.reg()
            a.eval(r, f, x)
        elif isinstance(e, Apply):
            f, x = go(e.e), go(e.x)
            r = a.reg()
            a.eval(r, f, x)
        else:
            raise TypeError(f"not an expression: {e!r}")
        memo[e] = r
        return r

    a.mov(0, go(ex))
    return a.index()


def lam(pattern: Pattern, body: Expr, note: str = "") -> Transformer:
    """The total function ``pattern -> body`` as program plus host path."""
    idx = compile_expr(body, pattern)
    return Transformer(idx, lambda n: evaluate(body, bind(pattern, n)), note)


@dataclass(frozen=True)
class Closure:
    """``arg -> body`` with parameters fixed later through ``smn``.

    The compiled program reads pair(params, arg); instantiating a closure at
    concrete parameter values specializes that program.
    """

    params: Pattern
    arg: Pattern
    body: Expr
    note: str = ""

    @property
    def prog(self) -> Index:
        return _closure_prog(self)

    def instance(self, values: int) -> Transformer:
        """Instantiate at the (already paired) parameter values."""
        env = bind(self.params, values)
        body, arg = self.body, self.arg
        return Transformer(
            smn(self.prog, values),
            lambda n: evaluate(body, bind(arg, n, dict(env))),
            self.note,
        )

    def instance_expr(self, values: Expr) -> Expr:
        return Smn(Const(self.prog), values)


_progs: dict[Closure, Index] = {}


def _closure_prog(c: Closure) -> Index:
    got = _progs.get(c)
    if got is None:
        got = _progs[c] = compile_expr(c.body, (c.params, c.arg))
    return got


X, Y, I, J = Var("x"), Var("y"), Var("i"), Var("j")
