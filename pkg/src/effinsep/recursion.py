"""Fixed-point constructions: Kleene's recursion theorem and the double forms.

An RE relation is a program that halts on the right-nested Cantor tuple of its
arguments exactly when the relation holds.  Argument names by arity:

* 5: ``x, y1, y2, z1, z2``
* 4: ``x, y, z1, z2``
* 3: ``x, y, z``

Every construction is written once as an index expression over its inputs
(the ``*_expr`` functions) so that callers needing it *inside* the model,
such as uniformizers that build reductions from pair indices, compile the very
same recipe the host-side API evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Callable

from .index_algebra import Asm, ReSet, Transformer, as_transformer
from .index_algebra.expr import Closure, Const, Expr, Pair, Smn, Var, evaluate, lift
from .index_algebra.library import and_body, curry_body, or_body
from .kernel.machine import Index
from .kernel.numbering import label

ARGS: dict[int, tuple[str, ...]] = {
    5: ("x", "y1", "y2", "z1", "z2"),
    4: ("x", "y", "z1", "z2"),
    3: ("x", "y", "z"),
}


def _nested(names: tuple[str, ...]):
    pat = names[-1]
    for n in reversed(names[:-1]):
        pat = (n, pat)
    return pat


@dataclass(frozen=True)
class ReRelation:
    arity: int
    prog: Index
    note: str = ""

    def __or__(self, other: "ReRelation") -> "ReRelation":
        _same_arity(self, other)
        return ReRelation(self.arity, evaluate(union_expr(self.prog, other.prog), {}), f"({self.note} or {other.note})")

    def __and__(self, other: "ReRelation") -> "ReRelation":
        _same_arity(self, other)
        return ReRelation(self.arity, evaluate(inter_expr(self.prog, other.prog), {}), f"({self.note} and {other.note})")


def _same_arity(a: ReRelation, b: ReRelation) -> None:
    if a.arity != b.arity:
        raise ValueError(f"arity mismatch: {a.arity} vs {b.arity}")


def union_expr(p: Expr | int, q: Expr | int) -> Expr:
    return Smn(Const(or_body()), Pair(lift(p), lift(q)))


def inter_expr(p: Expr | int, q: Expr | int) -> Expr:
    return Smn(Const(and_body()), Pair(lift(p), lift(q)))


Emit = Callable[[Asm, dict[str, int]], None]


@dataclass(frozen=True)
class RelTemplate:
    """A relation whose program also reads parameters: input pair(params, args)."""

    arity: int
    prog: Index
    note: str = ""

    def bind(self, values: int) -> ReRelation:
        return ReRelation(self.arity, evaluate(self.bind_expr(Const(values)), {}), self.note)

    def bind_expr(self, values: Expr) -> Expr:
        return Smn(Const(self.prog), values)


def relation(arity: int, emit: Emit, note: str = "") -> ReRelation:
    """Build a relation program; ``emit`` gets the builder and argument registers.

    Falling off the end of the emitted code means the relation holds.
    """
    a = Asm()
    regs = a.unpack(_nested(ARGS[arity]), 0)
    emit(a, regs)
    return ReRelation(arity, a.index(), note)


def template(arity: int, params, emit: Emit, note: str = "") -> RelTemplate:
    a = Asm()
    regs = a.unpack((params, _nested(ARGS[arity])), 0)
    emit(a, regs)
    return RelTemplate(arity, a.index(), note)


# small vocabulary for writing relations


def never(arity: int) -> ReRelation:
    return relation(arity, lambda a, r: a.diverge(), "never")


def always(arity: int) -> ReRelation:
    return relation(arity, lambda a, r: None, "always")


def _emit_eq(u: str, v: str) -> Emit:
    def emit(a: Asm, r: dict[str, int]) -> None:
        ok = a.label()
        a.jeq(r[u], r[v], ok)
        a.diverge()
        a.mark(ok)

    return emit


def equals(arity: int, u: str, v: str) -> ReRelation:
    return _equals(arity, u, v)


@cache
def _equals(arity: int, u: str, v: str) -> ReRelation:
    return relation(arity, _emit_eq(u, v), f"{u} = {v}")


@cache
def in_set_template(arity: int, u: str) -> RelTemplate:
    """``u`` belongs to W_s for the parameter s."""

    def emit(a: Asm, r: dict[str, int]) -> None:
        t = a.reg()
        a.eval(t, r["s"], r[u])

    return template(arity, "s", emit, f"{u} in W_s")


def in_set(arity: int, u: str, s: ReSet | Index) -> ReRelation:
    idx = s.idx if isinstance(s, ReSet) else s
    rel = in_set_template(arity, u).bind(idx)
    return ReRelation(arity, rel.prog, f"{u} in W{label(idx)}")


def in_w(arity: int, u: str, v: str) -> ReRelation:
    """``u`` belongs to W_v where v is itself an argument."""

    def emit(a: Asm, r: dict[str, int]) -> None:
        t = a.reg()
        a.eval(t, r[v], r[u])

    return relation(arity, emit, f"{u} in W_{v}")


@cache
def equals_apply_template(arity: int, u: str, args: tuple[str, str]) -> RelTemplate:
    """``u = g(args)`` for the parameter g, a total binary program."""

    def emit(a: Asm, r: dict[str, int]) -> None:
        t, ok = a.reg(), a.label()
        a.pair(t, r[args[0]], r[args[1]])
        a.eval(t, r["g"], t)
        a.jeq(r[u], t, ok)
        a.diverge()
        a.mark(ok)

    return template(arity, "g", emit, f"{u} = g({args[0]},{args[1]})")


def equals_apply(arity: int, u: str, g: Index, args: tuple[str, str]) -> ReRelation:
    return equals_apply_template(arity, u, args).bind(g)


def _repack(a: Asm, regs: list[int]) -> int:
    t = a.reg()
    a.mov(t, regs[-1])
    for reg in reversed(regs[:-1]):
        a.pair(t, reg, t)
    return t


# -- Kleene's fixed point ------------------------------------------------------


@cache
def _d0() -> Index:
    """On pair(F, pair(y, x)): run phi_{F(smn(y, y))} on x."""
    a = Asm()
    r = a.unpack(("F", ("y", "x")), 0)
    u, v = a.regs(2)
    a.smn(u, r["y"], r["y"])
    a.eval(v, r["F"], u)
    a.eval(0, v, r["x"])
    return a.index()


def kfp_expr(F: Expr) -> Expr:
    d = Smn(Const(_d0()), F)
    return Smn(d, d)


def kleene_fixed_point(F: Index | Transformer) -> Index:
    """n with phi_n = phi_{F(n)}; F must be total.

    Should F diverge on the seed then n diverges everywhere.
    """
    f = F.idx if isinstance(F, Transformer) else F
    return evaluate(kfp_expr(Const(f)), {})


# -- strong double recursion ---------------------------------------------------


@cache
def _sdrt_body() -> Index:
    """On pair(pair(pair(R1, R2), m), pair(pair(b, w), x)).

    With z_k = smn(m, pair(k, w)) and w = pair(i, j), run R1 (b = 0) or R2
    on the tuple (x, i, j, z1, z2).
    """
    a = Asm()
    r = a.unpack(((("R1", "R2"), "m"), (("b", "w"), "x")), 0)
    z1, z2, i, j, t, one = a.regs(6)
    a.pair(t, a.zero, r["w"])
    a.smn(z1, r["m"], t)
    a.set(one, 1)
    a.pair(t, one, r["w"])
    a.smn(z2, r["m"], t)
    a.unpair(i, j, r["w"])
    t = _repack(a, [r["x"], i, j, z1, z2])
    second = a.label()
    a.jz(r["b"], second)
    a.eval(0, r["R2"], t)
    a.halt()
    a.mark(second)
    a.eval(0, r["R1"], t)
    return a.index()


def sdrt_core_expr(r1: Expr, r2: Expr) -> Expr:
    """Index n with t_k(i, j) = smn(n, pair(k - 1, pair(i, j)))."""
    F = Smn(Const(curry_body()), Pair(Const(_sdrt_body()), Pair(r1, r2)))
    return kfp_expr(F)


@cache
def _sdrt_core(r1: Index, r2: Index) -> Index:
    return evaluate(sdrt_core_expr(Const(r1), Const(r2)), {})


def _tag_closure(k: int) -> Closure:
    return Closure("n", "w", Smn(Var("n"), Pair(Const(k), Var("w"))), f"t{k + 1}")


def sdrt(R1: ReRelation, R2: ReRelation) -> tuple[Transformer, Transformer]:
    """t1, t2 (binary, pair-encoded) with W_{t_k(i,j)} = {x : R_k(x,i,j,t1(i,j),t2(i,j))}."""
    if R1.arity != 5 or R2.arity != 5:
        raise ValueError("sdrt takes two 5-ary relations")
    n = _sdrt_core(R1.prog, R2.prog)
    return _tag_closure(0).instance(n), _tag_closure(1).instance(n)


@cache
def _cross_adapter(k: int) -> Index:
    """On pair(M, (x, y1, y2, z1, z2)): run M on (x, y_{3-k}, z1, z2)."""

    def emit(a: Asm, r: dict[str, int]) -> None:
        y = r["y2"] if k == 0 else r["y1"]
        t = _repack(a, [r["x"], y, r["z1"], r["z2"]])
        a.eval(t, r["M"], t)

    return template(5, "M", emit).prog


def cross_recursion(M1: ReRelation, M2: ReRelation) -> tuple[Transformer, Transformer]:
    """W_{t1(y1,y2)} = {x : M1(x,y2,t1,t2)} and W_{t2(y1,y2)} = {x : M2(x,y1,t1,t2)}."""
    if M1.arity != 4 or M2.arity != 4:
        raise ValueError("cross_recursion takes two 4-ary relations")
    R1 = RelTemplate(5, _cross_adapter(0)).bind(M1.prog)
    R2 = RelTemplate(5, _cross_adapter(1)).bind(M2.prog)
    return sdrt(R1, R2)


@cache
def _param_adapter() -> RelTemplate:
    """On pair(pair(M, g), (x, y1, y2, z1, z2)): run M on (x, y1, g(z1, z2))."""

    def emit(a: Asm, r: dict[str, int]) -> None:
        v = a.reg()
        a.pair(v, r["z1"], r["z2"])
        a.eval(v, r["g"], v)
        t = _repack(a, [r["x"], r["y1"], v])
        a.eval(t, r["M"], t)

    return template(5, ("M", "g"), emit)


def param_core_expr(m1: Expr, m2: Expr, g: Expr) -> Expr:
    ad = _param_adapter()
    return sdrt_core_expr(ad.bind_expr(Pair(m1, g)), ad.bind_expr(Pair(m2, g)))


def param_closure(k: int) -> Closure:
    """y -> smn(n, pair(k, pair(y, 0))): f_{k+1} for the core index n."""
    return Closure("n", "y", Smn(Var("n"), Pair(Const(k), Pair(Var("y"), Const(0)))), f"f{k + 1}")


def param_recursion(
    M1: ReRelation, M2: ReRelation, g: Index | Transformer
) -> tuple[Transformer, Transformer]:
    """Unary f1, f2 with W_{f_k(y)} = {x : M_k(x, y, g(f1(y), f2(y)))}.

    Obtained from ``sdrt`` by feeding g(z1, z2) to M_k and fixing y2 = 0.
    """
    if M1.arity != 3 or M2.arity != 3:
        raise ValueError("param_recursion takes two 3-ary relations")
    gi = as_transformer(g).idx
    n = evaluate(param_core_expr(Const(M1.prog), Const(M2.prog), Const(gi)), {})
    return param_closure(0).instance(n), param_closure(1).instance(n)


def scenario_relations_expr(A: Expr, B: Expr, C: Expr, D: Expr) -> tuple[Expr, Expr]:
    """M1 = x in C or (y in B and x = z); M2 = x in D or (y in A and x = z)."""
    inx, iny = in_set_template(3, "x"), in_set_template(3, "y")
    eq = Const(equals(3, "x", "z").prog)
    m1 = union_expr(inx.bind_expr(C), inter_expr(iny.bind_expr(B), eq))
    m2 = union_expr(inx.bind_expr(D), inter_expr(iny.bind_expr(A), eq))
    return m1, m2


def scenario_recursion(
    A: ReSet, B: ReSet, C: ReSet, D: ReSet, g: Index | Transformer
) -> tuple[Transformer, Transformer]:
    """f1, f2 with, writing c = g(f1(y), f2(y)):

    * y in A: W_{f1(y)} = C and W_{f2(y)} = D + {c}
    * y in B: W_{f1(y)} = C + {c} and W_{f2(y)} = D
    * otherwise W_{f1(y)} = C and W_{f2(y)} = D

    A and B must be disjoint.
    """
    m1, m2 = scenario_relations_expr(*(Const(s.idx) for s in (A, B, C, D)))
    M1 = ReRelation(3, evaluate(m1, {}), "scenario left")
    M2 = ReRelation(3, evaluate(m2, {}), "scenario right")
    return param_recursion(M1, M2, g)
