"""Witness-to-witness conversions and the graph they form.

Each edge turns a witness of one property of a disjoint pair into a witness of
another property of the same pair.  Edges come in two flavours: those whose
construction is the published argument (``published=True``) and the few *derived*
edges filling in steps that are only cited there; each derived edge carries
its forcing argument in the docstring.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from functools import cache
from typing import Callable

from .index_algebra import Asm, Transformer, as_transformer, preimage_transformer
from .index_algebra.expr import Apply, Call, Closure, Const, I, J, Pair, Smn, Var, X, Y, evaluate, lam
from .index_algebra.library import compose_body
from .kernel.machine import Index
from .kernel.numbering import label, pair
from .pairs import BINARY_KINDS, DisjointPair, Kind, PropertyWitness, kleene_pair, sigma_fn
from .recursion import (
    cross_recursion,
    equals_apply,
    in_set,
    in_set_template,
    equals,
    in_w,
    inter_expr,
    kleene_fixed_point,
    param_closure,
    param_core_expr,
    scenario_relations_expr,
)


class ConversionError(ValueError):
    pass


def _need(w: PropertyWitness, kind: Kind) -> None:
    if w.kind != kind:
        raise ConversionError(f"expected a {kind} witness, got {w.kind}")


def _retag(w: PropertyWitness, kind: Kind, payload: Transformer, step: str, **kw) -> PropertyWitness:
    return replace(w, kind=kind, payload=payload, derivation=w.derivation + (step,), **kw)


# -- definitional arrows -------------------------------------------------------

WEAKENINGS: dict[tuple[Kind, Kind], str] = {
    (Kind.CEI, Kind.EI): "an EI conclusion is the CEI one under disjointness",
    (Kind.EI, Kind.WEI): "W_i = A, W_j = B is a disjoint covering",
    (Kind.DG, Kind.SemiDG): "drop one direction of each biconditional",
    (Kind.DG, Kind.DCP): "W_i, W_j avoiding A, B force f(i,j) outside all four",
    (Kind.DCP, Kind.WDCP): "empty and singleton W's satisfy the DCP premise",
    (Kind.DU, Kind.SemiDU): "a reduction is a semi-reduction",
}


def weaken(w: PropertyWitness, target: Kind) -> PropertyWitness:
    if (w.kind, target) not in WEAKENINGS:
        raise ConversionError(f"{w.kind} => {target} is not definitional")
    return _retag(w, target, w.payload, f"{w.kind}->{target} [definitional]")


# -- transfer along reductions -----------------------------------------------------


@cache
def _compose_closure() -> Closure:
    return Closure("g", "r", Smn(Const(compose_body()), Pair(Var("g"), Var("r"))), "compose")


def transfer(
    w: PropertyWitness,
    g: Index | Transformer,
    target: DisjointPair,
    *,
    injective: bool = False,
    reduction: bool = True,
) -> PropertyWitness:
    """Move ``w`` along g, a (semi-)reduction of ``w.pair`` to ``target``.

    Binary payloads become s(i, j) = g(f(h(i), h(j))) with h the preimage
    transformer of g.  Plain semi-reductions suffice for KP, EI and SemiDU;
    WEI and WDCP also need g injective.
    """
    g = as_transformer(g)
    if not reduction and w.kind not in (Kind.KP, Kind.EI, Kind.SemiDU):
        raise ConversionError(f"{w.kind} transfers only along reductions")
    if w.kind in (Kind.WEI, Kind.WDCP) and not injective:
        raise ConversionError(f"{w.kind} transfers only along injective reductions")
    step = f"transfer along {g.note or label(g.idx)}"
    if w.kind in BINARY_KINDS:
        h = preimage_transformer(g)
        f = w.payload
        s = lam(("i", "j"), Call(g, Call(f, Pair(Call(h, I), Call(h, J)))), step)
        return _retag(w, w.kind, s, step, pair=target)
    if w.kind == Kind.SF:
        S = w.payload
        s = lam("n", Call(g, Call(S, Var("n"))), step)
        return _retag(w, w.kind, s, step, pair=target)
    # DU / SemiDU: post-compose every emitted reduction with g
    comp = _compose_closure()
    U = w.payload
    U2 = lam("n", comp.instance_expr(Pair(Const(g.idx), Call(U, Var("n")))), step)

    def reduce(i: int, j: int, w=w, g=g) -> Transformer:
        r = w.reduction(i, j)
        return Transformer(comp.instance(pair(g.idx, r.idx)).idx, lambda x: g(r(x)), step)

    return _retag(w, w.kind, U2, step, pair=target, reduce=reduce)


# -- recursion-theorem arrows --------------------------------------------------------


def wei_to_dg(w: PropertyWitness) -> PropertyWitness:
    """f(i, j) = g(t1(i, j), t2(i, j)) for the cross-recursive t1, t2 with

    W_{t1(i,j)} = A + (W_j & {f(i,j)}) and W_{t2(i,j)} = B + (W_i & {f(i,j)}).
    """
    _need(w, Kind.WEI)
    g = w.payload
    hit = equals_apply(4, "x", g.idx, ("z1", "z2")) & in_w(4, "x", "y")
    M1 = in_set(4, "x", w.pair.a) | hit
    M2 = in_set(4, "x", w.pair.b) | hit
    t1, t2 = cross_recursion(M1, M2)
    ij = Pair(I, J)
    f = lam(("i", "j"), Call(g, Pair(Call(t1, ij), Call(t2, ij))), "g(t1, t2)")
    return _retag(w, Kind.DG, f, "WEI->DG [cross recursion]")


def _h_closure(g: Transformer) -> Closure:
    """n -> (y -> g(f1(y), f2(y))) for the parameter-recursion core n."""
    f1 = param_closure(0).body
    f2 = param_closure(1).body
    return Closure("n", "y", Call(g, Pair(f1, f2)), "h")


def _uniformizer(g: Transformer, relations, step: str) -> tuple[Transformer, Callable]:
    """Uniformizer (a, b) -> h for relations M1, M2 built from a, b."""
    hc = _h_closure(g)
    a, b = Var("a"), Var("b")
    m1, m2 = relations(a, b)
    n = param_core_expr(m1, m2, Const(g.idx))
    U = lam(("a", "b"), hc.instance_expr(n), step)

    def reduce(i: int, j: int) -> Transformer:
        env = {"a": i, "b": j}
        return hc.instance(evaluate(n, env))

    return U, reduce


def wdcp_to_du(w: PropertyWitness) -> PropertyWitness:
    """h(y) = g(f1(y), f2(y)) for W_{f1(y)} = {x : y in A' and x = h(y)}, mirrored.

    The uniformizer builds the relations from the indices of (A', B').
    """
    _need(w, Kind.WDCP)
    iny = in_set_template(3, "y")
    eq = Const(equals(3, "x", "z").prog)

    def rels(a, b):
        return inter_expr(iny.bind_expr(a), eq), inter_expr(iny.bind_expr(b), eq)

    U, reduce = _uniformizer(w.payload, rels, "WDCP->DU")
    return _retag(w, Kind.DU, U, "WDCP->DU [parameter recursion]", reduce=reduce)


def wei_to_du(w: PropertyWitness) -> PropertyWitness:
    """h(y) = g(f1(y), f2(y)) for the scenario-recursive f1, f2 over (A', B', C, D)."""
    _need(w, Kind.WEI)
    C, D = Const(w.pair.a.idx), Const(w.pair.b.idx)

    def rels(a, b):
        return scenario_relations_expr(a, b, C, D)

    U, reduce = _uniformizer(w.payload, rels, "WEI->DU")
    return _retag(w, Kind.DU, U, "WEI->DU [scenario recursion]", reduce=reduce)


def dg_to_wei(w: PropertyWitness) -> PropertyWitness:
    """g(i, j) = k(sigma(j, i), sigma(i, j))."""
    _need(w, Kind.DG)
    k, s = w.payload, sigma_fn()
    g = lam(("i", "j"), Call(k, Pair(Call(s, Pair(J, I)), Call(s, Pair(I, J)))), "k(sigma)")
    return _retag(w, Kind.WEI, g, "DG->WEI [sigma]")


# -- derived arrows ---------------------------------------------------------------------


def kp_to_cei(w: PropertyWitness) -> PropertyWitness:
    """The Kleene function itself.

    With A in W_i and B in W_j, a value in W_j - W_i would lie in A, so in W_i;
    one in W_i - W_j would lie in B, so in W_j.  Both are absurd.
    """
    _need(w, Kind.KP)
    return _retag(w, Kind.CEI, w.payload, "KP->CEI [derived]")


def semidg_to_kp(w: PropertyWitness) -> PropertyWitness:
    """k(x, y) = f(sigma(y, x), sigma(x, y)).

    The sigma sets are disjoint and contain W_y - W_x and W_x - W_y, so the
    semi-DG clauses send k(x, y) in W_y - W_x to A and in W_x - W_y to B.
    """
    _need(w, Kind.SemiDG)
    f, s = w.payload, sigma_fn()
    k = lam(("x", "y"), Call(f, Pair(Call(s, Pair(Y, X)), Call(s, Pair(X, Y)))), "f(sigma)")
    return _retag(w, Kind.KP, k, "SemiDG->KP [derived]")


def du_to_kp(w: PropertyWitness) -> PropertyWitness:
    """Reduce the Kleene pair to ours, then move its Kleene function across.

    Only a semi-reduction is needed: k'(x, y) = r(k(h(x), h(y))) keeps both
    Kleene clauses.
    """
    _need(w, Kind.DU)
    kp, kw = kleene_pair()
    r = w.reduction(kp.a.idx, kp.b.idx)
    out = transfer(kw, r, w.pair, reduction=False)
    return replace(out, derivation=w.derivation + ("DU->KP [derived]",), uniformizer=None)


def semidu_to_sf(w: PropertyWitness) -> PropertyWitness:
    """S(h, x, y) = phi_h(pair(x, y)), h = U(sigma(m1, m2), sigma(m2, m1)).

    The sigma sets give a disjoint RE pair containing the points where exactly
    one relation holds; h semi-reduces it to ours.
    """
    _need(w, Kind.SemiDU)
    U, s = w.payload, sigma_fn()
    S = lam(("h", ("x", "y")), Apply(Var("h"), Pair(X, Y)), "S")
    m1, m2 = Var("m1"), Var("m2")
    V = lam(("m1", "m2"), Call(U, Pair(Call(s, Pair(m1, m2)), Call(s, Pair(m2, m1)))), "V")
    return _retag(w, Kind.SF, S, "SemiDU->SF [derived]", uniformizer=V)


@cache
def _sf_relation(side: int) -> Index:
    """On pair(pair(S, e), pair(x, y)): h = phi_e(0); halt iff S(h, x, y) in W_y (W_x)."""
    a = Asm()
    r = a.unpack((("S", "e"), ("x", "y")), 0)
    h, t = a.regs(2)
    a.eval(h, r["e"], a.zero)
    a.pair(t, r["x"], r["y"])
    a.pair(t, h, t)
    a.eval(t, r["S"], t)
    a.eval(t, r["y"] if side == 0 else r["x"], t)
    return a.index()


@cache
def _ret_body() -> Index:
    """On pair(pair(V, arg), _): return V(arg)."""
    a = Asm()
    r = a.unpack((("V", "arg"), "_"), 0)
    a.eval(0, r["V"], r["arg"])
    return a.index()


def sf_to_kp(w: PropertyWitness) -> PropertyWitness:
    """k(x, y) = S(h, x, y) where h names the relations S(h, x, y) in W_y and in W_x.

    The self-reference goes through a fixed point e with phi_e(0) = h; then a
    value in W_y - W_x satisfies the first relation only and lands in A.
    """
    _need(w, Kind.SF)
    S, V = w.payload, w.uniformizer
    e = Var("e")
    rel = lambda side: Smn(Const(_sf_relation(side)), Pair(Const(S.idx), e))  # noqa: E731
    F = lam("e", Smn(Const(_ret_body()), Pair(Const(V.idx), Pair(rel(0), rel(1)))), "F")
    fix = kleene_fixed_point(F)
    h = V(evaluate(Pair(rel(0), rel(1)), {"e": fix}))
    k = lam(("x", "y"), Call(S, Pair(Const(h), Pair(X, Y))), "S(h, x, y)")
    return _retag(w, Kind.KP, k, "SF->KP [derived]", uniformizer=None)


# -- the graph ------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    src: Kind
    dst: Kind
    label: str
    published: bool
    apply: Callable[[PropertyWitness], PropertyWitness]


def _weaken_edge(s: Kind, d: Kind) -> Edge:
    return Edge(s, d, "definitional", True, lambda w: weaken(w, d))


EDGES: tuple[Edge, ...] = (
    *(_weaken_edge(s, d) for s, d in WEAKENINGS),
    Edge(Kind.WEI, Kind.DG, "cross recursion", True, wei_to_dg),
    Edge(Kind.WDCP, Kind.DU, "parameter recursion", True, wdcp_to_du),
    Edge(Kind.DG, Kind.WEI, "sigma composition", True, dg_to_wei),
    Edge(Kind.WEI, Kind.DU, "scenario recursion", True, wei_to_du),
    Edge(Kind.KP, Kind.CEI, "derived: Kleene function is CEI", False, kp_to_cei),
    Edge(Kind.SemiDG, Kind.KP, "derived: sigma supersets", False, semidg_to_kp),
    Edge(Kind.DU, Kind.KP, "derived: reduce the Kleene pair", False, du_to_kp),
    Edge(Kind.SemiDU, Kind.SF, "derived: sigma-separated relations", False, semidu_to_sf),
    Edge(Kind.SF, Kind.KP, "derived: self-referential relations", False, sf_to_kp),
)


def find_path(src: Kind, dst: Kind) -> list[Edge]:
    """Shortest edge path; ties prefer fewer derived edges, then kind names."""
    best: dict[Kind, tuple] = {src: (0, 0, ())}
    paths: dict[Kind, list[Edge]] = {src: []}
    queue = deque([src])
    while queue:
        k = queue.popleft()
        length, derived, names = best[k]
        for e in sorted((e for e in EDGES if e.src == k), key=lambda e: e.dst.value):
            cand = (length + 1, derived + (not e.published), names + (e.dst.value,))
            if e.dst not in best or cand < best[e.dst]:
                first = e.dst not in best
                best[e.dst] = cand
                paths[e.dst] = paths[k] + [e]
                if first:
                    queue.append(e.dst)
    if dst not in paths:
        raise ConversionError(f"no conversion path {src} -> {dst}")
    return paths[dst]


def derive_path(w: PropertyWitness, target: Kind) -> PropertyWitness:
    for e in find_path(w.kind, target):
        w = e.apply(w)
    return w
