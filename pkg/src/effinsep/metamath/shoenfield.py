"""Theories of one equivalence relation, and the pair that drives them.

For an index e the pair (B_e, C_e) is

* B_e: e halts on (x)_0 at some step y while (x)_1 has not halted on x by y,
* C_e: the mirror, with (x)_1 on x strictly first.

Ties belong to neither side.  Over the language {R, =}:

* ``phi(n)``: some R-class has exactly n + 1 elements,
* ``psi(n)``: at most one R-class has exactly n elements,
* ``upsilon(n)``: at least n R-classes have at least n elements.

``shoenfield_theory(b, c)`` takes the equivalence axioms, every psi and
upsilon, ``phi(n)`` for n in W_b and ``~phi(n)`` for n in W_c.
"""

from __future__ import annotations

from functools import cache
from math import isqrt

from ..index_algebra import Asm, ReSet, Transformer
from ..index_algebra.builder import END
from ..index_algebra.expr import Const, Pair, Smn, Var, lam
from ..kernel.machine import Index
from ..kernel.numbering import label, pair, unpair
from ..pairs import ByConstruction, DisjointPair, stage_race
from .syntax import Bin, Eq, Formula, Not, Quant, Rel, Sentence, conj, disj, exists, forall, gn, size, ungn, var
from .theory import PRIM_SHOENFIELD_AXIOM, Theory, _axiom_set, _side_test

# -- the pair --------------------------------------------------------------------


@cache
def _side_body(k: int) -> Index:
    """On pair(e, x): halt iff side k of the race on x wins strictly."""
    asm = Asm()
    r = asm.unpack(("e", "x"), 0)
    a, b = asm.regs(2)
    asm.unpair(a, b, r["x"])
    no = asm.label()
    if k == 0:
        asm.race(r["e"], a, b, r["x"], END, no, no)
    else:
        asm.race(r["e"], a, b, r["x"], no, END, no)
    asm.mark(no)
    asm.diverge()
    return asm.index()


def shoenfield_pair(e: Index) -> DisjointPair:
    from ..kernel.machine import smn

    def decide(k: int, x: int, fuel: int) -> bool | None:
        a, b = unpair(x)
        w = stage_race(e, a, b, x, fuel)
        return None if w is None else w == k

    return DisjointPair(
        ReSet(smn(_side_body(0), e), f"B_{e}"),
        ReSet(smn(_side_body(1), e), f"C_{e}"),
        ByConstruction("a strict race has at most one winner"),
        f"shoenfield({e})",
        decide,
    )


# -- sentences -------------------------------------------------------------------


def _v(prefix: str, i: int):
    return var(f"{prefix}{i}")


def _distinct(ts) -> list[Formula]:
    return [Not(Eq(a, b)) for i, a in enumerate(ts) for b in ts[i + 1 :]]


_TOP = Quant("all", "u", Eq(var("u"), var("u")))


def _class_exactly(x, n: int, tag: str) -> Formula:
    """The R-class of x has exactly n elements (n >= 1); free in x only."""
    others = [_v(tag, i) for i in range(n - 1)]
    members = [x, *others]
    w = var(f"{tag}w")
    closed = forall([w.base], Bin("->", Rel(x, w), disj([Eq(w, m) for m in members])))
    body = conj([*_distinct(members), *[Rel(x, o) for o in others], closed])
    return exists([o.base for o in others], body)


@cache
def phi(n: int) -> Sentence:
    xs = [_v("x", i) for i in range(n + 1)]
    return exists([x.base for x in xs], _class_exactly_named(xs))


def _class_exactly_named(xs) -> Formula:
    w = var("w")
    closed = forall(["w"], Bin("->", Rel(xs[0], w), disj([Eq(w, x) for x in xs])))
    return conj([*_distinct(xs), *[Rel(xs[0], x) for x in xs[1:]], closed])


@cache
def psi(n: int) -> Sentence:
    if n == 0:
        # no class is empty
        never = Not(Eq(var("x"), var("x")))
        return forall(["x", "y"], Bin("->", never, Rel(var("x"), var("y"))))
    x, y = var("x"), var("y")
    both = Bin("&", _class_exactly(x, n, "a"), _class_exactly(y, n, "b"))
    return forall(["x", "y"], Bin("->", both, Rel(x, y)))


@cache
def upsilon(n: int) -> Sentence:
    if n == 0:
        return _TOP
    ys = [_v("y", i) for i in range(n)]
    big = []
    for i, y in enumerate(ys):
        zs = [_v(f"z{i}_", k) for k in range(n)]
        big.append(exists([z.base for z in zs], conj([*_distinct(zs), *[Rel(y, z) for z in zs]])))
    apart = [Not(Rel(a, b)) for i, a in enumerate(ys) for b in ys[i + 1 :]]
    return exists([y.base for y in ys], conj([*apart, *big]))


def equivalence_axioms() -> list[Sentence]:
    x, y, z = var("x"), var("y"), var("z")
    return [
        forall(["x"], Rel(x, x)),
        forall(["x", "y"], Bin("->", Rel(x, y), Rel(y, x))),
        forall(["x", "y", "z"], Bin("->", Bin("&", Rel(x, y), Rel(y, z)), Rel(x, z))),
    ]


def shoenfield_sentences(n: int) -> tuple[Sentence, Sentence, Sentence]:
    """(phi(n), psi(n), upsilon(n))."""
    return phi(n), psi(n), upsilon(n)


# -- axiom classification ------------------------------------------------------------


@cache
def _code(family: str, n: int) -> int:
    f = {"phi": phi, "psi": psi, "upsilon": upsilon}[family](n)
    return gn(f, "LR")


@cache
def _equivalence_codes() -> frozenset[int]:
    return frozenset(gn(f, "LR") for f in equivalence_axioms())


def _leading_quantifiers(f: Formula) -> int:
    k = 0
    while isinstance(f, Quant):
        k, f = k + 1, f.body
    return k


def _candidates(f: Formula) -> set[int]:
    out = set()
    q = _leading_quantifiers(f)
    out.update(range(q - 2, q + 2))
    body = f
    while isinstance(body, Quant):
        body = body.body
    if isinstance(body, Bin) and isinstance(body.l, Bin):
        m = _leading_quantifiers(body.l.l)
        out.update((m, m + 1, m + 2))
    return out


def classify_shoenfield_code(c: int) -> int:
    """0: not an axiom; 1: an axiom outright; 2 + pair(k, n): axiom iff n in side k."""
    if c in _equivalence_codes():
        return 1
    f = ungn(c, "LR")
    neg = isinstance(f, Not)
    inner = f.f if neg else f
    # members of index n have size at least n * n / 2
    limit = isqrt(2 * size(f)) + 2
    for n in sorted(_candidates(inner)):
        if n < 0 or n > limit:
            continue
        if neg:
            if _code("phi", n) == gn(inner, "LR"):
                return 2 + pair(1, n)
            continue
        if _code("phi", n) == c:
            return 2 + pair(0, n)
        if _code("psi", n) == c or _code("upsilon", n) == c:
            return 1
    return 0


def shoenfield_theory(b: ReSet, c: ReSet, name: str = "") -> Theory:
    tests = (_side_test(b), _side_test(c))

    def is_axiom(code: int, fuel: int) -> tuple[bool | None, int]:
        cls = classify_shoenfield_code(code)
        if cls < 2:
            return cls == 1, 1
        k, n = unpair(cls - 2)
        return tests[k](n, fuel)

    name = name or f"Sh({b.provenance or label(b.idx)},{c.provenance or label(c.idx)})"
    return Theory("LR", _axiom_set(PRIM_SHOENFIELD_AXIOM, b.idx, c.idx, f"axioms of {name}"), name, is_axiom)


@cache
def ri_reduction_index() -> Transformer:
    """Total e -> index of the axiom set of the theory built on shoenfield_pair(e)."""
    from .theory import _dispatch_program

    e = Var("e")
    body = Smn(
        Const(_dispatch_program(PRIM_SHOENFIELD_AXIOM)),
        Pair(Smn(Const(_side_body(0)), e), Smn(Const(_side_body(1)), e)),
    )
    return lam("e", body, "e -> axioms of the theory of shoenfield_pair(e)")
