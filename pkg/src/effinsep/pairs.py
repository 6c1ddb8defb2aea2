"""Disjoint RE pairs, property witnesses, and the separating function sigma.

Each pair keeps its two semi-decider indices plus, where one is available, a
host *decider* ``decide(side, x, fuel) -> True | False | None`` that can also
refute membership.  Verification uses it to settle clauses whose conclusion
is a non-membership; ``None`` means the fuel did not suffice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cache
from typing import Callable, Union

from .index_algebra import (
    Asm,
    ReSet,
    Transformer,
    compose_idx,
    finite_members,
    finite_set_index,
    smn_fn,
    swap_program,
)
from .index_algebra.builder import END
from .kernel.machine import Halted, Index, run
from .kernel.numbering import label, pair, unpair

Decider = Callable[[int, int, int], Union[bool, None]]


class Kind(str, Enum):
    EI = "EI"
    CEI = "CEI"
    WEI = "WEI"
    DG = "DG"
    SemiDG = "SemiDG"
    DCP = "DCP"
    WDCP = "WDCP"
    DU = "DU"
    SemiDU = "SemiDU"
    KP = "KP"
    SF = "SF"

    def __str__(self) -> str:
        return self.value


BINARY_KINDS = frozenset(
    {Kind.EI, Kind.CEI, Kind.WEI, Kind.DG, Kind.SemiDG, Kind.DCP, Kind.WDCP, Kind.KP}
)


@dataclass(frozen=True)
class ByConstruction:
    note: str


@dataclass(frozen=True)
class CheckedUpTo:
    bound: int
    fuel: int


@dataclass(frozen=True)
class DisjointPair:
    a: ReSet
    b: ReSet
    disjointness: ByConstruction | CheckedUpTo
    name: str = ""
    decide: Decider | None = field(default=None, compare=False)

    def side(self, k: int) -> ReSet:
        return self.a if k == 0 else self.b

    def swapped(self) -> "DisjointPair":
        dec = self.decide
        return DisjointPair(
            self.b,
            self.a,
            self.disjointness,
            f"swap({self.name})",
            None if dec is None else (lambda k, x, fuel: dec(1 - k, x, fuel)),
        )


@dataclass(frozen=True)
class PropertyWitness:
    """A witness that ``pair`` has property ``kind``.

    ``payload`` is the binary function f(i, j) for the binary kinds, the
    uniformizer (i, j) -> index of a (semi-)reduction for DU / SemiDU, and the
    separation function S on tuple(h, x, y) for SF, whose ``uniformizer``
    maps pair(m1, m2) to h.  ``reduce`` optionally gives the host shortcut
    for DU / SemiDU: (i, j) -> the reduction as a ``Transformer``.
    """

    kind: Kind
    payload: Transformer
    pair: DisjointPair
    uniformizer: Transformer | None = None
    derivation: tuple[str, ...] = ()
    reduce: Callable[[int, int], Transformer] | None = field(default=None, compare=False)

    def reduction(self, i: Index, j: Index) -> Transformer:
        if self.kind not in (Kind.DU, Kind.SemiDU):
            raise ValueError(f"{self.kind} witnesses carry no reductions")
        if self.reduce is not None:
            return self.reduce(i, j)
        return Transformer(self.payload.call2(i, j))


# -- races --------------------------------------------------------------------


NEVER = -1


def halting_step(e: Index, x: int, fuel: int) -> int | None:
    """Exact halting step, ``NEVER`` when divergence is known, else None.

    Divergence is known for literal finite tables (and the empty program
    that loops), where it is a table lookup.
    """
    r = run(e, x, fuel)
    if isinstance(r, Halted):
        return r.steps
    table = finite_members(e)
    if table is not None and x not in table:
        return NEVER
    return None


def stage_race(e1: Index, x1: int, e2: Index, x2: int, fuel: int) -> int | None:
    """Which computation halts strictly first: 0, 1, 2 for a tie, 3 if neither
    ever halts, None if unknown.

    Halting steps are compared exactly, so this is the host counterpart of the
    model's race gadget.  A side that has not halted within ``fuel`` counts as
    later than any side that has.
    """
    s1 = halting_step(e1, x1, fuel)
    if s1 is not None and s1 != NEVER:
        r2 = run(e2, x2, s1)
        if not isinstance(r2, Halted):
            return 0
        return 2 if r2.steps == s1 else 1
    s2 = halting_step(e2, x2, fuel)
    if s2 is not None and s2 != NEVER:
        return 1
    if s1 == NEVER and s2 == NEVER:
        return 3
    return None


# -- the Kleene pair ------------------------------------------------------------


@cache
def _kleene_side(k: int) -> Index:
    """On n: halt iff (n)_k halts on n strictly before (n)_{1-k}."""
    a = Asm()
    e0, e1 = a.regs(2)
    a.unpair(e0, e1, 0)
    no = a.label()
    if k == 0:
        a.race(e0, 0, e1, 0, END, no, no)
    else:
        a.race(e0, 0, e1, 0, no, END, no)
    a.mark(no)
    a.diverge()
    return a.index()


def _kleene_decide(k: int, n: int, fuel: int) -> bool | None:
    e0, e1 = unpair(n)
    w = stage_race(e0, n, e1, n, fuel)
    return None if w is None else w == k


@cache
def kleene_pair() -> tuple[DisjointPair, PropertyWitness]:
    """A: (n)_0 halts on n strictly before (n)_1 does; B: the mirror.

    The KP witness is f(x, y) = pair(y, x).
    """
    p = DisjointPair(
        ReSet(_kleene_side(0), "Kleene A"),
        ReSet(_kleene_side(1), "Kleene B"),
        ByConstruction("strict stage comparison cannot favour both sides"),
        "kleene",
        _kleene_decide,
    )
    w = PropertyWitness(Kind.KP, swap_fn(), p, derivation=("kleene_pair",))
    return p, w


def swap_fn() -> Transformer:
    return Transformer(swap_program(), lambda n: pair(*reversed(unpair(n))), "swap")


# -- diagonal pairs -------------------------------------------------------------


@cache
def _diag_value(target: Index | None, i: int) -> Index:
    """On e: halt iff phi_e(e) = i, or phi_e(e) in W_target when given."""
    a = Asm()
    v = a.reg()
    a.eval(v, 0, 0)
    if target is None:
        c = a.const(i)
        a.jeq(v, c, END)
        a.diverge()
    else:
        t = a.const(target)
        a.eval(v, t, v)
    return a.index()


def value_pair(i: int, j: int) -> DisjointPair:
    """(A_i, A_j) with A_k = {e : phi_e(e) = k}."""
    if i == j:
        raise ValueError("value_pair needs distinct values")

    def decide(k: int, e: int, fuel: int) -> bool | None:
        r = run(e, e, fuel)
        if not isinstance(r, Halted):
            return None
        return r.value == (i, j)[k]

    return DisjointPair(
        ReSet(_diag_value(None, i), f"phi_e(e) = {i}"),
        ReSet(_diag_value(None, j), f"phi_e(e) = {j}"),
        ByConstruction("phi_e(e) has one value"),
        f"value({i},{j})",
        decide,
    )


def lift_pair(A: ReSet, B: ReSet) -> DisjointPair:
    """(X, Y) with X = {e : phi_e(e) in A}; A and B disjoint and nonempty."""
    tables = finite_members(A.idx), finite_members(B.idx)
    decide = None
    if None not in tables:

        def decide(k: int, e: int, fuel: int) -> bool | None:
            r = run(e, e, fuel)
            if not isinstance(r, Halted):
                return None
            return r.value in tables[k]

    return DisjointPair(
        ReSet(_diag_value(A.idx, 0), f"phi_e(e) in {A.provenance or label(A.idx)}"),
        ReSet(_diag_value(B.idx, 0), f"phi_e(e) in {B.provenance or label(B.idx)}"),
        ByConstruction("preimage of a disjoint pair under phi_e(e)"),
        f"lift({A.provenance},{B.provenance})",
        decide,
    )


def finite_pair(a: set[int] | frozenset[int], b: set[int] | frozenset[int], name: str = "") -> DisjointPair:
    if set(a) & set(b):
        raise ValueError("finite pair sides overlap")
    fa, fb = frozenset(a), frozenset(b)

    def decide(k: int, x: int, fuel: int) -> bool:
        return x in (fa, fb)[k]

    return DisjointPair(
        finite_set_index(fa),
        finite_set_index(fb),
        ByConstruction("disjoint literal tables"),
        name or "finite",
        decide,
    )


# -- sigma ----------------------------------------------------------------------


@cache
def _sigma_body() -> Index:
    """On pair(pair(i, j), x): x enters W_i strictly first, or ties with i < j."""
    a = Asm()
    r = a.unpack((("i", "j"), "x"), 0)
    no, tie = a.label(), a.label()
    a.race(r["i"], r["x"], r["j"], r["x"], END, no, tie)
    a.mark(tie)
    a.jlt(r["i"], r["j"], END)
    a.mark(no)
    a.diverge()
    return a.index()


@cache
def sigma_fn() -> Transformer:
    """The total binary program pair(i, j) -> sigma(i, j)."""
    t = smn_fn(_sigma_body())
    return Transformer(t.idx, t.host, "sigma")


def sigma(i: Index, j: Index) -> Index:
    return sigma_fn().call2(i, j)


def sigma_decide(i: Index, j: Index, x: int, fuel: int) -> bool | None:
    """Host decision of x in W_{sigma(i, j)}; None when fuel is short."""
    w = stage_race(i, x, j, x, fuel)
    if w is None:
        return None
    if w == 2:
        return i < j
    return w == 0


# -- swapping -------------------------------------------------------------------


def swap_witness(w: PropertyWitness) -> PropertyWitness:
    """Witness for the swapped pair via g(i, j) = f(j, i)."""
    if w.kind not in BINARY_KINDS:
        raise ValueError(f"swap_witness does not apply to {w.kind}")
    f = w.payload
    sw = swap_fn()
    g = Transformer(
        compose_idx(f.idx, sw.idx),
        lambda n, f=f, sw=sw: f(sw(n)),
        f"swap({f.note})",
    )
    return replace(
        w, payload=g, pair=w.pair.swapped(), derivation=w.derivation + ("swap_witness",)
    )
