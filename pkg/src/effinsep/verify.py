"""Fueled, three-valued checking of witness contracts on crafted scenarios.

A scenario fixes indices i, j together with a *description* of W_i and W_j:
a base (one side of the pair, nothing, or everything), a finite set of extra
members, and possibly the witness value itself (self-referential scenarios
built with ``scenario_recursion``).  Premises such as "W_i = A" are read off
the description; memberships of the witness value are settled by the pair's
decider or by running semi-deciders with fuel.  A clause fails only when its
premise holds and its conclusion is refuted; "PASS" never means "proved".
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Literal

from .index_algebra import ALL, LOOP, Diverged, ReSet, Transformer, finite_members, finite_set_index, union
from .kernel.machine import Halted, Index, run
from .kernel.numbering import pair
from .pairs import BINARY_KINDS, DisjointPair, Kind, PropertyWitness, finite_pair
from .recursion import scenario_recursion

FUEL_SCALE = float(os.environ.get("EFFINSEP_FUEL_SCALE", "1"))
DEFAULT_FUEL = int(10**6 * FUEL_SCALE)

T3 = "bool | None"


# -- verdicts ------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: Literal["Confirmed", "Refuted", "Unknown"]
    detail: str = ""

    @property
    def truth(self) -> bool | None:
        return {"Confirmed": True, "Refuted": False}.get(self.status)


def confirmed(detail: object = "") -> Verdict:
    return Verdict("Confirmed", str(detail))


def refuted(detail: object = "") -> Verdict:
    return Verdict("Refuted", str(detail))


def unknown(fuel: int) -> Verdict:
    return Verdict("Unknown", f"fuel {fuel} exhausted")


def from_truth(t: bool | None, fuel: int, why: str = "") -> Verdict:
    if t is None:
        return unknown(fuel)
    return confirmed(why) if t else refuted(why)


def member(e: Index, x: int, fuel: int) -> Verdict:
    """x in W_e: Confirmed on halting, Refuted only for literal finite tables."""
    r = run(e, x, fuel)
    if isinstance(r, Halted):
        return confirmed(f"halted at step {r.steps}")
    table = finite_members(e)
    if table is not None and x not in table:
        return refuted("not in finite table")
    return unknown(fuel)


def scan_disjoint(p: DisjointPair, bound: int, fuel: int) -> Verdict:
    """Refuted with a witness if some x < bound is confirmed on both sides."""
    for x in range(bound):
        if member(p.a.idx, x, fuel).truth and member(p.b.idx, x, fuel).truth:
            return refuted(f"{x} in both sides")
    return confirmed(f"no overlap below {bound} at fuel {fuel}")


# three-valued connectives


def t_not(a: bool | None) -> bool | None:
    return None if a is None else not a


def t_and(*xs: bool | None) -> bool | None:
    if any(x is False for x in xs):
        return False
    return None if any(x is None for x in xs) else True


def t_or(*xs: bool | None) -> bool | None:
    if any(x is True for x in xs):
        return True
    return None if any(x is None for x in xs) else False


def t_iff(a: bool | None, b: bool | None) -> bool | None:
    return None if a is None or b is None else a == b


# -- scenario descriptions --------------------------------------------------------

Base = Literal["A", "B", "none", "all"]


@dataclass(frozen=True)
class SetDesc:
    base: Base = "none"
    extra: frozenset[int] = frozenset()
    with_value: bool = False

    def label(self) -> str:
        parts = [] if self.base == "none" else [self.base]
        if self.extra:
            parts.append("{" + ",".join(map(_short, sorted(self.extra))) + "}")
        if self.with_value:
            parts.append("{f}")
        return " + ".join(parts) or "empty"


@dataclass(frozen=True)
class Scenario:
    id: str
    i: Index
    j: Index
    wi: SetDesc
    wj: SetDesc
    note: str = ""


@dataclass(frozen=True)
class ReductionScenario:
    """Source pair (A', B') given by indices plus the points y to test."""

    id: str
    source: DisjointPair
    points: tuple[int, ...]
    note: str = ""


@dataclass(frozen=True)
class RelationScenario:
    """Two finite binary relations, as tables of pair(x, y), and test points."""

    id: str
    m1: frozenset[tuple[int, int]]
    m2: frozenset[tuple[int, int]]
    points: tuple[tuple[int, int], ...]
    note: str = ""


AnyScenario = Scenario | ReductionScenario | RelationScenario


def side_index(p: DisjointPair, base: Base) -> Index:
    return {"A": p.a.idx, "B": p.b.idx, "none": LOOP, "all": ALL}[base]


def desc_index(p: DisjointPair, d: SetDesc) -> Index:
    if d.with_value:
        raise ValueError("self-referential sets come from build_selfref_scenario")
    if not d.extra:
        return side_index(p, d.base)
    table = finite_set_index(d.extra).idx
    if d.base == "none":
        return table
    return union(side_index(p, d.base), table).idx


class ScenarioError(ValueError):
    pass


def build_superset_scenario(
    p: DisjointPair,
    extra_a: Iterable[int] = (),
    extra_b: Iterable[int] = (),
    fuel: int = 10**4,
    sid: str = "",
) -> Scenario:
    """W_i = A + extra_a and W_j = B + extra_b; overlap that can be seen is rejected."""
    ea, eb = frozenset(extra_a), frozenset(extra_b)
    if ea & eb:
        raise ScenarioError("extras overlap each other")
    for xs, k in ((ea, 1), (eb, 0)):
        for x in xs:
            if _side_member(p, k, x, fuel) is True:
                raise ScenarioError(f"extra {x} already lies on the other side")
    wi, wj = SetDesc("A", ea), SetDesc("B", eb)
    return Scenario(sid or f"superset {wi.label()} | {wj.label()}", desc_index(p, wi), desc_index(p, wj), wi, wj)


def build_scenario(p: DisjointPair, wi: SetDesc, wj: SetDesc, sid: str = "") -> Scenario:
    return Scenario(sid or f"{wi.label()} | {wj.label()}", desc_index(p, wi), desc_index(p, wj), wi, wj)


def build_selfref_scenario(
    p: DisjointPair,
    C: SetDesc,
    D: SetDesc,
    g: Index | Transformer,
    side: Literal["left", "right"],
    sid: str = "",
) -> Scenario:
    """W_i = C and W_j = D + {g(i, j)} ("right"), or W_i = C + {g(i, j)} ("left")."""
    y = 0 if side == "right" else 1
    zero, one = finite_set_index({0}), finite_set_index({1})
    ci, di = ReSet(desc_index(p, C)), ReSet(desc_index(p, D))
    f1, f2 = scenario_recursion(zero, one, ci, di, g)
    wi = SetDesc(C.base, C.extra, side == "left")
    wj = SetDesc(D.base, D.extra, side == "right")
    return Scenario(sid or f"self-ref {wi.label()} | {wj.label()}", f1(y), f2(y), wi, wj, "scenario recursion")


# -- evaluation context -----------------------------------------------------------


def _side_member(p: DisjointPair, k: int, x: int, fuel: int) -> bool | None:
    if p.decide is not None:
        return p.decide(k, x, fuel)
    return member(p.side(k).idx, x, fuel).truth


class _Ctx:
    def __init__(self, p: DisjointPair, v: int, fuel: int) -> None:
        self.p, self.v, self.fuel = p, v, fuel
        self._memo: dict[tuple[int, int], bool | None] = {}
        self._tables = (finite_members(p.a.idx), finite_members(p.b.idx))

    def side(self, k: int, x: int) -> bool | None:
        key = (k, x)
        if key not in self._memo:
            self._memo[key] = _side_member(self.p, k, x, self.fuel)
        return self._memo[key]

    def base_has(self, base: Base, x: int) -> bool | None:
        if base == "A":
            return self.side(0, x)
        if base == "B":
            return self.side(1, x)
        return base == "all"

    def has(self, d: SetDesc, x: int) -> bool | None:
        return t_or(x in d.extra, d.with_value and x == self.v, self.base_has(d.base, x))

    def explicit(self, d: SetDesc) -> list[int]:
        return sorted(d.extra) + ([self.v] if d.with_value else [])

    def contains_side(self, k: int, d: SetDesc) -> bool | None:
        """side k is a subset of the described set"""
        if d.base in ("all", "AB"[k]):
            return True
        table = self._tables[k]
        if table is not None:
            return t_and(*(self.has(d, a) for a in table))
        return False

    def equals_side(self, d: SetDesc, k: int, plus_value: bool = False) -> bool | None:
        """described set == side k (+ {v} when plus_value)"""
        if d.base != "AB"[k]:
            table = self._tables[k]
            if table is None or d.base != "none":
                return False
            inside = t_and(*(self.has(d, a) for a in table))
        else:
            inside = True
        items = [x for x in d.extra]
        extra_ok = t_and(*(self.side(k, x) for x in items)) if items else True
        if plus_value:
            val = True if (d.with_value or self.v in d.extra) else self.side(k, self.v)
        else:
            val = t_not(t_and(d.with_value, t_not(self.side(k, self.v)))) if d.with_value else True
        return t_and(inside, extra_ok, val)

    def empty(self, d: SetDesc) -> bool | None:
        if d.base == "all":
            return False
        if d.base in ("A", "B"):
            table = self._tables["AB".index(d.base)]
            if table is None or table:
                return False
        return not d.extra and not d.with_value

    def singleton_value(self, d: SetDesc) -> bool | None:
        return self.empty(SetDesc(d.base, d.extra - {self.v})) and d.with_value or (
            d.extra == {self.v} and self.empty(SetDesc(d.base))
        )

    def disjoint(self, d1: SetDesc, d2: SetDesc) -> bool | None:
        if self.empty(d1) is True or self.empty(d2) is True:
            return True
        b1, b2 = d1.base, d2.base
        if "all" in (b1, b2):
            return False
        if b1 == b2 and b1 != "none":
            return False
        parts = [t_not(self.has(d2, x)) for x in self.explicit(d1)]
        parts += [t_not(self.base_has(b1, x)) for x in self.explicit(d2)]
        return t_and(*parts)

    def avoids_side(self, d: SetDesc, k: int) -> bool | None:
        if d.base in ("all", "AB"[k]):
            return self.empty(SetDesc(d.base)) if d.base != "all" else False
        return t_and(*(t_not(self.side(k, x)) for x in self.explicit(d)))


# -- clauses -------------------------------------------------------------------------

Clause = tuple[str, "bool | None", "bool | None"]


def _binary_clauses(kind: Kind, c: _Ctx, wi: SetDesc, wj: SetDesc) -> list[Clause]:
    v = c.v
    in_i, in_j = c.has(wi, v), c.has(wj, v)
    in_a, in_b = c.side(0, v), c.side(1, v)
    disj = c.disjoint(wi, wj)
    if kind == Kind.EI:
        prem = t_and(c.contains_side(0, wi), c.contains_side(1, wj), disj)
        return [("f(i,j) outside W_i and W_j", prem, t_and(t_not(in_i), t_not(in_j)))]
    if kind == Kind.CEI:
        prem = t_and(c.contains_side(0, wi), c.contains_side(1, wj))
        return [("f(i,j) in W_i iff in W_j", prem, t_iff(in_i, in_j))]
    if kind == Kind.WEI:
        ea, eb = c.equals_side(wi, 0), c.equals_side(wj, 1)
        return [
            ("I: W_i=A, W_j=B => f outside A+B", t_and(ea, eb), t_not(t_or(in_a, in_b))),
            ("II: W_i=A, W_j=B+{f} => f in A", t_and(ea, c.equals_side(wj, 1, True)), in_a),
            ("III: W_i=A+{f}, W_j=B => f in B", t_and(c.equals_side(wi, 0, True), eb), in_b),
        ]
    if kind == Kind.DG:
        return [
            ("disjoint => (f in A iff f in W_i)", disj, t_iff(in_a, in_i)),
            ("disjoint => (f in B iff f in W_j)", disj, t_iff(in_b, in_j)),
        ]
    if kind == Kind.SemiDG:
        return [
            ("disjoint, f in W_i => f in A", t_and(disj, in_i), in_a),
            ("disjoint, f in W_j => f in B", t_and(disj, in_j), in_b),
        ]
    if kind == Kind.DCP:
        prem = t_and(disj, c.avoids_side(wi, 0), c.avoids_side(wj, 1))
        return [("f outside A, B, W_i, W_j", prem, t_not(t_or(in_a, in_b, in_i, in_j)))]
    if kind == Kind.WDCP:
        ei, ej = c.empty(wi), c.empty(wj)
        return [
            ("I: W_i=W_j=empty => f outside A+B", t_and(ei, ej), t_not(t_or(in_a, in_b))),
            ("II: W_i=empty, W_j={f} => f in B", t_and(ei, c.singleton_value(wj)), in_b),
            ("III: W_i={f}, W_j=empty => f in A", t_and(c.singleton_value(wi), ej), in_a),
        ]
    if kind == Kind.KP:
        return [
            ("f(x,y) in W_y - W_x => in A", t_and(in_j, t_not(in_i)), in_a),
            ("f(x,y) in W_x - W_y => in B", t_and(in_i, t_not(in_j)), in_b),
        ]
    raise ValueError(f"{kind} is not a binary kind")


# -- reports --------------------------------------------------------------------------


@dataclass
class ClauseResult:
    name: str
    premise_verdict: str
    conclusion_verdict: str
    fuel: int
    status: Literal["PASS", "FAIL", "UNKNOWN"]


@dataclass
class Report:
    scenario_id: str
    witness_kind: str
    derivation: list[str]
    clauses: list[ClauseResult] = field(default_factory=list)
    overall: Literal["PASS", "FAIL"] = "PASS"
    witness_value: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def failed(self) -> bool:
        return self.overall == "FAIL"


def _status(prem: bool | None, concl: bool | None) -> str:
    if prem is True and concl is False:
        return "FAIL"
    if prem is False or concl is True:
        return "PASS"
    return "UNKNOWN"


def _word(t: bool | None) -> str:
    return {True: "Confirmed", False: "Refuted", None: "Unknown"}[t]


def _short(n: int) -> str:
    if n.bit_length() > 80:
        return f"<{n.bit_length()}-bit>"
    return str(n)


def _finish(rep: Report, clauses: list[Clause], fuel: int) -> Report:
    for name, prem, concl in clauses:
        if fuel <= 0:  # no budget, no evidence
            prem = concl = None
        rep.clauses.append(ClauseResult(name, _word(prem), _word(concl), fuel, _status(prem, concl)))
    rep.overall = "FAIL" if any(c.status == "FAIL" for c in rep.clauses) else "PASS"
    return rep


def check_witness(
    w: PropertyWitness, s: AnyScenario, fuel: int = DEFAULT_FUEL, p: DisjointPair | None = None
) -> Report:
    """Evaluate the witness on the scenario and grade every contract clause."""
    p = p or w.pair
    rep = Report(s.id, str(w.kind), list(w.derivation))
    if w.kind in BINARY_KINDS:
        if not isinstance(s, Scenario):
            raise ValueError(f"{w.kind} needs an (i, j) scenario")
        v = w.payload.call2(s.i, s.j)
        rep.witness_value = _short(v)
        return _finish(rep, _binary_clauses(w.kind, _Ctx(p, v, fuel), s.wi, s.wj), fuel)
    if w.kind in (Kind.DU, Kind.SemiDU):
        if not isinstance(s, ReductionScenario):
            raise ValueError(f"{w.kind} needs a reduction scenario")
        return _finish(rep, _reduction_clauses(w, p, s, fuel), fuel)
    if not isinstance(s, RelationScenario):
        raise ValueError("SF needs a relation scenario")
    return _finish(rep, _separation_clauses(w, p, s, fuel), fuel)


def _apply(t: Transformer, x: int) -> int | None:
    try:
        return t(x)
    except Diverged:
        return None


def _reduction_clauses(w: PropertyWitness, p: DisjointPair, s: ReductionScenario, fuel: int) -> list[Clause]:
    src = s.source
    r = w.reduction(src.a.idx, src.b.idx)
    ctx = _Ctx(p, 0, fuel)
    out: list[Clause] = []
    for y in s.points:
        ya, yb = _side_member(src, 0, y, fuel), _side_member(src, 1, y, fuel)
        hy = _apply(r, y)
        ca = None if hy is None else ctx.side(0, hy)
        cb = None if hy is None else ctx.side(1, hy)
        out.append((f"y={y} in A' => h(y) in C", ya, ca))
        out.append((f"y={y} in B' => h(y) in D", yb, cb))
        if w.kind == Kind.DU:
            out.append((f"y={y} outside A'+B' => h(y) outside C+D", t_not(t_or(ya, yb)), t_not(t_or(ca, cb))))
    return out


def relation_index(table: frozenset[tuple[int, int]]) -> Index:
    return finite_set_index({pair(x, y) for x, y in table}).idx


def _separation_clauses(w: PropertyWitness, p: DisjointPair, s: RelationScenario, fuel: int) -> list[Clause]:
    h = w.uniformizer(pair(relation_index(s.m1), relation_index(s.m2)))
    ctx = _Ctx(p, 0, fuel)
    out: list[Clause] = []
    for x, y in s.points:
        in1, in2 = (x, y) in s.m1, (x, y) in s.m2
        r = run(w.payload.idx, pair(h, pair(x, y)), fuel)
        val = r.value if isinstance(r, Halted) else None
        ca = None if val is None else ctx.side(0, val)
        cb = None if val is None else ctx.side(1, val)
        out.append((f"M1 and not M2 at ({x},{y}) => S in A", in1 and not in2, ca))
        out.append((f"M2 and not M1 at ({x},{y}) => S in B", in2 and not in1, cb))
    return out


# -- suites ---------------------------------------------------------------------------------


def outside_points(p: DisjointPair, count: int, fuel: int = 10**4, start: int = 0) -> list[int]:
    """Small naturals decided to lie in neither side."""
    out, x = [], start
    while len(out) < count and x < start + 10**4:
        if _side_member(p, 0, x, fuel) is False and _side_member(p, 1, x, fuel) is False:
            out.append(x)
        x += 1
    return out


def default_suite(w: PropertyWitness, extended: bool = False) -> list[AnyScenario]:
    """Scenarios for ``w.kind`` over ``w.pair`` (at least three per kind)."""
    p, k = w.pair, w.kind
    if k in (Kind.DU, Kind.SemiDU):
        return reduction_suite(extended)
    if k == Kind.SF:
        return relation_suite(extended)
    o = outside_points(p, 2)
    empty, A, B, all_ = SetDesc("none"), SetDesc("A"), SetDesc("B"), SetDesc("all")
    f = w.payload

    def selfref(C: SetDesc, D: SetDesc, side: str) -> Scenario:
        return build_selfref_scenario(p, C, D, f, side)  # type: ignore[arg-type]

    if k in (Kind.EI, Kind.CEI):
        suite = [
            build_superset_scenario(p),
            build_superset_scenario(p, {o[0]}, {o[1]}),
            selfref(A, B, "right"),
        ]
        if k == Kind.CEI:
            suite.append(build_scenario(p, all_, all_))
        if extended:
            suite.append(selfref(A, B, "left"))
        return suite
    if k == Kind.WEI:
        return [build_superset_scenario(p), selfref(A, B, "right"), selfref(A, B, "left")]
    if k in (Kind.DG, Kind.SemiDG, Kind.DCP):
        suite = [
            build_scenario(p, empty, empty),
            build_scenario(p, SetDesc("none", frozenset({o[0]})), SetDesc("none", frozenset({o[1]}))),
            selfref(empty, empty, "left"),
            selfref(empty, empty, "right"),
        ]
        if extended and k != Kind.DCP:
            suite.append(build_scenario(p, A, B))
        return suite
    if k == Kind.WDCP:
        return [build_scenario(p, empty, empty), selfref(empty, empty, "right"), selfref(empty, empty, "left")]
    if k == Kind.KP:
        suite = [
            build_scenario(p, empty, all_),
            build_scenario(p, all_, empty),
            build_scenario(p, empty, empty),
            build_scenario(p, all_, all_),
            selfref(empty, empty, "right"),
        ]
        if extended:
            suite.append(selfref(empty, empty, "left"))
        return suite
    raise ValueError(f"no suite for {k}")


def evens_odds(n: int) -> DisjointPair:
    return finite_pair(
        {x for x in range(n + 1) if x % 2 == 0}, {x for x in range(n + 1) if x % 2 == 1}, f"evens/odds<={n}"
    )


def reduction_suite(extended: bool = False) -> list[ReductionScenario]:
    eo = evens_odds(20)
    suite = [
        ReductionScenario("evens/odds<=20", eo, (0, 1, 2, 3, 4, 21)),
        ReductionScenario("{2} | {3}", finite_pair({2}, {3}), (2, 3, 5)),
        ReductionScenario("empty pair", finite_pair(set(), set()), (0, 1)),
    ]
    if extended:
        suite.append(ReductionScenario("evens/odds<=100", evens_odds(100), tuple(range(21)) + (101,)))
    return suite


def relation_suite(extended: bool = False) -> list[RelationScenario]:
    m1 = frozenset({(0, 1), (2, 2)})
    m2 = frozenset({(1, 0), (2, 2)})
    pts = ((0, 1), (1, 0), (2, 2), (3, 3))
    suite = [
        RelationScenario("M1 | M2", m1, m2, pts),
        RelationScenario("M2 | M1", m2, m1, pts),
        RelationScenario("empty relations", frozenset(), frozenset(), pts[:2]),
    ]
    if extended:
        suite.append(RelationScenario("M1 | empty", m1, frozenset(), pts))
    return suite


def run_suite(
    w: PropertyWitness,
    fuel: int = DEFAULT_FUEL,
    extended: bool = False,
    scenarios: list[AnyScenario] | None = None,
) -> list[Report]:
    scenarios = default_suite(w, extended) if scenarios is None else scenarios
    reps = [check_witness(w, s, fuel) for s in scenarios]
    return sorted(reps, key=lambda r: r.scenario_id)


def dumps(reports: list[Report]) -> str:
    """Stable JSON rendering of reports."""
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


Scorer = Callable[[list[Report]], bool]


def all_pass(reports: list[Report]) -> bool:
    return not any(r.failed for r in reports)


# -- negative controls ---------------------------------------------------------------


def control_cases() -> list[tuple[str, PropertyWitness, Scenario]]:
    """Deliberately broken witnesses over the Kleene pair, each with a scenario
    on which it must FAIL."""
    from .index_algebra import const_fn
    from .pairs import kleene_pair

    p, _ = kleene_pair()
    zero = const_fn(0)
    ident = Transformer(ALL, lambda n: n, "identity")
    return [
        (
            "control-ei",
            PropertyWitness(Kind.EI, zero, p, derivation=("constant 0",)),
            build_superset_scenario(p, {0}, (), sid="A + {0} | B"),
        ),
        (
            "control-kp",
            PropertyWitness(Kind.KP, ident, p, derivation=("no swap",)),
            build_scenario(p, SetDesc("none"), SetDesc("all")),
        ),
        (
            "control-dg",
            PropertyWitness(Kind.DG, zero, p, derivation=("constant 0",)),
            build_scenario(p, SetDesc("none", frozenset({0})), SetDesc("none")),
        ),
    ]


def negative_controls(fuel: int = DEFAULT_FUEL) -> list[tuple[str, Report]]:
    return [(name, check_witness(w, s, fuel)) for name, w, s in control_cases()]
