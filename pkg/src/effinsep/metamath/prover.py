"""Fuel-bounded ground tableau prover for first-order logic with equality.

Formulas are put in negation normal form; a branch closes on a formula
together with its dual, on ``~(t = t)`` up to the equalities on the branch,
or on complementary atoms whose arguments are equal up to those equalities
(congruence closure over the terms present).  Universal formulas are
instantiated fairly with the ground terms on the branch, existentials get
fresh parameters.  The search is sound: a closed tableau for ``Gamma, ~phi``
is a refutation, so "proved" always means ``Gamma |= phi``.  Running out of
fuel or saturating an open branch both report "not proved".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import Bin, Eq, Formula, Not, Pred, Quant, Rel, Term

# NNF nodes reuse the syntax classes: And/Or via Bin, negation only on atoms.


@lru_cache(maxsize=65536)
def nnf(f: Formula, positive: bool = True) -> Formula:
    if isinstance(f, (Pred, Rel, Eq)):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return nnf(f.f, not positive)
    if isinstance(f, Bin):
        if f.op == "->":
            left, right = nnf(f.l, not positive), nnf(f.r, positive)
            return Bin("|" if positive else "&", left, right)
        op = f.op if positive else ("|" if f.op == "&" else "&")
        return Bin(op, nnf(f.l, positive), nnf(f.r, positive))
    q = f.q if positive else ("ex" if f.q == "all" else "all")
    return Quant(q, f.v, nnf(f.body, positive))


def dual(f: Formula) -> Formula:
    """NNF of the negation of an NNF formula."""
    return nnf(f, False)


def _sub_term(t: Term, v: str, by: Term) -> Term:
    return Term(t.k + by.k, by.base) if t.base == v else t


@lru_cache(maxsize=65536)
def subst(f: Formula, v: str, by: Term) -> Formula:
    if isinstance(f, Pred):
        return Pred(_sub_term(f.t, v, by))
    if isinstance(f, Rel):
        return Rel(_sub_term(f.a, v, by), _sub_term(f.b, v, by))
    if isinstance(f, Eq):
        return Eq(_sub_term(f.a, v, by), _sub_term(f.b, v, by))
    if isinstance(f, Not):
        return Not(subst(f.f, v, by))
    if isinstance(f, Bin):
        return Bin(f.op, subst(f.l, v, by), subst(f.r, v, by))
    if f.v == v:
        return f
    return Quant(f.q, f.v, subst(f.body, v, by))


class OutOfFuel(Exception):
    pass


@dataclass
class Meter:
    fuel: int
    used: int = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.fuel:
            raise OutOfFuel


def _terms_of(f: Formula) -> list[Term]:
    if isinstance(f, Pred):
        return [f.t]
    if isinstance(f, (Rel, Eq)):
        return [f.a, f.b]
    if isinstance(f, Not):
        return _terms_of(f.f)
    return []


class _UF:
    def __init__(self) -> None:
        self.parent: dict[Term, Term] = {}

    def find(self, t: Term) -> Term:
        p = self.parent.setdefault(t, t)
        while p != t:
            self.parent[t] = self.parent.setdefault(p, p)
            t, p = p, self.parent[p]
        return t

    def union(self, a: Term, b: Term) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


@dataclass
class _Branch:
    todo: list[Formula]
    seen: set[Formula] = field(default_factory=set)
    atoms: list[Formula] = field(default_factory=list)  # literals
    universals: list[Formula] = field(default_factory=list)
    used: dict[Formula, set[Term]] = field(default_factory=dict)
    terms: set[Term] = field(default_factory=set)
    fresh: int = 0
    has_eq: bool = False

    def copy(self) -> "_Branch":
        return _Branch(
            list(self.todo),
            set(self.seen),
            list(self.atoms),
            list(self.universals),
            {k: set(v) for k, v in self.used.items()},
            set(self.terms),
            self.fresh,
            self.has_eq,
        )


def _all_subterms(terms: set[Term]) -> set[Term]:
    out = set()
    for t in terms:
        # S^k(b) has subterms S^j(b) for j <= k; cap the unfolding
        for j in range(max(0, t.k - 64), t.k + 1):
            out.add(Term(j, t.base))
    return out


def _closed_by_equality(br: _Branch) -> bool:
    """Congruence closure over the terms on the branch."""
    eqs = [a for a in br.atoms if isinstance(a, Eq)]
    terms = _all_subterms(br.terms)
    uf = _UF()
    for e in eqs:
        uf.union(e.a, e.b)
    if eqs:
        changed = True
        steps = [(t, Term(t.k + 1, t.base)) for t in terms]
        steps = [(t, s) for t, s in steps if s in terms]
        while changed:
            changed = False
            succ: dict[Term, Term] = {}  # class root -> a successor of a member
            for t, s in steps:
                r = uf.find(t)
                if r in succ:
                    changed |= uf.union(succ[r], s)
                else:
                    succ[r] = s
    pos: set[tuple] = set()
    neg: list[tuple] = []
    for lit in br.atoms:
        negated = isinstance(lit, Not)
        a = lit.f if negated else lit
        if isinstance(a, Eq):
            if negated and uf.find(a.a) == uf.find(a.b):
                return True
            continue
        key = ("P", uf.find(a.t)) if isinstance(a, Pred) else ("R", uf.find(a.a), uf.find(a.b))
        (neg.append(key) if negated else pos.add(key))
    return any(k in pos for k in neg)


def _add(br: _Branch, f: Formula) -> bool:
    """Put f on the branch; True if the branch closes syntactically."""
    if f in br.seen:
        return False
    if dual(f) in br.seen:
        return True
    br.seen.add(f)
    br.todo.append(f)
    for t in _terms_of(f):
        br.terms.add(t)
    return False


def _refute(br: _Branch, meter: Meter) -> bool:
    """True iff every branch below closes within fuel (raises OutOfFuel)."""
    while True:
        meter.tick()
        if br.todo:
            # alpha and literals first, then delta, then beta
            idx = _pick(br.todo)
            f = br.todo.pop(idx)
            if isinstance(f, (Pred, Rel, Eq, Not)):
                br.atoms.append(f)
                if isinstance(f, Not) and isinstance(f.f, Eq) and f.f.a == f.f.b:
                    return True
                if isinstance(f, Eq) and f.a != f.b:
                    br.has_eq = True
                # without equalities, clashes are caught syntactically by _add
                if br.has_eq and _closed_by_equality(br):
                    return True
                continue
            if isinstance(f, Bin) and f.op == "&":
                if _add(br, f.l) or _add(br, f.r):
                    return True
                continue
            if isinstance(f, Quant) and f.q == "ex":
                c = Term(0, f"#c{br.fresh}")
                br.fresh += 1
                if _add(br, subst(f.body, f.v, c)):
                    return True
                continue
            if isinstance(f, Quant):
                br.universals.append(f)
                br.used.setdefault(f, set())
                continue
            # beta: split
            other = br.copy()
            if not (_add(br, f.l) or _refute(br, meter)):
                return False
            return _add(other, f.r) or _refute(other, meter)
        # instantiate universals with every known ground term
        terms = br.terms or {Term(0, None)}
        progress = False
        for u in list(br.universals):
            done = br.used[u]
            for t in sorted(terms, key=lambda t: (t.k, t.base or "")):
                if t in done:
                    continue
                done.add(t)
                progress = True
                meter.tick()
                if _add(br, subst(u.body, u.v, t)):
                    return True
        if not progress:
            return False  # saturated and open


def _pick(todo: list[Formula]) -> int:
    for i in range(len(todo) - 1, -1, -1):
        f = todo[i]
        if not (isinstance(f, Bin) and f.op == "|"):
            return i
    return len(todo) - 1


def entails(premises: list[Formula], goal: Formula, fuel: int) -> tuple[bool, int]:
    """(proved, fuel used): tableau for premises plus the negated goal."""
    meter = Meter(fuel)
    br = _Branch([])
    try:
        for p in [*premises, Not(goal)]:
            meter.tick()
            if _add(br, nnf(p)):
                return True, meter.used
        return _refute(br, meter), meter.used
    except OutOfFuel:
        return False, meter.fuel
    except RecursionError:
        return False, meter.fuel
