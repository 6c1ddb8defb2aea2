"""Theories as RE sets of sentence numbers, proof search, and their nuclei.

A theory's axiom set is a model program (a semi-decider over sentence
numbers), optionally shadowed by a host membership test.  The pair theory of
(A, B) over {0, S, P} has the axioms

* ``~(m = n)`` for m != n,
* ``P(n)`` for n in A,
* ``~P(n)`` for n in B.

Its axiom program classifies the code with a builtin and then runs the
semi-decider of A or B.  Provability is searched by ``prove``: stage k tests
the codes below k for axiomhood and runs the tableau prover on what it has,
all charged to one fuel budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from typing import Callable, Iterable

from ..index_algebra import Asm, ReSet, Transformer, const_fn, finite_members, preimage_transformer
from ..index_algebra.expr import Call, I, J, Pair, lam
from ..index_algebra.builder import END
from ..kernel.machine import Halted, Index, run
from ..kernel.numbering import label, pair, unpair
from ..pairs import ByConstruction, Decider, DisjointPair, Kind, PropertyWitness
from ..verify import Verdict, confirmed, unknown
from .prover import entails
from .syntax import Eq, Language, Not, Pred, Sentence, language_of, num, ungn

Membership = Callable[[int], "bool | None"]

# builtin ids, fixed by the kernel's table
PRIM_PAIR_AXIOM, PRIM_SHOENFIELD_AXIOM, PRIM_PROVE = 0, 1, 2

LANG_CODE = {"L0SP": 0, "LR": 1}


@dataclass(frozen=True)
class Theory:
    language: Language
    axioms: ReSet
    name: str = ""
    # host test of axiomhood: (True / False / None if unknown, steps spent)
    is_axiom: Callable[[int, int], "tuple[bool | None, int]"] | None = field(default=None, compare=False)


class LanguageError(ValueError):
    pass


# -- axiom classification (shared by host tests and builtins) -------------------


def classify_pair_code(c: int) -> int:
    """0: not an axiom; 1: an axiom outright; 2 + pair(k, n): axiom iff n in side k."""
    tag = c % 8
    if tag == 0:
        return 2 + pair(0, c // 8)
    if tag == 2:
        p, inner = divmod(c // 8, 8)
        if inner == 0:
            return 2 + pair(1, p)
        if inner == 1:
            m, n = unpair(p)
            return 1 if m != n else 0
    return 0


AxiomTest = Callable[[int, int], "tuple[bool | None, int]"]


def _side_test(s: ReSet) -> AxiomTest:
    table = finite_members(s.idx)
    if table is not None:
        return lambda n, fuel: (n in table, 1)

    def test(n: int, fuel: int) -> tuple[bool | None, int]:
        r = run(s.idx, n, fuel)
        return (True if isinstance(r, Halted) else None), max(1, r.steps)

    return test


@cache
def _dispatch_program(prim: int) -> Index:
    """On pair(pair(a, b), c): classify c with builtin ``prim``, then run a or b."""
    asm = Asm()
    r = asm.unpack((("a", "b"), "c"), 0)
    cls, side, n = asm.regs(3)
    no = asm.label()
    asm.prim(cls, prim, r["c"])
    asm.jz(cls, no)
    asm.dec(cls)
    asm.jz(cls, END)
    asm.dec(cls)
    asm.unpair(side, n, cls)
    second = asm.label()
    asm.jz(side, second)
    asm.eval(n, r["b"], n)
    asm.halt()
    asm.mark(second)
    asm.eval(n, r["a"], n)
    asm.halt()
    asm.mark(no)
    asm.diverge()
    return asm.index()


def _axiom_set(prim: int, a: Index, b: Index, note: str) -> ReSet:
    from ..kernel.machine import smn

    return ReSet(smn(_dispatch_program(prim), pair(a, b)), note)


def pair_theory(A: ReSet, B: ReSet, name: str = "") -> Theory:
    """T(A, B) over {0, S, P}; (A, B) must be disjoint."""
    tests = (_side_test(A), _side_test(B))

    def is_axiom(c: int, fuel: int) -> tuple[bool | None, int]:
        cls = classify_pair_code(c)
        if cls < 2:
            return cls == 1, 1
        k, n = unpair(cls - 2)
        return tests[k](n, fuel)

    name = name or f"T({A.provenance or label(A.idx)},{B.provenance or label(B.idx)})"
    return Theory("L0SP", _axiom_set(PRIM_PAIR_AXIOM, A.idx, B.idx, f"axioms of {name}"), name, is_axiom)


# -- provability --------------------------------------------------------------


def _check_language(t: Theory, s: Sentence) -> None:
    lang = language_of(s)
    if lang is not None and lang != t.language:
        raise LanguageError(f"sentence is in {lang}, theory {t.name} is in {t.language}")


def search(t: Theory, goal: Sentence, fuel: int) -> tuple[bool, int]:
    """Staged proof search; returns (proved, fuel used).

    Stage k admits the codes below k as candidate axioms, gives each
    undecided one k steps of its membership test, and then runs the prover
    on the axioms found so far with k steps.  k doubles per stage.
    """
    used = 0
    known: list[Sentence] = []
    pending: list[int] = []
    k = 1
    while used < fuel:
        pending.extend(range(k // 2 if k > 1 else 0, k))
        still = []
        for c in pending:
            if used >= fuel:
                return False, fuel
            budget = min(k, fuel - used)
            if t.is_axiom is not None:
                verdict, spent = t.is_axiom(c, budget)
            else:
                r = run(t.axioms.idx, c, budget)
                verdict, spent = (True if isinstance(r, Halted) else None), max(1, r.steps)
            used += spent
            if verdict is True:
                known.append(ungn(c, t.language))
            elif verdict is None:
                still.append(c)
        pending = still
        ok, spent = entails(known, goal, min(k, max(0, fuel - used)))
        used += spent
        if ok:
            return True, min(used, fuel)
        k *= 2
    return False, fuel


def prove(t: Theory, s: Sentence, fuel: int) -> Verdict:
    """Confirmed iff a proof turns up within fuel; never Refuted."""
    _check_language(t, s)
    ok, used = search(t, s, fuel)
    return confirmed(f"proof found using {used} fuel") if ok else unknown(fuel)


def atomic_oracle(A: Iterable[int] | Membership, B: Iterable[int] | Membership, s: Sentence) -> bool:
    """Exact provability in T(A, B) for atoms and negated atoms.

    P(n) is provable iff n in A: if n is not in A, interpreting P as exactly A
    gives a model of the theory (with B disjoint from A) where P(n) is false.
    Symmetrically ~P(n) is provable iff n in B, using P = A + {n}.  Equalities
    of numerals hold or fail outright.
    """
    in_a = A if callable(A) else frozenset(A).__contains__
    in_b = B if callable(B) else frozenset(B).__contains__
    neg = isinstance(s, Not)
    atom = s.f if neg else s
    if isinstance(atom, Pred) and atom.t.base is None:
        return bool(in_b(atom.t.k) if neg else in_a(atom.t.k))
    if isinstance(atom, Eq) and atom.a.base is None and atom.b.base is None:
        return (atom.a.k == atom.b.k) != neg
    raise ValueError("atomic_oracle takes closed atoms or their negations")


# -- nuclei ----------------------------------------------------------------------


@dataclass(frozen=True)
class TheoryNuclei:
    tp: ReSet
    tr: ReSet


@cache
def _nucleus_body() -> Index:
    """On pair(header, c): ask the proving builtin with fuel 1, 2, 4, ... forever."""
    asm = Asm()
    r = asm.unpack(("h", "c"), 0)
    f, q, res = asm.regs(3)
    again = asm.label()
    asm.set(f, 1)
    loop = asm.label("search")
    asm.mark(loop)
    asm.pair(q, r["c"], f)
    asm.pair(q, r["h"], q)
    asm.prim(res, PRIM_PROVE, q)
    asm.jz(res, again)
    asm.halt()
    asm.mark(again)
    asm.add(f, f, f)
    asm.jmp(loop)
    return asm.index()


_registry: dict[int, Theory] = {}


def register(t: Theory) -> int:
    """Key under which the proving builtin finds this theory's host shortcut."""
    _registry[t.axioms.idx] = t
    return t.axioms.idx


def theory_for(axioms: Index, lang: int) -> Theory:
    t = _registry.get(axioms)
    if t is None:
        t = Theory("L0SP" if lang == 0 else "LR", ReSet(axioms))
    return t


def nuclei(t: Theory) -> TheoryNuclei:
    """Semi-deciders of the provable and the refutable sentences."""
    from ..kernel.machine import smn

    register(t)
    lang = LANG_CODE[t.language]
    body = _nucleus_body()
    tp = ReSet(smn(body, pair(lang, pair(0, t.axioms.idx))), f"provable in {t.name}")
    tr = ReSet(smn(body, pair(lang, pair(1, t.axioms.idx))), f"refutable in {t.name}")
    return TheoryNuclei(tp, tr)


def prove_request(arg: int) -> tuple[Theory, Sentence, int]:
    """Decode the argument of the proving builtin: pair(header, pair(c, fuel))."""
    header, rest = unpair(arg)
    lang, rest2 = unpair(header)
    polarity, axioms = unpair(rest2)
    c, fuel = unpair(rest)
    t = theory_for(axioms, lang)
    s = ungn(c, t.language)
    return t, (Not(s) if polarity else s), fuel


def numeral_sentence(n: int) -> Sentence:
    return Pred(num(n))


def numeral_code(n: int) -> int:
    """gn(P(n)) = 8n."""
    return 8 * n


@cache
def numeral_map() -> Transformer:
    """n -> code of P(n), i.e. 8n, by three doublings."""
    asm = Asm()
    for _ in range(3):
        asm.add(0, 0, 0)
    return Transformer(asm.index(), numeral_code, "n -> code of P(n)")


def _closed_literal(f: Sentence) -> bool:
    atom = f.f if isinstance(f, Not) else f
    if isinstance(atom, Pred):
        return atom.t.base is None
    return isinstance(atom, Eq) and atom.a.base is None and atom.b.base is None


def _sentence_decider(t: Theory, atoms: Decider | None) -> Decider:
    """decide(side, code, fuel) for the nuclei: exact on closed literals when
    ``atoms`` decides (A, B), otherwise proof search (which never refutes)."""

    def decide(k: int, c: int, fuel: int) -> bool | None:
        s = ungn(c, t.language)
        goal = Not(s) if k else s
        if isinstance(goal, Not) and isinstance(goal.f, Not):
            goal = goal.f.f
        if atoms is not None and _closed_literal(goal):
            a = [atoms(side, n, fuel) for side, n in _literal_queries(goal)]
            if None in a:
                return None
            return atomic_oracle(lambda n: atoms(0, n, fuel), lambda n: atoms(1, n, fuel), goal)
        ok, _ = search(t, goal, fuel)
        return True if ok else None

    return decide


def _literal_queries(f: Sentence) -> list[tuple[int, int]]:
    neg = isinstance(f, Not)
    atom = f.f if neg else f
    return [(1 if neg else 0, atom.t.k)] if isinstance(atom, Pred) else []


def nuclei_pair(t: Theory, atoms: Decider | None = None) -> DisjointPair:
    """(T_P, T_R) as a disjoint pair; ``atoms`` decides the underlying (A, B)."""
    nu = nuclei(t)
    return DisjointPair(
        nu.tp,
        nu.tr,
        ByConstruction(f"{t.name} has a model"),
        f"nuclei({t.name})",
        _sentence_decider(t, atoms),
    )


def theory_of(p: DisjointPair) -> Theory:
    return pair_theory(p.a, p.b, f"T({p.name})")


def ei_theory_witness(w: PropertyWitness, f_map: Transformer | None = None) -> PropertyWitness:
    """EI for the nuclei of T(A, B) from EI for (A, B).

    With h the preimage transformer of f_map, s(i, j) = f_map(w(h(i), h(j))):
    if W_i, W_j cover the nuclei then W_{h(i)}, W_{h(j)} cover A and B.
    """
    if w.kind != Kind.EI:
        raise ValueError(f"need an EI witness, got {w.kind}")
    f_map = f_map or numeral_map()
    h = preimage_transformer(f_map)
    body = Call(f_map, Call(w.payload, Pair(Call(h, I), Call(h, J))))
    s = lam(("i", "j"), body, "f_map(w(h(i), h(j)))")
    t = theory_of(w.pair)
    return PropertyWitness(
        Kind.EI,
        s,
        nuclei_pair(t, w.pair.decide),
        derivation=(*w.derivation, "EI->nuclei [preimage transfer]"),
    )


def escape_witness(p: DisjointPair, value: int) -> PropertyWitness:
    """Constant ``value`` outside A and B, posing as an EI payload.

    Only sound against covers that miss ``value``; a finite pair has no
    genuine EI witness.
    """
    return PropertyWitness(Kind.EI, const_fn(value), p, derivation=(f"escape({value})",))


def independent_sentence(w: PropertyWitness, i: Index, j: Index, language: Language = "L0SP") -> Sentence:
    """The sentence coded by w(i, j); independent when W_i, W_j cover the nuclei disjointly."""
    return ungn(w.payload.call2(i, j), language)
