"""Sentences of two small first-order languages and their bijective numbering.

``L0SP`` has the constant 0, successor S and a unary predicate P; ``LR`` has a
single binary relation R.  Both have equality, the connectives ~ & | -> and
the quantifiers ``all`` / ``ex``.

Terms of L0SP are stored compactly as ``Term(k, base)`` meaning S^k(base),
so the numeral for a huge n costs nothing.  LR terms are bare variables.

Numbering (de Bruijn, relative to the number ``d`` of enclosing binders)::

    term at depth d        c = k * (d + 1) + b       b = 0 for 0, b = m + 1 for
                                                     the variable bound m
                                                     binders out
    L0SP formula           c = 8 * payload + tag     P 0, = 1, ~ 2, & 3, | 4,
                                                     -> 5, all 6, ex 7
    LR formula             first d*d codes R(u, v), next d*d codes u = v,
                           then 6 * payload + tag    all 0, ex 1, ~ 2, & 3,
                                                     | 4, -> 5

where binary payloads are ``pair(left, right)`` (Cantor), the P payload is
the term code, the = payload of L0SP is ``pair(t1, t2)`` and a quantifier's
payload is its body code at depth d + 1.  Every natural decodes to exactly
one closed sentence, so ``ungn`` never fails.  For instance gn(P(0)) = 0,
gn(P(n)) = 8n and gn(~P(n)) = 64n + 2.

Printed form (parsed back exactly)::

    formula := '~' formula | '(' formula op formula ')'
             | ('all' | 'ex') var '.' formula | atom
    op      := '&' | '|' | '->'
    atom    := 'P(' term ')' | term '=' term | 'R(' var ',' var ')'
    term    := numeral | var | var '+' numeral | 'S(' term ')'

S^k(x) is printed as x+k.

Bound variables of decoded sentences are named x0, x1, ... by depth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Literal, Union

from ..kernel.numbering import pair, unpair

Language = Literal["L0SP", "LR"]
LANGUAGES: tuple[Language, ...] = ("L0SP", "LR")


@dataclass(frozen=True)
class Term:
    k: int = 0
    base: str | None = None  # None is the constant 0

    def succ(self) -> "Term":
        return Term(self.k + 1, self.base)

    def __str__(self) -> str:
        if self.base is None:
            return str(self.k)
        return f"{self.base}+{self.k}" if self.k else self.base


def num(n: int) -> Term:
    return Term(n, None)


def var(name: str) -> Term:
    return Term(0, name)


@dataclass(frozen=True)
class Pred:
    t: Term


@dataclass(frozen=True)
class Rel:
    a: Term
    b: Term


@dataclass(frozen=True)
class Eq:
    a: Term
    b: Term


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class Bin:
    op: Literal["&", "|", "->"]
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Quant:
    q: Literal["all", "ex"]
    v: str
    body: "Formula"


Formula = Union[Pred, Rel, Eq, Not, Bin, Quant]
Sentence = Formula

BIN_OPS = ("&", "|", "->")
_TAG0 = {Pred: 0, Eq: 1}
_QTAG_LR = {"all": 0, "ex": 1}


class SyntaxError_(ValueError):
    """Malformed sentence text or a sentence outside the language."""


# -- helpers --------------------------------------------------------------------


def conj(parts: list[Formula], empty: Formula | None = None) -> Formula:
    """Balanced conjunction (keeps Cantor codes polynomial in size)."""
    return _balanced("&", parts, empty)


def disj(parts: list[Formula], empty: Formula | None = None) -> Formula:
    return _balanced("|", parts, empty)


def _balanced(op, parts, empty):
    if not parts:
        if empty is None:
            raise ValueError("empty connective needs a neutral sentence")
        return empty
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return Bin(op, _balanced(op, parts[:mid], empty), _balanced(op, parts[mid:], empty))


def exists(names: list[str], body: Formula) -> Formula:
    for v in reversed(names):
        body = Quant("ex", v, body)
    return body


def forall(names: list[str], body: Formula) -> Formula:
    for v in reversed(names):
        body = Quant("all", v, body)
    return body


def language_of(f: Formula) -> Language | None:
    """The language a formula belongs to (None when it fits both)."""
    seen: set[str] = set()
    for node in walk(f):
        if isinstance(node, Pred):
            seen.add("L0SP")
        elif isinstance(node, Rel):
            seen.add("LR")
        elif isinstance(node, Eq) and any(t.base is None or t.k for t in (node.a, node.b)):
            seen.add("L0SP")
    if len(seen) > 1:
        raise SyntaxError_("formula mixes both languages")
    return next(iter(seen), None)


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.f)
        elif isinstance(g, Bin):
            stack += [g.r, g.l]
        elif isinstance(g, Quant):
            stack.append(g.body)


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def free_vars(f: Formula, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(f, (Pred,)):
        terms = [f.t]
    elif isinstance(f, (Rel, Eq)):
        terms = [f.a, f.b]
    elif isinstance(f, Not):
        return free_vars(f.f, bound)
    elif isinstance(f, Bin):
        return free_vars(f.l, bound) | free_vars(f.r, bound)
    else:
        return free_vars(f.body, bound | {f.v})
    return {t.base for t in terms if t.base is not None and t.base not in bound}


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


# -- numbering ----------------------------------------------------------------------


def _term_code(t: Term, scope: list[str], lang: Language) -> int:
    d = len(scope)
    if t.base is None:
        b = 0
    else:
        try:
            b = scope[::-1].index(t.base) + 1
        except ValueError:
            raise SyntaxError_(f"free variable {t.base}") from None
    if lang == "LR":
        if t.k or t.base is None:
            raise SyntaxError_("LR has no function symbols or constants")
        return b - 1
    return t.k * (d + 1) + b


def _term_decode(c: int, depth: int, lang: Language) -> Term:
    if lang == "LR":
        return var(f"x{depth - 1 - c}")
    k, b = divmod(c, depth + 1)
    return Term(k, None if b == 0 else f"x{depth - b}")


def gn(f: Sentence, lang: Language | None = None) -> int:
    """Godel number of a sentence (language inferred unless given)."""
    lang = lang or language_of(f) or "L0SP"
    return _gn(f, [], lang)


def _gn(f: Formula, scope: list[str], lang: Language) -> int:
    # iterative on the spine of binary connectives would be faster, but
    # sentences here are shallow (balanced conjunctions)
    d = len(scope)
    if lang == "L0SP":
        if isinstance(f, Pred):
            return 8 * _term_code(f.t, scope, lang)
        if isinstance(f, Eq):
            return 8 * pair(_term_code(f.a, scope, lang), _term_code(f.b, scope, lang)) + 1
        if isinstance(f, Rel):
            raise SyntaxError_("R is not in L0SP")
        if isinstance(f, Not):
            return 8 * _gn(f.f, scope, lang) + 2
        if isinstance(f, Bin):
            return 8 * pair(_gn(f.l, scope, lang), _gn(f.r, scope, lang)) + 3 + BIN_OPS.index(f.op)
        return 8 * _gn(f.body, scope + [f.v], lang) + (6 if f.q == "all" else 7)
    # LR
    atoms = d * d
    if isinstance(f, (Rel, Eq)):
        u, v = _term_code(f.a, scope, lang), _term_code(f.b, scope, lang)
        return u * d + v + (atoms if isinstance(f, Eq) else 0)
    if isinstance(f, Pred):
        raise SyntaxError_("P is not in LR")
    if isinstance(f, Not):
        return 2 * atoms + 6 * _gn(f.f, scope, lang) + 2
    if isinstance(f, Bin):
        return 2 * atoms + 6 * pair(_gn(f.l, scope, lang), _gn(f.r, scope, lang)) + 3 + BIN_OPS.index(f.op)
    return 2 * atoms + 6 * _gn(f.body, scope + [f.v], lang) + _QTAG_LR[f.q]


def ungn(c: int, lang: Language = "L0SP") -> Sentence:
    """The sentence numbered ``c``; total on the naturals."""
    return _ungn(c, 0, lang)


def _ungn(c: int, depth: int, lang: Language) -> Formula:
    if lang == "L0SP":
        p, tag = divmod(c, 8)
        if tag == 0:
            return Pred(_term_decode(p, depth, lang))
        if tag == 1:
            a, b = unpair(p)
            return Eq(_term_decode(a, depth, lang), _term_decode(b, depth, lang))
        if tag == 2:
            return Not(_ungn(p, depth, lang))
        if tag <= 5:
            a, b = unpair(p)
            return Bin(BIN_OPS[tag - 3], _ungn(a, depth, lang), _ungn(b, depth, lang))
        return Quant("all" if tag == 6 else "ex", f"x{depth}", _ungn(p, depth + 1, lang))
    atoms = depth * depth
    if c < 2 * atoms:
        kind, uv = divmod(c, atoms)
        u, v = divmod(uv, depth)
        a, b = _term_decode(u, depth, lang), _term_decode(v, depth, lang)
        return Eq(a, b) if kind else Rel(a, b)
    p, tag = divmod(c - 2 * atoms, 6)
    if tag <= 1:
        return Quant("all" if tag == 0 else "ex", f"x{depth}", _ungn(p, depth + 1, lang))
    if tag == 2:
        return Not(_ungn(p, depth, lang))
    a, b = unpair(p)
    return Bin(BIN_OPS[tag - 3], _ungn(a, depth, lang), _ungn(b, depth, lang))


def canonical(f: Sentence, lang: Language | None = None) -> Sentence:
    """Rename bound variables to the x0, x1, ... scheme used by ``ungn``."""
    lang = lang or language_of(f) or "L0SP"
    return ungn(gn(f, lang), lang)


# -- printing and parsing --------------------------------------------------------------


def show(f: Formula) -> str:
    if isinstance(f, Pred):
        return f"P({f.t})"
    if isinstance(f, Rel):
        return f"R({f.a},{f.b})"
    if isinstance(f, Eq):
        return f"{f.a}={f.b}"
    if isinstance(f, Not):
        return "~" + show(f.f)
    if isinstance(f, Bin):
        return f"({show(f.l)} {f.op} {show(f.r)})"
    return f"{f.q} {f.v}.{show(f.body)}"


_TOKEN = re.compile(r"\s*(->|all\b|ex\b|[A-Za-z_][A-Za-z_0-9]*|\d+|[()~&|=.,+])")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxError_(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse(text: str) -> Sentence:
    toks = _tokens(text)
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def take(expect: str | None = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise SyntaxError_("unexpected end of input")
        t = toks[pos]
        if expect is not None and t != expect:
            raise SyntaxError_(f"expected {expect!r}, got {t!r}")
        pos += 1
        return t

    def term() -> Term:
        t = take()
        if t.isdigit():
            return num(int(t))
        if t == "S" and peek() == "(":
            take("(")
            inner = term()
            take(")")
            return inner.succ()
        if re.fullmatch(r"[a-z_][A-Za-z_0-9]*", t) and t not in ("all", "ex"):
            if peek() == "+":
                take()
                k = take()
                if not k.isdigit():
                    raise SyntaxError_(f"bad successor count {k!r}")
                return Term(int(k), t)
            return var(t)
        raise SyntaxError_(f"bad term {t!r}")

    def formula() -> Formula:
        t = peek()
        if t == "~":
            take()
            return Not(formula())
        if t in ("all", "ex"):
            take()
            v = take()
            take(".")
            return Quant(t, v, formula())  # type: ignore[arg-type]
        if t == "(":
            take()
            left = formula()
            if peek() == ")":  # redundant parentheses
                take()
                return left
            op = take()
            if op not in BIN_OPS:
                raise SyntaxError_(f"expected a connective, got {op!r}")
            right = formula()
            take(")")
            return Bin(op, left, right)  # type: ignore[arg-type]
        if t in ("P", "R") and pos + 1 < len(toks) and toks[pos + 1] == "(":
            take()
            take("(")
            a = term()
            if t == "P":
                take(")")
                return Pred(a)
            take(",")
            b = term()
            take(")")
            return Rel(a, b)
        a = term()
        take("=")
        return Eq(a, term())

    f = formula()
    if pos != len(toks):
        raise SyntaxError_(f"trailing input: {' '.join(toks[pos:])}")
    if not is_sentence(f):
        raise SyntaxError_(f"free variables: {sorted(free_vars(f))}")
    language_of(f)
    return f
