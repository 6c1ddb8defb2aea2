"""Pairing functions and the bijective numbering of programs.

Two pairings live here. ``pair``/``proj0``/``proj1`` is the Cantor pairing and
is the one programs see: multi-ary arguments, Example-style decompositions
``(n)_0``, ``(n)_1`` and every tuple passed through register 0 use it.

``gpair`` is a *size-graded* pairing used only inside the program numbering.
Its output has roughly ``bits(a) + bits(b)`` bits, where Cantor roughly doubles
the larger operand.  Program indices embed other program indices (s-m-n,
fixed points), so a numbering built on Cantor grows doubly exponentially with
nesting depth; the graded pairing keeps index size additive.
"""

from __future__ import annotations

from math import isqrt

try:
    import gmpy2
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    gmpy2 = None

# above this size GMP arithmetic beats CPython's, conversions included
_BIG = 1500

__all__ = [
    "pair",
    "proj0",
    "proj1",
    "unpair",
    "tuple_code",
    "untuple",
    "gpair",
    "gunpair",
    "seq_code",
    "seq_decode",
]


# Huge pairs are usually unpaired again soon (tuples passed between
# programs), and isqrt on millions of bits is slow; remember recent ones.
_MEMO_BITS = 1 << 16
_MEMO_BUDGET = 1 << 31
_memo: dict[int, tuple[int, int]] = {}
_fwd: dict[tuple[int, int], int] = {}
_memo_bits = 0


def _remember(n: int, a: int, b: int) -> None:
    global _memo_bits
    size = n.bit_length()
    if _memo_bits + size > _MEMO_BUDGET:
        _memo.clear()
        _fwd.clear()
        _memo_bits = 0
    _memo[n] = (a, b)
    _fwd[a, b] = n
    _memo_bits += size


def pair(a: int, b: int) -> int:
    """Cantor pairing ``(a+b)(a+b+1)/2 + b``."""
    s = a + b
    if gmpy2 is not None and s.bit_length() > _BIG:
        big = s.bit_length() > _MEMO_BITS
        if big:
            hit = _fwd.get((a, b))
            if hit is not None:
                return hit
        m = mpz(s)
        n = int((m * (m + 1) >> 1) + b)
        if big:
            _remember(n, a, b)
        return n
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    if gmpy2 is not None and n.bit_length() > _BIG:
        if n.bit_length() > _MEMO_BITS:
            hit = _memo.get(n)
            if hit is not None:
                return hit
        m = mpz(n)
        w = (gmpy2.isqrt(8 * m + 1) - 1) >> 1
        b = m - (w * (w + 1) >> 1)
        a, b = int(w - b), int(b)
        if n.bit_length() > _MEMO_BITS:
            _remember(n, a, b)
        return a, b
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def proj0(n: int) -> int:
    return unpair(n)[0]


def proj1(n: int) -> int:
    return unpair(n)[1]


def tuple_code(*xs: int) -> int:
    """Right-nested Cantor tuple: ``<x1, <x2, ... xk>>``."""
    if not xs:
        raise ValueError("empty tuple has no code")
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = pair(x, acc)
    return acc


def untuple(n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k - 1):
        a, n = unpair(n)
        out.append(a)
    out.append(n)
    return tuple(out)


# -- graded pairing -----------------------------------------------------------
#
# A natural n is read as the bit string of n+1 with its leading 1 removed, so
# length L(n) = bitlen(n+1) - 1 and value u(n) = n + 1 - 2**L.  Pairs are laid
# out in blocks by s = L(a) + L(b); inside a block by q = L(b), then by the
# concatenated bits.  Block s starts at base(s) = (s-1) * 2**s + 1.


def _base(s: int) -> int:
    return (s - 1) * (1 << s) + 1 if s else 0


def gpair(a: int, b: int) -> int:
    p = (a + 1).bit_length() - 1
    q = (b + 1).bit_length() - 1
    ua = a + 1 - (1 << p)
    ub = b + 1 - (1 << q)
    s = p + q
    return _base(s) + (q << s) + (ua << q) + ub


def gunpair(n: int) -> tuple[int, int]:
    m = n.bit_length()
    s = max(0, m - m.bit_length())
    while s and _base(s) > n:
        s -= 1
    while _base(s + 1) <= n:
        s += 1
    r = n - _base(s)
    q = r >> s
    w = r & ((1 << s) - 1)
    p = s - q
    ua = w >> q
    ub = w & ((1 << q) - 1)
    return ua + (1 << p) - 1, ub + (1 << q) - 1


def gtuple(xs: tuple[int, ...]) -> int:
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = gpair(x, acc)
    return acc


def guntuple(n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k - 1):
        a, n = gunpair(n)
        out.append(a)
    out.append(n)
    return tuple(out)


def seq_code(xs) -> int:
    """Finite sequences: empty -> 0, cons(a, rest) -> gpair(a, code(rest)) + 1."""
    acc = 0
    for x in reversed(list(xs)):
        acc = gpair(x, acc) + 1
    return acc


def seq_decode(n: int) -> list[int]:
    out = []
    while n:
        a, n = gunpair(n - 1)
        out.append(a)
    return out


def label(n: int) -> str:
    """Decimal for modest numbers, a bit-length tag for huge ones."""
    return str(n) if n.bit_length() <= 80 else f"<{n.bit_length()}-bit>"
