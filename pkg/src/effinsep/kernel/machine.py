"""Register machine, its program numbering, and fueled evaluation.

The core instructions are ``INC r`` and ``DECJZ r k``.  On top of them sit
unit-cost instructions over arbitrary-size naturals (SET, MOV, ADD, PAIR,
UNPAIR, JEQ, JLT) and four structural ones:

* ``SMN d e a``   -- ``d := smn(e, a)``, the s-m-n specializer as an instruction
* ``EVAL d e x``  -- run program ``e`` on ``x`` as a subroutine, ``d := result``
* ``CLOCK d e x t`` -- run ``e`` on ``x`` for at most ``t`` steps; ``d := 0`` if it
  has not halted, else ``1 + steps`` (the value is discarded)
* ``PRIM d k s``  -- ``d := builtin_k(s)``, a fixed table of total functions

Every instruction executed in any frame costs one step of the single global
step counter, so nested simulation is paid for by the outermost fuel.
PAIR, UNPAIR, SMN, EVAL and CLOCK on big operands cost one more step per
``2**WORD_BITS`` bits of operand; an instruction whose cost overruns the
remaining budget does not complete.  This keeps host work proportional to
the steps charged, since values can double in size with every PAIR.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple, Union

from . import _fast
from . import builtins as _builtins
from .numbering import gtuple, guntuple, pair, seq_code, seq_decode, unpair

Index = int

WORD_BITS = 10


class Op(IntEnum):
    INC = 0
    DECJZ = 1
    SET = 2
    MOV = 3
    ADD = 4
    PAIR = 5
    UNPAIR = 6
    JEQ = 7
    JLT = 8
    SMN = 9
    EVAL = 10
    CLOCK = 11
    PRIM = 12


NOPS = len(Op)

# operand kinds: r = register, k = jump target, c = constant
SIGNATURE: dict[Op, str] = {
    Op.INC: "r",
    Op.DECJZ: "rk",
    Op.SET: "rc",
    Op.MOV: "rr",
    Op.ADD: "rrr",
    Op.PAIR: "rrr",
    Op.UNPAIR: "rrr",
    Op.JEQ: "rrk",
    Op.JLT: "rrk",
    Op.SMN: "rrr",
    Op.EVAL: "rrr",
    Op.CLOCK: "rrrr",
    Op.PRIM: "rcr",
}


class Instr(NamedTuple):
    op: Op
    args: tuple[int, ...]

    def __repr__(self) -> str:
        return f"{self.op.name}{self.args}"


def INC(r: int) -> Instr:
    return Instr(Op.INC, (r,))


def DECJZ(r: int, k: int) -> Instr:
    return Instr(Op.DECJZ, (r, k))


@dataclass(frozen=True)
class Program:
    instrs: tuple[Instr, ...] = ()

    def __len__(self) -> int:
        return len(self.instrs)

    @property
    def is_core(self) -> bool:
        """True when only INC/DECJZ occur."""
        return all(i.op <= Op.DECJZ for i in self.instrs)


class Halted(NamedTuple):
    value: int
    steps: int


class OutOfFuel(NamedTuple):
    steps: int


EvalOutcome = Union[Halted, OutOfFuel]


# -- numbering ----------------------------------------------------------------


def encode_instr(ins: Instr) -> int:
    if len(ins.args) != len(SIGNATURE[ins.op]):
        raise ValueError(f"{ins.op.name} takes {len(SIGNATURE[ins.op])} operands")
    return NOPS * gtuple(ins.args) + int(ins.op)


def decode_instr(c: int) -> Instr:
    op = Op(c % NOPS)
    return Instr(op, guntuple(c // NOPS, len(SIGNATURE[op])))


def encode_program(p: Program | list[Instr] | tuple[Instr, ...]) -> Index:
    instrs = p.instrs if isinstance(p, Program) else p
    return seq_code(encode_instr(i) for i in instrs)


@lru_cache(maxsize=8192)
def decode_program(e: Index) -> Program:
    return Program(tuple(decode_instr(c) for c in seq_decode(e)))


def smn(e: Index, a: int) -> Index:
    """Index of ``x -> phi_e(pair(a, x))``.

    The emitted program rebuilds ``a`` from literals and stores ``e``
    verbatim, so ``(e, a)`` is recoverable from the output and the map is
    injective.  A big ``a`` that is a lopsided pair is kept as its two
    components (see ``_build``): a Cantor pair of a huge and a small number is
    twice as long as the huge one, and nesting such pairs would double index
    sizes at every level of a construction.
    """
    ins: list[Instr] = []
    _build(ins, 1, a)
    ins += [Instr(Op.PAIR, (0, 1, 0)), Instr(Op.SET, (1, e)), Instr(Op.EVAL, (0, 1, 0))]
    return encode_program(ins)


_SPLIT_BITS = 256


def _build(ins: list[Instr], r: int, v: int) -> None:
    """Emit code leaving v in register r, using registers >= r only."""
    n = v.bit_length()
    if n > _SPLIT_BITS:
        u, w = unpair(v)
        if u.bit_length() + w.bit_length() + 32 < n:
            _build(ins, r, u)
            _build(ins, r + 1, w)
            ins.append(Instr(Op.PAIR, (r, r, r + 1)))
            return
    ins.append(Instr(Op.SET, (r, v)))


# -- compilation --------------------------------------------------------------


@lru_cache(maxsize=8192)
def _compile(e: Index) -> tuple[tuple, int]:
    """Decode and map register ids onto dense slots; slot 0 is register 0."""
    prog = decode_program(e)
    slots = {0: 0}
    code = []
    for ins in prog.instrs:
        row = [int(ins.op)]
        for kind, v in zip(SIGNATURE[ins.op], ins.args):
            if kind == "r":
                v = slots.setdefault(v, len(slots))
            row.append(v)
        row.extend([0] * (5 - len(row)))
        code.append(tuple(row))
    return tuple(code), len(slots)


# -- evaluation ---------------------------------------------------------------

# top-level runs of core programs go through the compiled loop when numba is on
_FAST_MIN = 256


@lru_cache(maxsize=4096)
def _core_table(e: Index):
    return _fast.core_table(_compile(e)[0])


_EVAL, _CLOCK = 0, 1

# Exact memo of finished subcomputations.  Runs are deterministic, so a
# known result (value, steps) or a known lower bound on the steps can stand
# in for re-simulation without changing any outcome or step count.  Only
# host time is saved; EFFINSEP_MEMO=0 turns it off (the tests compare both).
MEMO = os.environ.get("EFFINSEP_MEMO", "1") != "0"
_MEMO_MIN = 16
_MEMO_MAX = 200_000
_halts: dict[tuple[int, int], tuple[int, int]] = {}
_lower: dict[tuple[int, int], int] = {}


def clear_memo() -> None:
    _halts.clear()
    _lower.clear()


def _note_halt(key: tuple[int, int], value: int, steps: int) -> None:
    if steps >= _MEMO_MIN:
        if len(_halts) > _MEMO_MAX:
            _halts.clear()
        _halts[key] = (value, steps)
        _lower.pop(key, None)


def _note_lower(key: tuple[int, int], steps: int) -> None:
    if steps >= _MEMO_MIN and key not in _halts and _lower.get(key, -1) < steps:
        if len(_lower) > _MEMO_MAX:
            _lower.clear()
        _lower[key] = steps


def run(e: Index, x: int, fuel: int) -> EvalOutcome:
    """Run program ``e`` on input ``x`` for at most ``fuel`` steps."""
    memo = MEMO
    if memo:
        hit = _halts.get((e, x))
        if hit is not None:
            return Halted(*hit) if hit[1] <= fuel else OutOfFuel(fuel)
        if _lower.get((e, x), -1) >= fuel:
            return OutOfFuel(fuel)
    code, nregs = _compile(e)
    regs = [0] * nregs
    regs[0] = x
    pc = 0
    n = len(code)
    g = 0
    if _fast.COMPILED and fuel >= _FAST_MIN and 0 <= x < _fast.LIMIT:
        table = _core_table(e)
        if table is not None:
            status, fregs, pc, g = _fast.run_core(table, nregs, x, fuel)
            if status == _fast.HALTED:
                if memo:
                    _note_halt((e, x), fregs[0], g)
                return Halted(fregs[0], g)
            if status == _fast.OUT_OF_FUEL:
                if memo:
                    _note_lower((e, x), g)
                return OutOfFuel(fuel)
            regs = fregs  # a register got too large: go on exactly
    # saved frames: (code, regs, pc, n, kind, dest, start, limit, key)
    stack: list[tuple] = []
    deadline = None
    stop = fuel

    while True:
        if not 0 <= pc < n:
            if not stack:
                if memo:
                    _note_halt((e, x), regs[0], g)
                return Halted(regs[0], g)
            value = regs[0]
            code, regs, pc, n, kind, dest, start, limit, key = stack.pop()
            used = g - start
            if memo:
                _note_halt(key, value, used)
            if kind == _CLOCK:
                regs[dest] = 1 + used if used <= limit else 0
                deadline = _min_deadline(stack)
                stop = fuel if deadline is None else min(fuel, deadline)
            else:
                regs[dest] = value
            pc += 1
            continue

        if g >= stop:
            depth = _expired(stack, g)
            if memo:
                for fr in stack[depth or 0:]:
                    _note_lower(fr[8], g - fr[6])
            if depth is None:
                if memo:
                    _note_lower((e, x), g)
                return OutOfFuel(fuel)
            # abort the outermost expired clocked frame and everything above it
            frame = stack[depth]
            del stack[depth:]
            code, regs, pc, n = frame[0], frame[1], frame[2], frame[3]
            regs[frame[5]] = 0
            pc += 1
            deadline = _min_deadline(stack)
            stop = fuel if deadline is None else min(fuel, deadline)
            continue

        op, a, b, c, d = code[pc]
        g += 1
        if op == 1:  # DECJZ
            if regs[a]:
                regs[a] -= 1
                pc += 1
            elif b == pc:
                # self-loop on a zero register never exits: skip to the budget
                g = stop
            else:
                pc = b
        elif op == 0:  # INC
            regs[a] += 1
            pc += 1
        elif op == 2:  # SET
            regs[a] = b
            pc += 1
        elif op == 3:  # MOV
            regs[a] = regs[b]
            pc += 1
        elif op == 4:  # ADD
            regs[a] = regs[b] + regs[c]
            pc += 1
        elif op == 5:  # PAIR
            u, v = regs[b], regs[c]
            extra = (u.bit_length() + v.bit_length()) >> WORD_BITS
            if extra:
                g += extra
                if g > stop:
                    g = stop
                    continue
            regs[a] = pair(u, v)
            pc += 1
        elif op == 6:  # UNPAIR
            u = regs[c]
            extra = u.bit_length() >> WORD_BITS
            if extra:
                g += extra
                if g > stop:
                    g = stop
                    continue
            regs[a], regs[b] = unpair(u)
            pc += 1
        elif op == 7:  # JEQ
            pc = c if regs[a] == regs[b] else pc + 1
        elif op == 8:  # JLT
            pc = c if regs[a] < regs[b] else pc + 1
        elif op == 9:  # SMN
            u, v = regs[b], regs[c]
            extra = (u.bit_length() + v.bit_length()) >> WORD_BITS
            if extra:
                g += extra
                if g > stop:
                    g = stop
                    continue
            regs[a] = smn(u, v)
            pc += 1
        elif op == 10 or op == 11:  # EVAL / CLOCK
            callee_idx, arg = regs[b], regs[c]
            extra = callee_idx.bit_length() >> WORD_BITS
            if extra:
                g += extra
                if g > stop:
                    g = stop
                    continue
            key = (callee_idx, arg)
            if memo:
                # known outcome: charge exactly what simulation would
                hit = _halts.get(key)
                limit = regs[d] if op == 11 else None
                if hit is not None:
                    value, s = hit
                    if limit is None or s <= limit:
                        if g + s > stop:
                            g = stop
                            continue
                        g += s
                        regs[a] = value if limit is None else 1 + s
                        pc += 1
                        continue
                if limit is not None and (hit is not None or _lower.get(key, -1) >= limit):
                    if g + limit > stop:
                        g = stop
                        continue
                    g += limit
                    regs[a] = 0
                    pc += 1
                    continue
            callee, cregs = _compile(callee_idx)
            if op == 10:
                stack.append((code, regs, pc, n, _EVAL, a, g, 0, key))
            else:
                limit = regs[d]
                stack.append((code, regs, pc, n, _CLOCK, a, g, limit, key))
                if deadline is None or g + limit < deadline:
                    deadline = g + limit
                    stop = min(fuel, deadline)
            code, n = callee, len(callee)
            regs = [0] * cregs
            regs[0] = arg
            pc = 0
        else:  # PRIM
            budget = stop - g
            value, cost = _builtins.call(b, regs[c], budget)
            if cost > budget:
                # over budget: the builtin stopped early, so does this frame
                g = stop
                continue
            g += cost
            regs[a] = value
            pc += 1


def _min_deadline(stack: list[tuple]) -> int | None:
    best = None
    for fr in stack:
        if fr[4] == _CLOCK:
            dl = fr[6] + fr[7]
            if best is None or dl < best:
                best = dl
    return best


def _expired(stack: list[tuple], g: int) -> int | None:
    for depth, fr in enumerate(stack):
        if fr[4] == _CLOCK and fr[6] + fr[7] <= g:
            return depth
    return None


def kleene_t(e: Index, x: int, y: int) -> bool:
    """T1(e, x, y): program ``e`` on ``x`` halts after exactly ``y`` steps."""
    out = run(e, x, y)
    return isinstance(out, Halted) and out.steps == y


def halts_within(e: Index, x: int, fuel: int) -> bool:
    return isinstance(run(e, x, fuel), Halted)
