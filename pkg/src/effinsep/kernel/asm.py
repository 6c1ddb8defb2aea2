"""Line-oriented assembly text for programs.

One instruction per line, operands separated by spaces; registers are written
``r<n>``, jump targets and constants as bare naturals, instruction indices are
0-based and ``;`` starts a comment::

    INC r0
    DECJZ r1 0      ; loops forever
    CLOCK r0 r1 r2 r3

``format_program`` emits the canonical form and ``parse_program`` reads it back
(comments and blank lines are dropped); the pair round-trips exactly.
"""

from __future__ import annotations

from .machine import SIGNATURE, Instr, Op, Program

__all__ = ["AsmError", "format_instr", "format_program", "parse_program"]


class AsmError(ValueError):
    pass


def format_instr(ins: Instr) -> str:
    parts = [ins.op.name]
    for kind, v in zip(SIGNATURE[ins.op], ins.args):
        parts.append(f"r{v}" if kind == "r" else str(v))
    return " ".join(parts)


def format_program(p: Program) -> str:
    return "".join(format_instr(i) + "\n" for i in p.instrs)


def _operand(tok: str, kind: str, lineno: int) -> int:
    if kind == "r":
        if not (tok.startswith("r") and tok[1:].isdigit()):
            raise AsmError(f"line {lineno}: expected register, got {tok!r}")
        return int(tok[1:])
    if not tok.isdigit():
        raise AsmError(f"line {lineno}: expected natural, got {tok!r}")
    return int(tok)


def parse_program(text: str) -> Program:
    instrs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        name, *toks = line.split()
        try:
            op = Op[name.upper()]
        except KeyError:
            raise AsmError(f"line {lineno}: unknown instruction {name!r}") from None
        sig = SIGNATURE[op]
        if len(toks) != len(sig):
            raise AsmError(f"line {lineno}: {op.name} takes {len(sig)} operands")
        instrs.append(Instr(op, tuple(_operand(t, k, lineno) for t, k in zip(toks, sig))))
    return Program(tuple(instrs))
