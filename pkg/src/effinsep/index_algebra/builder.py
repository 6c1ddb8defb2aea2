"""Program builder: symbolic labels, fresh registers, and gadgets.

Register 0 carries input and output.  ``Asm`` hands out registers above a
high-water mark it owns, so gadgets expanded into the same builder never
share scratch registers.  A register that is never written (``self.zero``)
serves for unconditional jumps and for self-loops that diverge.
"""

from __future__ import annotations

from ..kernel.machine import Index, Instr, Op, Program, encode_program


class Label:
    __slots__ = ("name", "pos")

    def __init__(self, name: str = "") -> None:
        self.name = name
        self.pos: int | None = None

    def __repr__(self) -> str:
        return f"Label({self.name or id(self):}@{self.pos})"


class _End:
    """Jump target one past the last instruction: halts."""


END = _End()


class Asm:
    def __init__(self, hwm: int = 1) -> None:
        self._hwm = hwm
        self._code: list[tuple[Op, list]] = []
        self.zero = self.reg()

    # registers / labels

    def reg(self) -> int:
        r = self._hwm
        self._hwm += 1
        return r

    def regs(self, n: int) -> list[int]:
        return [self.reg() for _ in range(n)]

    def label(self, name: str = "") -> Label:
        return Label(name)

    def mark(self, label: Label) -> None:
        if label.pos is not None:
            raise ValueError(f"label {label!r} placed twice")
        label.pos = len(self._code)

    def here(self) -> int:
        return len(self._code)

    # raw instructions

    def emit(self, op: Op, *args) -> None:
        self._code.append((op, list(args)))

    def inc(self, r: int) -> None:
        self.emit(Op.INC, r)

    def decjz(self, r: int, target) -> None:
        self.emit(Op.DECJZ, r, target)

    def dec(self, r: int) -> None:
        """Decrement a register known to be nonzero (falls through either way)."""
        self.emit(Op.DECJZ, r, len(self._code) + 1)

    def set(self, r: int, value: int) -> None:
        self.emit(Op.SET, r, value)

    def mov(self, d: int, s: int) -> None:
        if d != s:
            self.emit(Op.MOV, d, s)

    def add(self, d: int, a: int, b: int) -> None:
        self.emit(Op.ADD, d, a, b)

    def pair(self, d: int, a: int, b: int) -> None:
        self.emit(Op.PAIR, d, a, b)

    def unpair(self, d0: int, d1: int, s: int) -> None:
        self.emit(Op.UNPAIR, d0, d1, s)

    def jeq(self, a: int, b: int, target) -> None:
        self.emit(Op.JEQ, a, b, target)

    def jlt(self, a: int, b: int, target) -> None:
        self.emit(Op.JLT, a, b, target)

    def smn(self, d: int, e: int, a: int) -> None:
        self.emit(Op.SMN, d, e, a)

    def eval(self, d: int, e: int, x: int) -> None:
        self.emit(Op.EVAL, d, e, x)

    def clock(self, d: int, e: int, x: int, t: int) -> None:
        self.emit(Op.CLOCK, d, e, x, t)

    def prim(self, d: int, k: int, s: int) -> None:
        self.emit(Op.PRIM, d, k, s)

    # control gadgets

    def jmp(self, target) -> None:
        self.emit(Op.DECJZ, self.zero, target)

    def halt(self) -> None:
        self.jmp(END)

    def diverge(self) -> None:
        self.emit(Op.DECJZ, self.zero, len(self._code))

    def jz(self, r: int, target) -> None:
        self.jeq(r, self.zero, target)

    def const(self, value: int) -> int:
        r = self.reg()
        self.set(r, value)
        return r

    def race(self, e1: int, x1: int, e2: int, x2: int, first1, first2, tie) -> None:
        """Run ``e1`` on ``x1`` and ``e2`` on ``x2`` in lockstep budgets.

        Jumps to ``first1`` when the first computation halts at a strictly
        smaller step count than the second (or the second never halts), to
        ``first2`` symmetrically, and to ``tie`` on equal step counts.  If
        neither halts the gadget runs forever.  Budgets double each round.
        """
        b, r1, r2 = self.regs(3)
        self.set(b, 1)
        loop, only2, grow = self.label("race"), self.label(), self.label()
        self.mark(loop)
        self.clock(r1, e1, x1, b)
        self.clock(r2, e2, x2, b)
        self.jz(r1, only2)
        self.jz(r2, first1)
        self.jlt(r1, r2, first1)
        self.jlt(r2, r1, first2)
        self.jmp(tie)
        self.mark(only2)
        self.jz(r2, grow)
        self.jmp(first2)
        self.mark(grow)
        self.add(b, b, b)
        self.jmp(loop)

    def either(self, e1: int, x1: int, e2: int, x2: int, target) -> None:
        """Jump to ``target`` once either computation halts; else run forever."""
        self.race(e1, x1, e2, x2, target, target, target)

    def unpack(self, pattern, src: int) -> dict[str, int]:
        """Destructure a Cantor-nested value per ``pattern`` into named registers."""
        out: dict[str, int] = {}

        def go(pat, r: int) -> None:
            if isinstance(pat, str):
                out[pat] = r
                return
            left, right = self.regs(2)
            self.unpair(left, right, r)
            go(pat[0], left)
            go(pat[1], right)

        if isinstance(pattern, str):
            r = self.reg()
            self.mov(r, src)
            out[pattern] = r
        else:
            go(pattern, src)
        return out

    # output

    def program(self) -> Program:
        n = len(self._code)
        instrs = []
        for op, args in self._code:
            resolved = []
            for a in args:
                if a is END:
                    a = n
                elif isinstance(a, Label):
                    if a.pos is None:
                        raise ValueError(f"unplaced label {a!r}")
                    a = a.pos
                resolved.append(a)
            instrs.append(Instr(op, tuple(resolved)))
        return Program(tuple(instrs))

    def index(self) -> Index:
        return encode_program(self.program())
