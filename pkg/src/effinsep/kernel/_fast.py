"""Compiled loop for core programs (INC and DECJZ only).

Registers live in an int64 array, so the loop bails out before any register
could overflow and the caller resumes in the exact interpreter from the
returned state.  ``EFFINSEP_NUMBA=0`` (or numba missing) selects the same
loop run by the Python interpreter over numpy arrays.
"""

from __future__ import annotations

import os

import numpy as np

HALTED, OUT_OF_FUEL, OVERFLOW = 0, 1, 2
LIMIT = 1 << 62


def _core_loop(code: np.ndarray, regs: np.ndarray, pc: int, g: int, fuel: int):
    n = code.shape[0]
    while True:
        if pc < 0 or pc >= n:
            return HALTED, pc, g
        if g >= fuel:
            return OUT_OF_FUEL, pc, g
        op = code[pc, 0]
        a = code[pc, 1]
        if op == 0:
            if regs[a] >= LIMIT:
                return OVERFLOW, pc, g
            regs[a] += 1
            pc += 1
        else:
            if regs[a] != 0:
                regs[a] -= 1
                pc += 1
            elif code[pc, 2] == pc:
                g = fuel - 1  # stalls on a zero register
            else:
                pc = code[pc, 2]
        g += 1


def _select():
    if os.environ.get("EFFINSEP_NUMBA", "1") == "0":
        return _core_loop, False
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return _core_loop, False
    return njit(cache=True, nogil=True)(_core_loop), True


core_loop, COMPILED = _select()


def core_table(code: tuple) -> np.ndarray | None:
    """(n, 3) int64 table of (op, reg, target) if the program is core-only."""
    if any(row[0] > 1 for row in code):
        return None
    return np.array([row[:3] for row in code], dtype=np.int64).reshape(len(code), 3)


def run_core(table: np.ndarray, nregs: int, x: int, fuel: int):
    """(status, regs as ints, pc, steps)."""
    regs = np.zeros(max(nregs, 1), dtype=np.int64)
    regs[0] = x
    status, pc, g = core_loop(table, regs, 0, 0, fuel)
    return int(status), [int(v) for v in regs], int(pc), int(g)
