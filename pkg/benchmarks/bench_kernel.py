"""Time the core-program loop: numba build, numpy fallback, exact interpreter.

    python benchmarks/bench_kernel.py [--sizes 100 300 1000] [--repeat 3]

The workload squares its input with nested INC/DECJZ loops, so the step count
grows quadratically with the input.  All three paths must agree on value and
step count; the script checks that before it reports times.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from effinsep.kernel import _fast
from effinsep.kernel import machine as M
from effinsep.kernel.machine import DECJZ, INC, encode_program


def square_program() -> int:
    """r0 := r0 * r0 using only INC and DECJZ (r9 stays zero for jumps)."""
    J = 9  # always-zero register: DECJZ J, t is an unconditional jump
    code = [
        # 0: move r0 into r1 and r2
        DECJZ(0, 4),
        INC(1),
        INC(2),
        DECJZ(J, 0),
        # 4: outer loop over r1
        DECJZ(1, 13),
        # 5: inner loop: add r2 to r0, using r3 to restore r2
        DECJZ(2, 9),
        INC(0),
        INC(3),
        DECJZ(J, 5),
        # 9: restore r2 from r3
        DECJZ(3, 12),
        INC(2),
        DECJZ(J, 9),
        # 12
        DECJZ(J, 4),
        # 13: halt
    ]
    return encode_program(code)


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 1000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    e = square_program()
    code, nregs = M._compile(e)
    table = _fast.core_table(code)
    fuel = 10**12
    fallback = _fast._core_loop
    if _fast.COMPILED:
        _fast.core_loop(table, np.zeros(nregs, dtype=np.int64), 0, 0, 10)  # warm up the compiler

    print(f"numba {'on' if _fast.COMPILED else 'off (EFFINSEP_NUMBA=0)'}")
    print(f"{'x':>6} {'steps':>10} {'numba s':>10} {'numpy s':>10} {'exact s':>10}")
    for x in args.sizes:

        def with_numba():
            regs = np.zeros(nregs, dtype=np.int64)
            regs[0] = x
            st, pc, g = _fast.core_loop(table, regs, 0, 0, fuel)
            return int(regs[0]), int(g)

        def with_numpy():
            regs = np.zeros(nregs, dtype=np.int64)
            regs[0] = x
            st, pc, g = fallback(table, regs, 0, 0, fuel)
            return int(regs[0]), int(g)

        def exact():
            saved = _fast.COMPILED
            _fast.COMPILED = False
            M.clear_memo()
            try:
                r = M.run(e, x, fuel)
            finally:
                _fast.COMPILED = saved
            return r.value, r.steps

        t_exact, ref = _time(exact, args.repeat)
        t_numpy, got_np = _time(with_numpy, 1)
        t_numba, got_nb = _time(with_numba, args.repeat) if _fast.COMPILED else (float("nan"), ref)
        assert ref == got_np == got_nb == (x * x, ref[1]), (ref, got_np, got_nb)
        print(f"{x:>6} {ref[1]:>10} {t_numba:>10.4f} {t_numpy:>10.4f} {t_exact:>10.4f}")


if __name__ == "__main__":
    main()
