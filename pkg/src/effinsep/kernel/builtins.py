"""Fixed table of total host functions reachable through ``PRIM d k s``.

The table is part of the machine's semantics, so entries are resolved lazily
by dotted path and never re-bound.  Each entry maps ``(argument, budget)`` to
``(value, cost)``; ``cost`` extra steps are charged to the running program.
An entry whose cost would exceed ``budget`` may stop early and report any
cost above it; its value is then ignored.  Host work must stay proportional
to the cost charged, so arbitrary programs cannot stall the interpreter.
Unknown ids return 0 at no cost, keeping every program well defined.
"""

from __future__ import annotations

from importlib import import_module

TABLE: dict[int, str] = {
    0: "effinsep.metamath.builtins:classify_pair_axiom",
    1: "effinsep.metamath.builtins:classify_shoenfield_axiom",
    2: "effinsep.metamath.builtins:bounded_prove",
}

_resolved: dict[int, object] = {}


def call(k: int, arg: int, budget: int) -> tuple[int, int]:
    fn = _resolved.get(k)
    if fn is None:
        path = TABLE.get(k)
        if path is None:
            return 0, 0
        mod, name = path.split(":")
        fn = _resolved[k] = getattr(import_module(mod), name)
    return fn(arg, budget)
