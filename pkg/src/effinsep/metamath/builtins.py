"""Host side of the metamath builtins reachable through ``PRIM``.

Every entry takes ``(argument, budget)`` and returns ``(value, cost)`` with
host work proportional to the cost.
"""

from __future__ import annotations


def _size_cost(n: int) -> int:
    return 1 + n.bit_length() // 64


def classify_pair_axiom(arg: int, budget: int) -> tuple[int, int]:
    from .theory import classify_pair_code

    return classify_pair_code(arg), _size_cost(arg)


def classify_shoenfield_axiom(arg: int, budget: int) -> tuple[int, int]:
    from .shoenfield import classify_shoenfield_code

    cost = _size_cost(arg)
    if arg.bit_length() > 64 * budget:
        return 0, budget + 1
    return classify_shoenfield_code(arg), cost


def bounded_prove(arg: int, budget: int) -> tuple[int, int]:
    """On pair(header, pair(code, fuel)): 1 if a proof turns up within fuel."""
    from .theory import prove_request, search

    base = _size_cost(arg)
    if base > budget:
        return 0, budget + 1
    t, goal, fuel = prove_request(arg)
    fuel = max(fuel, 1)
    ok, used = search(t, goal, min(fuel, budget - base))
    if ok:
        return 1, base + used
    if fuel > budget - base:
        return 0, budget + 1
    return 0, base + used
