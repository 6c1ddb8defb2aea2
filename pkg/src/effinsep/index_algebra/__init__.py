"""Building programs inside the model: specializer, universal program, gadgets."""

from ..kernel.machine import smn
from .builder import END, Asm, Label
from .library import (
    ALL,
    LOOP,
    Diverged,
    ReSet,
    Transformer,
    as_transformer,
    compose_idx,
    const_fn,
    curry,
    finite_members,
    finite_set_index,
    intersection,
    pad,
    preimage_transformer,
    run_total,
    singleton,
    smn_fn,
    swap_program,
    union,
    universal,
)

__all__ = [
    "ALL",
    "END",
    "LOOP",
    "Asm",
    "Diverged",
    "Label",
    "ReSet",
    "Transformer",
    "as_transformer",
    "compose_idx",
    "const_fn",
    "curry",
    "finite_members",
    "finite_set_index",
    "intersection",
    "pad",
    "preimage_transformer",
    "run_total",
    "singleton",
    "smn",
    "smn_fn",
    "swap_program",
    "union",
    "universal",
]
