from .machine import (
    DECJZ,
    INC,
    EvalOutcome,
    Halted,
    Index,
    Instr,
    Op,
    OutOfFuel,
    Program,
    decode_program,
    encode_program,
    halts_within,
    kleene_t,
    run,
    smn,
)
from .numbering import pair, proj0, proj1, tuple_code, unpair, untuple

__all__ = [
    "DECJZ",
    "INC",
    "EvalOutcome",
    "Halted",
    "Index",
    "Instr",
    "Op",
    "OutOfFuel",
    "Program",
    "decode_program",
    "encode_program",
    "halts_within",
    "kleene_t",
    "pair",
    "proj0",
    "proj1",
    "run",
    "smn",
    "tuple_code",
    "unpair",
    "untuple",
]
