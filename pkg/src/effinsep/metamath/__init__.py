"""Sentences of two small languages, theories over them, and their nuclei."""

from .prover import entails
from .shoenfield import (
    classify_shoenfield_code,
    equivalence_axioms,
    ri_reduction_index,
    shoenfield_pair,
    shoenfield_sentences,
    shoenfield_theory,
)
from .syntax import Sentence, canonical, gn, parse, show, ungn
from .theory import (
    LanguageError,
    Theory,
    TheoryNuclei,
    atomic_oracle,
    ei_theory_witness,
    escape_witness,
    independent_sentence,
    nuclei,
    nuclei_pair,
    numeral_map,
    pair_theory,
    prove,
)

__all__ = [
    "LanguageError",
    "Sentence",
    "Theory",
    "TheoryNuclei",
    "atomic_oracle",
    "canonical",
    "classify_shoenfield_code",
    "ei_theory_witness",
    "entails",
    "equivalence_axioms",
    "escape_witness",
    "gn",
    "independent_sentence",
    "nuclei",
    "nuclei_pair",
    "numeral_map",
    "pair_theory",
    "parse",
    "prove",
    "ri_reduction_index",
    "shoenfield_pair",
    "shoenfield_sentences",
    "shoenfield_theory",
    "show",
    "ungn",
]
