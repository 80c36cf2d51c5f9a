"""Cirquent calculus for the propositional fragment of computability logic.

Parsing and printing, game semantics, a brute-force validity oracle, a proof
checker, the purification procedure and a complete proof search.
"""

from .calculus import Proof, RuleDescriptor, check_proof, premises_of
from .oracle import decide_uniform, is_valid, simulate
from .prover import derivation_from_trace, prove
from .purifier import is_pure, purify
from .semantics import check_legal, win_eval
from .syntax import negate, parse, rank, to_text

__all__ = [
    "Proof", "RuleDescriptor", "check_proof", "premises_of",
    "decide_uniform", "is_valid", "simulate",
    "derivation_from_trace", "prove",
    "is_pure", "purify",
    "check_legal", "win_eval",
    "negate", "parse", "rank", "to_text",
]
