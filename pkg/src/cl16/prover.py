"""Proof search following the constructive completeness argument.

``prove`` purifies its input, dispatches on the shape of the pure cirquent
and recurses on strictly smaller cirquents obtained by Choosing (fixing a
disjunctive cluster) or Splitting (breaking a root choice conjunction).
The purification trace, reversed, then derives the original cirquent.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .calculus import Proof, RuleDescriptor, choose_all, choosing, premises_of, splitting
from .purifier import PurificationResult, TraceStep, purify
from .syntax import AND, OR, TOP, Choice, Cirquent, ClusterId, Const, Lit, Par, flatten, to_text


@dataclass(frozen=True)
class Derivation:
    """Proof tree: ``cirquent`` follows from ``premises`` by ``descriptor``."""

    cirquent: Cirquent
    descriptor: RuleDescriptor | None = None
    premises: tuple["Derivation", ...] = ()


AXIOM_DERIVATION = Derivation(TOP)


@dataclass
class Verdict:
    valid: bool
    cirquent: Cirquent
    proof: Proof | None = None
    reason: str = ""
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.valid


def _extend(base: Derivation, trace: Sequence[TraceStep]) -> Derivation:
    for step in reversed(trace):
        base = Derivation(step.before, step.descriptor, (base,))
    return base


def _choosing_candidates(b: Cirquent) -> list[ClusterId]:
    """Disjunctive clusters the machine may resolve first in pure ``b``."""
    if isinstance(b, Choice):
        return [b.cluster] if b.kind == OR else []
    if not isinstance(b, Par):
        return []
    if b.kind == OR:
        disjuncts = flatten(b, OR)
    else:
        # first conjunct that is not a choice conjunction
        e = next((x for x in flatten(b, AND) if not (isinstance(x, Choice) and x.kind == AND)), None)
        if e is None or isinstance(e, Lit):
            return []
        if isinstance(e, Choice):
            return [e.cluster]
        disjuncts = flatten(e, OR) if isinstance(e, Par) and e.kind == OR else []
    seen: list[ClusterId] = []
    for x in disjuncts:
        if isinstance(x, Choice) and x.kind == OR and x.cluster not in seen:
            seen.append(x.cluster)
    return seen


def _search_uncached(a: Cirquent) -> tuple[Derivation | None, str]:
    """Derivation of ``a`` (or None) together with a case tag."""
    result = purify(a)
    b = result.pure
    if b == TOP:
        return _extend(AXIOM_DERIVATION, result.trace), "axiom"
    if isinstance(b, Choice) and b.kind == AND:
        left, why = _search(b.left)
        if left is None:
            return None, f"splitting: left component fails ({why})"
        right, why = _search(b.right)
        if right is None:
            return None, f"splitting: right component fails ({why})"
        return _extend(Derivation(b, splitting(b.cluster), (left, right)), result.trace), "splitting"
    candidates = _choosing_candidates(b)
    if not candidates:
        if isinstance(b, (Const, Lit)):
            return None, "no literal or F is valid"
        return None, "no disjunctive cluster to choose"
    for cluster in candidates:
        for i in (0, 1):
            sub, _ = _search(choose_all(b, cluster, i))
            if sub is not None:
                return _extend(Derivation(b, choosing(cluster, i), (sub,)), result.trace), "choosing"
    return None, "every choice fails"


# Recursive subproblems recur constantly across related inputs; top-level
# queries go through _search_uncached so they do not flush this cache.
_search = lru_cache(maxsize=500_000)(_search_uncached)


def linearize(derivation: Derivation) -> Proof:
    """Flatten a derivation tree into numbered proof lines (shared lines reused)."""
    proof = Proof.axiom()
    index: dict[Cirquent, int] = {TOP: 1}

    # iterative post-order keeps deep purification chains off the call stack
    stack: list[tuple[Derivation, bool]] = [(derivation, False)]
    while stack:
        node, ready = stack.pop()
        if node.cirquent in index:
            continue
        if ready:
            premises = [index[p.cirquent] for p in node.premises]
            index[node.cirquent] = proof.add(node.cirquent, node.descriptor, premises)
            continue
        stack.append((node, True))
        for p in reversed(node.premises):
            stack.append((p, False))
    return proof


def prove(a: Cirquent, *, witness: bool = False) -> Verdict:
    """Decide validity of ``a``; valid verdicts carry a checkable proof."""
    derivation, why = _search_uncached(a)
    if derivation is not None:
        return Verdict(True, a, linearize(derivation), why)
    verdict = Verdict(False, a, reason=why)
    if witness:
        from .oracle import OracleCapError, decide_uniform

        try:
            verdict.witness = decide_uniform(a, witness=True).refutation
        except OracleCapError:
            pass
    return verdict


def derivation_from_trace(trace: Sequence[TraceStep] | PurificationResult, proof_of_b: Proof) -> Proof:
    """Append the reversed purification trace to a proof of its result."""
    if isinstance(trace, PurificationResult):
        trace = trace.trace
    proof = Proof(list(proof_of_b.lines))
    if not trace:
        return proof
    if proof.conclusion != trace[-1].after:
        raise ValueError(
            f"proof concludes {to_text(proof.conclusion)!r} but the trace ends with "
            f"{to_text(trace[-1].after)!r}"
        )
    prev = len(proof)
    for step in reversed(trace):
        if premises_of(step.before, step.descriptor) != [proof.lines[prev - 1].cirquent]:
            raise ValueError(f"trace step {step} does not replay")
        prev = proof.add(step.before, step.descriptor, [prev])
    return proof
