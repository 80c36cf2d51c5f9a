"""Cirquent generators and the prover-versus-oracle differential sweep."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .calculus import check_proof
from .oracle import decide_uniform, environment_schedules, simulate
from .prover import prove
from .syntax import AND, BOT, CONJ, DISJ, OR, TOP, Choice, Cirquent, ClusterId, Lit, Par, to_text

LETTER_POOL = "pqrstuvwxyz"


def letter_pool(k: int) -> list[str]:
    if not 0 <= k <= len(LETTER_POOL):
        raise ValueError(f"between 0 and {len(LETTER_POOL)} letters supported")
    return list(LETTER_POOL[:k])


def cluster_pool(m: int) -> list[ClusterId]:
    """``m`` clusters alternating polarity: d1, c1, d2, c2, ..."""
    return [ClusterId(DISJ if j % 2 == 0 else CONJ, j // 2 + 1) for j in range(m)]


def leaves(letters: Sequence[str]) -> list[Cirquent]:
    out: list[Cirquent] = [TOP, BOT]
    for p in letters:
        out += [Lit(p, True), Lit(p, False)]
    return out


def _builders(clusters: Sequence[ClusterId]):
    ops = [lambda l, r: Par(OR, l, r), lambda l, r: Par(AND, l, r)]
    for cl in clusters:
        kind = OR if cl.polarity == DISJ else AND
        ops.append(lambda l, r, cl=cl, kind=kind: Choice(kind, cl, l, r))
    return ops


def enumerate_cirquents(max_nodes: int, letters: Sequence[str],
                        clusters: Sequence[ClusterId]) -> Iterator[Cirquent]:
    """Every cirquent with at most ``max_nodes`` connectives over the given atoms."""
    base = leaves(letters)
    ops = _builders(clusters)

    @lru_cache(maxsize=None)
    def exactly(n: int) -> tuple[Cirquent, ...]:
        return tuple(_exactly(n))

    def _exactly(n: int) -> Iterator[Cirquent]:
        if n == 0:
            yield from base
            return
        for k in range(n):
            lefts = exactly(k) if k < max_nodes else ()
            rights = exactly(n - 1 - k)
            for op in ops:
                for l in lefts:
                    for r in rights:
                        yield op(l, r)

    for n in range(max_nodes + 1):
        # the largest size is streamed rather than materialized
        yield from (exactly(n) if n < max_nodes else _exactly(n))


def count_cirquents(max_nodes: int, n_letters: int, n_clusters: int) -> int:
    from math import comb

    leaves_n, ops_n = 2 + 2 * n_letters, 2 + n_clusters
    return sum(comb(2 * n, n) // (n + 1) * ops_n**n * leaves_n ** (n + 1) for n in range(max_nodes + 1))


def random_cirquent(rng: random.Random, max_nodes: int, letters: Sequence[str],
                    clusters: Sequence[ClusterId]) -> Cirquent:
    base = leaves(letters)
    ops = _builders(clusters)

    def build(n: int) -> Cirquent:
        if n == 0:
            return rng.choice(base)
        k = rng.randrange(n)
        return rng.choice(ops)(build(k), build(n - 1 - k))

    return build(rng.randint(0, max_nodes))


@dataclass
class SweepReport:
    total: int = 0
    valid: int = 0
    checked_proofs: int = 0
    disagreements: list[tuple[str, bool, bool]] = field(default_factory=list)
    bad_proofs: list[tuple[str, str]] = field(default_factory=list)
    seconds: float = 0.0
    # filled only when policies are simulated
    policy_runs: int = 0
    policy_failures: list[tuple[str, str]] = field(default_factory=list)
    policy_seconds: float = 0.0

    @property
    def agreement(self) -> float:
        return 1.0 if not self.total else 1 - len(self.disagreements) / self.total

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.bad_proofs and not self.policy_failures

    def summary(self) -> str:
        lines = [
            f"cirquents: {self.total}",
            f"valid: {self.valid}",
            f"proofs checked: {self.checked_proofs}",
            f"agreement: {self.agreement:.4%}".replace(".0000%", "%"),
            f"counterexamples: {len(self.disagreements)}",
            f"rejected proofs: {len(self.bad_proofs)}",
            f"time: {self.seconds:.1f}s",
        ]
        if self.policy_runs:
            lines += [
                f"policy simulations: {self.policy_runs}",
                f"policy failures: {len(self.policy_failures)}",
                f"policy time: {self.policy_seconds:.1f}s",
            ]
        for text, p, o in self.disagreements[:20]:
            lines.append(f"  DISAGREE {text}: prover={'VALID' if p else 'INVALID'} oracle={'VALID' if o else 'INVALID'}")
        for text, err in self.bad_proofs[:20]:
            lines.append(f"  BAD PROOF {text}: {err}")
        for text, schedule in self.policy_failures[:20]:
            lines.append(f"  POLICY LOSES {text} against {schedule}")
        return "\n".join(lines)


def differential_sweep(cirquents, *, check: bool = True, policies: bool = False) -> SweepReport:
    """Compare prover and oracle verdicts on every cirquent.

    With ``policies`` each oracle-valid cirquent's extracted policy is also
    played against every environment schedule; that work is timed apart in
    ``policy_seconds`` and excluded from ``seconds``.
    """
    report = SweepReport()
    clock = time.perf_counter
    start = clock()
    for c in cirquents:
        report.total += 1
        verdict = prove(c)
        decision = decide_uniform(c)
        truth = decision.valid
        if verdict.valid != truth:
            report.disagreements.append((to_text(c), verdict.valid, truth))
        if verdict.valid:
            report.valid += 1
            if check:
                result = check_proof(verdict.proof)
                report.checked_proofs += 1
                if not result.ok or result.conclusion != c:
                    report.bad_proofs.append((to_text(c), str(result.error or "wrong conclusion")))
        if policies and truth:
            t = clock()
            for schedule in environment_schedules(decision.clusters):
                report.policy_runs += 1
                if not simulate(c, decision, schedule).won_under_all:
                    shown = ", ".join(f"{k}.{v}" for k, v in schedule)
                    report.policy_failures.append((to_text(c), f"[{shown}]"))
            report.policy_seconds += clock() - t
    report.seconds = clock() - start - report.policy_seconds
    return report
