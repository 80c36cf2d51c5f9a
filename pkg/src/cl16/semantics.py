"""Runs, legality, interpretations and the winning-condition evaluator."""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .syntax import (
    CONJ,
    DISJ,
    OR,
    Cirquent,
    ClusterId,
    Const,
    Lit,
    Par,
    cluster_sort_key,
    letters_of,
)

MACHINE = "T"
ENVIRONMENT = "B"

ResolutionMap = Mapping[ClusterId, int]
Interpretation = Mapping[str, bool]


class Move(NamedTuple):
    cluster: ClusterId
    choice: int

    def __str__(self) -> str:
        return f"{self.cluster}.{self.choice}"


class LabeledMove(NamedTuple):
    player: str  # MACHINE or ENVIRONMENT
    move: Move

    def __str__(self) -> str:
        return f"{self.player} {self.move}"


Run = Sequence[LabeledMove]


@dataclass(frozen=True)
class Violation:
    index: int
    condition: int

    def __str__(self) -> str:
        return f"illegal move #{self.index}: violates legality condition {self.condition}"


class UncoveredLetterError(KeyError):
    pass


def check_legal(run: Run) -> Violation | None:
    """Return the first legality violation in ``run``, or None when legal."""
    seen: set[ClusterId] = set()
    for i, lm in enumerate(run):
        cluster = lm.move.cluster
        if cluster.polarity == DISJ and lm.player != MACHINE:
            return Violation(i, 2)
        if cluster.polarity == CONJ and lm.player != ENVIRONMENT:
            return Violation(i, 3)
        if cluster in seen:
            return Violation(i, 4)
        seen.add(cluster)
    return None


def resolution_of(run: Run) -> dict[ClusterId, int]:
    violation = check_legal(run)
    if violation is not None:
        raise ValueError(f"run is not legal: {violation}")
    return {lm.move.cluster: lm.move.choice for lm in run}


def win_eval(c: Cirquent, res: ResolutionMap, interp: Interpretation) -> bool:
    """True iff the machine wins ``c`` given the resolutions and interpretation."""
    t = type(c)
    if t is Par:
        if c.kind == OR:
            return win_eval(c.left, res, interp) or win_eval(c.right, res, interp)
        return win_eval(c.left, res, interp) and win_eval(c.right, res, interp)
    if t is Lit:
        try:
            v = interp[c.letter]
        except KeyError:
            raise UncoveredLetterError(c.letter) from None
        return v if c.positive else not v
    if t is Const:
        return c.value
    side = res.get(c.cluster)
    if side is None:
        # unresolved: lost if choice disjunction, won if choice conjunction
        return c.kind != OR
    return win_eval(c.right if side else c.left, res, interp)


def all_interpretations(letters: Iterable[str]) -> list[dict[str, bool]]:
    letters = sorted(letters)
    return [dict(zip(letters, values)) for values in product((False, True), repeat=len(letters))]


def truth_mask(c: Cirquent, res: ResolutionMap, letter_masks: Mapping[str, int], full: int) -> int:
    """Evaluate ``c`` under many interpretations at once.

    Bit ``j`` of ``letter_masks[p]`` is p's value in interpretation ``j``;
    bit ``j`` of the result is the winner under that interpretation.
    """
    t = type(c)
    if t is Par:
        if c.kind == OR:
            return truth_mask(c.left, res, letter_masks, full) | truth_mask(c.right, res, letter_masks, full)
        return truth_mask(c.left, res, letter_masks, full) & truth_mask(c.right, res, letter_masks, full)
    if t is Lit:
        m = letter_masks[c.letter]
        return m if c.positive else full ^ m
    if t is Const:
        return full if c.value else 0
    side = res.get(c.cluster)
    if side is None:
        return 0 if c.kind == OR else full
    return truth_mask(c.right if side else c.left, res, letter_masks, full)


def letter_masks_for(letters: Iterable[str]) -> tuple[dict[str, int], int]:
    """Bit masks enumerating all interpretations of ``letters`` (sorted order)."""
    return _letter_masks(tuple(sorted(letters)))


@lru_cache(maxsize=1024)
def _letter_masks(letters: tuple[str, ...]) -> tuple[dict[str, int], int]:
    n = 1 << len(letters)
    masks = {}
    for k, p in enumerate(letters):
        m = 0
        for j in range(n):
            if j >> k & 1:
                m |= 1 << j
        masks[p] = m
    return masks, (1 << n) - 1


def won_under_all(c: Cirquent, res: ResolutionMap) -> bool:
    masks, full = letter_masks_for(letters_of(c))
    return truth_mask(c, res, masks, full) == full


def dual_resolution(res: ResolutionMap) -> dict[ClusterId, int]:
    return {k.dual: v for k, v in res.items()}


# ---------------------------------------------------------------------------
# text formats

_MOVE_RE = re.compile(r"([dc])(\d+)\.([01])\Z")


def parse_run(text: str) -> list[LabeledMove]:
    """Parse ``T d1.0; B c2.1`` style run text."""
    tokens = text.replace(";", " ").split()
    if len(tokens) % 2:
        raise ValueError("run text must alternate labels and moves")
    run = []
    for label, mv in zip(tokens[::2], tokens[1::2]):
        if label not in (MACHINE, ENVIRONMENT):
            raise ValueError(f"bad move label {label!r}; expected T or B")
        m = _MOVE_RE.match(mv)
        if not m:
            raise ValueError(f"bad move {mv!r}; expected d<n>.<0|1> or c<n>.<0|1>")
        run.append(LabeledMove(label, Move(ClusterId(m.group(1), int(m.group(2))), int(m.group(3)))))
    return run


def format_run(run: Run) -> str:
    return "; ".join(str(lm) for lm in run)


def parse_interpretation(text: str) -> dict[str, bool]:
    interp: dict[str, bool] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or value not in ("0", "1") or not name:
            raise ValueError(f"bad interpretation entry {item!r}; expected p=0 or p=1")
        interp[name] = value == "1"
    return interp


def format_interpretation(interp: Interpretation) -> str:
    return ",".join(f"{p}={int(v)}" for p, v in sorted(interp.items()))


def format_resolution(res: ResolutionMap, clusters: Iterable[ClusterId] | None = None) -> str:
    """``{d1=0,c2=?}``; with ``clusters`` unresolved ones are shown as ``?``."""
    keys = sorted(set(res) | set(clusters or ()), key=cluster_sort_key)
    return "{" + ",".join(f"{k}={res.get(k, '?')}" for k in keys) + "}"
