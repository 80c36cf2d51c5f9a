"""Brute-force decision of uniform validity.

Positions are quotiented to resolution states: since every cluster admits at
most one move and the games are enumeration games, the order of moves never
matters, only which clusters have been resolved and how. A state is winning
for the machine when it can either resolve some disjunctive cluster into a
winning state, or wait: the current state is won under every interpretation
and every environment move leads to a winning state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .semantics import (
    ENVIRONMENT,
    MACHINE,
    LabeledMove,
    Move,
    _letter_masks,
    format_interpretation,
    letter_masks_for,
    truth_mask,
)
from .syntax import OR, Cirquent, ClusterId, Const, Lit, Par, atoms_of, cluster_sort_key, letters_of

DEFAULT_MAX_CLUSTERS = 12
DEFAULT_MAX_LETTERS = 10


class OracleCapError(ValueError):
    pass


class PolicyError(RuntimeError):
    """The policy has no action for a state it reached."""


class Resolve(NamedTuple):
    cluster: ClusterId
    choice: int

    def __str__(self) -> str:
        return f"{self.cluster}.{self.choice}"


WAIT = "wait"
Action = object  # WAIT or Resolve

# A state is a tuple aligned with GameAnalysis.clusters: None, 0 or 1.
State = tuple


@dataclass
class Decision:
    valid: bool
    cirquent: Cirquent
    clusters: tuple[ClusterId, ...]
    policy: dict[State, Action] = field(default_factory=dict)
    refutation: dict | None = None
    letters: tuple[str, ...] | None = None

    def resolution(self, state: State) -> dict[ClusterId, int]:
        return {c: v for c, v in zip(self.clusters, state) if v is not None}

    def action_for(self, res: Mapping[ClusterId, int]) -> Action:
        state = tuple(map(res.get, self.clusters))
        try:
            return self.policy[state]
        except KeyError:
            raise PolicyError(f"policy undefined at {self.state_text(state)}") from None

    def state_text(self, state: State) -> str:
        return "{" + ",".join(f"{c}={'?' if v is None else v}" for c, v in zip(self.clusters, state)) + "}"

    def dump_policy(self) -> str:
        lines = [f"state {self.state_text(s)} -> {a}" for s, a in self.policy.items()]
        return "\n".join(sorted(lines))


class GameAnalysis:
    """Memoized AND-OR search over the resolution states of one cirquent."""

    def __init__(self, c: Cirquent, max_clusters: int = DEFAULT_MAX_CLUSTERS,
                 max_letters: int = DEFAULT_MAX_LETTERS):
        self.cirquent = c
        clusters, letters = atoms_of(c)
        self.clusters = tuple(sorted(clusters, key=cluster_sort_key))
        if len(self.clusters) > max_clusters:
            raise OracleCapError(f"{len(self.clusters)} clusters exceed the cap of {max_clusters}")
        if len(letters) > max_letters:
            raise OracleCapError(f"{len(letters)} letters exceed the cap of {max_letters}")
        self.letters = sorted(letters)
        self.masks, self.full = letter_masks_for(self.letters)
        self.machine_slots = [i for i, c in enumerate(self.clusters) if c.disjunctive]
        self.env_slots = [i for i, c in enumerate(self.clusters) if not c.disjunctive]
        self.win: dict[State, bool] = {}
        self.choice: dict[State, Action] = {}

    def resolution(self, state: State) -> dict[ClusterId, int]:
        return {c: v for c, v in zip(self.clusters, state) if v is not None}

    def won_mask(self, state: State) -> int:
        return truth_mask(self.cirquent, self.resolution(state), self.masks, self.full)

    def solve(self, state: State) -> bool:
        known = self.win.get(state)
        if known is not None:
            return known
        action = None
        if self.won_mask(state) == self.full and all(
            self.solve(_set(state, i, v)) for i in self.env_slots if state[i] is None for v in (0, 1)
        ):
            action = WAIT
        else:
            for i in self.machine_slots:
                if state[i] is None:
                    for v in (0, 1):
                        if self.solve(_set(state, i, v)):
                            action = Resolve(self.clusters[i], v)
                            break
                if action is not None:
                    break
        self.win[state] = action is not None
        if action is not None:
            self.choice[state] = action
        return action is not None

    def initial(self) -> State:
        return (None,) * len(self.clusters)

    def policy(self) -> dict[State, Action]:
        """The winning actions restricted to states reachable under them."""
        out: dict[State, Action] = {}
        todo = [self.initial()]
        while todo:
            s = todo.pop()
            if s in out or not self.win.get(s):
                continue
            action = self.choice[s]
            out[s] = action
            if action == WAIT:
                todo.extend(_set(s, i, v) for i in self.env_slots if s[i] is None for v in (0, 1))
            else:
                todo.append(_set(s, self.clusters.index(action.cluster), action.choice))
        return out

    def refutation(self, state: State, budget: list[int]) -> dict:
        """Environment counter-strategy from a losing state (best effort)."""
        budget[0] -= 1
        node: dict = {"state": self._text(state), "responses": {}}
        if budget[0] <= 0:
            node["truncated"] = True
            return node
        mask = self.won_mask(state)
        if mask != self.full:
            bad = next(j for j in range(self.full.bit_length()) if not mask >> j & 1)
            node["responses"][WAIT] = {
                "environment": "stay",
                "falsified_by": format_interpretation(
                    {p: bool(self.masks[p] >> bad & 1) for p in self.letters}),
            }
        else:
            for i in self.env_slots:
                if state[i] is not None:
                    continue
                v = next((v for v in (0, 1) if not self.solve(_set(state, i, v))), None)
                if v is not None:
                    node["responses"][WAIT] = {
                        "environment": f"{self.clusters[i]}.{v}",
                        "then": self.refutation(_set(state, i, v), budget),
                    }
                    break
        for i in self.machine_slots:
            if state[i] is None:
                for v in (0, 1):
                    nxt = _set(state, i, v)
                    self.solve(nxt)
                    node["responses"][f"{self.clusters[i]}.{v}"] = self.refutation(nxt, budget)
        return node

    def _text(self, state: State) -> str:
        return "{" + ",".join(f"{c}={'?' if v is None else v}" for c, v in zip(self.clusters, state)) + "}"


def _set(state: State, i: int, v: int) -> State:
    return state[:i] + (v,) + state[i + 1:]


def decide_uniform(c: Cirquent, *, max_clusters: int = DEFAULT_MAX_CLUSTERS,
                   max_letters: int = DEFAULT_MAX_LETTERS, witness: bool = False,
                   refutation_budget: int = 200) -> Decision:
    """Decide whether ``c`` has a logical solution and extract one if so."""
    game = GameAnalysis(c, max_clusters, max_letters)
    valid = game.solve(game.initial())
    decision = Decision(valid, c, game.clusters, letters=tuple(game.letters))
    if valid:
        decision.policy = game.policy()
    elif witness:
        decision.refutation = game.refutation(game.initial(), [refutation_budget])
    return decision


def is_valid(c: Cirquent, max_clusters: int = DEFAULT_MAX_CLUSTERS,
             max_letters: int = DEFAULT_MAX_LETTERS) -> bool:
    # no clusters means no moves: valid iff won under every interpretation;
    # narrow masks first, widened when more letters turn up
    try:
        return _classical_mask(c, {}, _NARROW, _NARROW_FULL) == _NARROW_FULL
    except _HasChoice:
        pass
    except _TooManyLetters:
        if max_letters <= DEFAULT_MAX_LETTERS:
            try:
                return _classical_mask(c, {}, _WIDE[:max_letters], _WIDE_FULL) == _WIDE_FULL
            except _TooManyLetters:
                pass
    game = GameAnalysis(c, max_clusters, max_letters)
    return game.solve(game.initial())


class _HasChoice(Exception):
    pass


class _TooManyLetters(Exception):
    pass


def _slot_masks(width: int) -> tuple[list[int], int]:
    masks, full = letter_masks_for(range(width))
    return [masks[k] for k in range(width)], full


_NARROW, _NARROW_FULL = _slot_masks(4)
_WIDE, _WIDE_FULL = _slot_masks(DEFAULT_MAX_LETTERS)


def _classical_mask(c: Cirquent, slots: dict, masks: list[int], full: int) -> int:
    t = type(c)
    if t is Par:
        if c.kind == OR:
            return _classical_mask(c.left, slots, masks, full) | _classical_mask(c.right, slots, masks, full)
        return _classical_mask(c.left, slots, masks, full) & _classical_mask(c.right, slots, masks, full)
    if t is Lit:
        m = slots.get(c.letter)
        if m is None:
            if len(slots) == len(masks):
                raise _TooManyLetters
            m = slots[c.letter] = masks[len(slots)]
        return m if c.positive else full ^ m
    if t is Const:
        return full if c.value else 0
    raise _HasChoice


@dataclass
class SimulationResult:
    resolution: dict[ClusterId, int]
    run: list[LabeledMove]
    winners: dict[str, bool]  # interpretation text -> machine won

    @property
    def won_under_all(self) -> bool:
        return all(self.winners.values())


def simulate(c: Cirquent, decision: Decision,
             env_schedule: Sequence[tuple[ClusterId, int]]) -> SimulationResult:
    """Play the extracted policy against a fixed environment schedule.

    The machine acts until its policy says wait, then the next scheduled
    environment move is applied; play ends when the schedule is exhausted and
    the machine waits.
    """
    res: dict[ClusterId, int] = {}
    run: list[LabeledMove] = []
    pending = list(env_schedule)
    while True:
        action = decision.action_for(res)
        if action != WAIT:
            if action.cluster in res or not action.cluster.disjunctive:
                raise PolicyError(f"policy proposes illegal move {action}")
            res[action.cluster] = action.choice
            run.append(LabeledMove(MACHINE, Move(action.cluster, action.choice)))
            continue
        if not pending:
            break
        cluster, v = pending.pop(0)
        if cluster.disjunctive or cluster in res:
            raise ValueError(f"scheduled environment move {cluster}.{v} is illegal")
        res[cluster] = v
        run.append(LabeledMove(ENVIRONMENT, Move(cluster, v)))
    letters = decision.letters
    if letters is None or decision.cirquent is not c:
        letters = tuple(sorted(letters_of(c)))
    masks, full = _letter_masks(letters)
    won = truth_mask(c, res, masks, full)
    winners = {label: bool(won >> j & 1) for j, label in enumerate(_interpretation_labels(letters))}
    return SimulationResult(res, run, winners)


@lru_cache(maxsize=1024)
def _interpretation_labels(letters: tuple[str, ...]) -> tuple[str, ...]:
    masks, full = _letter_masks(letters)
    return tuple(
        format_interpretation({p: bool(masks[p] >> j & 1) for p in letters})
        for j in range(full.bit_length())
    )


def environment_schedules(clusters: Iterable[ClusterId]) -> list[list[tuple[ClusterId, int]]]:
    """Every sequence of distinct conjunctive-cluster moves (including empty)."""
    conj = [c for c in clusters if not c.disjunctive]
    out: list[list[tuple[ClusterId, int]]] = []

    def extend(prefix: list, remaining: list):
        out.append(prefix)
        for k, cl in enumerate(remaining):
            rest = remaining[:k] + remaining[k + 1:]
            for v in (0, 1):
                extend(prefix + [(cl, v)], rest)

    extend([], conj)
    return out
