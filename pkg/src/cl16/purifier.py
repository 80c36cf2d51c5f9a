"""Purity check and the seven-stage purification rewrite.

Every rewrite performed by :func:`purify` is an application of an inference
rule read from conclusion to premise, so the recorded trace, replayed in
reverse, derives the input from the purified cirquent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from .calculus import (
    RuleDescriptor,
    associativity,
    cleansing,
    commutativity,
    distribution,
    domination,
    identity,
    premises_of,
    quadrilemma,
    trivialization,
)
from .syntax import (
    AND,
    BOT,
    CONJ,
    OR,
    TOP,
    Choice,
    Cirquent,
    ClusterId,
    Lit,
    Par,
    Path,
    clusters_of,
    flatten,
    format_path,
    has_cluster,
    iter_nodes,
    subcirquent_at,
    to_text,
)


@dataclass(frozen=True)
class Violation:
    condition: int
    path: Path


@dataclass(frozen=True)
class PurityReport:
    violations: tuple[Violation, ...]

    @property
    def pure(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.pure

    def conditions(self) -> set[int]:
        return {v.condition for v in self.violations}


def is_pure(c: Cirquent) -> PurityReport:
    found: list[Violation] = []

    def walk(node: Cirquent, path: Path, under_or: bool, parent_or: bool):
        if node == BOT and path:
            found.append(Violation(1, path))
        elif node == TOP and path:
            found.append(Violation(5, path))
        elif isinstance(node, Par):
            if node.kind == AND and under_or:
                found.append(Violation(2, path))
            if node.kind == OR and not parent_or:
                lits = {d for d in flatten(node, OR) if isinstance(d, Lit)}
                if any(Lit(d.letter, not d.positive) in lits for d in lits):
                    found.append(Violation(4, path))
            is_or = node.kind == OR
            walk(node.left, path + (0,), under_or or is_or, is_or)
            walk(node.right, path + (1,), under_or or is_or, is_or)
        elif isinstance(node, Choice) and node.kind == AND and under_or:
            found.append(Violation(3, path))

    walk(c, (), False, False)
    if isinstance(c, Par) and c.kind == AND:
        if all(isinstance(x, Choice) and x.kind == AND for x in flatten(c, AND)):
            found.append(Violation(6, ()))
    if isinstance(c, Choice) and c.kind == AND:
        if has_cluster(c.left, c.cluster) or has_cluster(c.right, c.cluster):
            found.append(Violation(7, ()))
    found.sort(key=lambda v: (v.condition, v.path))
    return PurityReport(tuple(found))


@dataclass(frozen=True)
class TraceStep:
    before: Cirquent
    descriptor: RuleDescriptor
    after: Cirquent
    stage: int
    iteration: int  # counts stage iterations across the whole run

    def __str__(self) -> str:
        d = self.descriptor
        name = d.rule + (f"({d.variant})" if d.variant else "")
        where = format_path(d.path) if d.path is not None else ""
        return f"{name} @ {where} : {to_text(self.before)} => {to_text(self.after)}"


@dataclass
class PurificationResult:
    pure: Cirquent
    trace: list[TraceStep] = field(default_factory=list)

    def format_trace(self) -> str:
        return "\n".join(str(s) for s in self.trace)


class _Purification:
    def __init__(self, c: Cirquent):
        self.d = c
        self.trace: list[TraceStep] = []
        self.stage = 0
        self.iteration = 0

    def apply(self, descriptor: RuleDescriptor):
        (after,) = premises_of(self.d, descriptor)
        self.trace.append(TraceStep(self.d, descriptor, after, self.stage, self.iteration))
        self.d = after

    def run(self) -> PurificationResult:
        stages = (self.stage1, self.stage2, self.stage3, self.stage4,
                  self.stage5, self.stage6, self.stage7)
        for number, stage in enumerate(stages, 1):
            self.stage = number
            while True:
                self.iteration += 1
                if not stage():
                    break
        return PurificationResult(self.d, self.trace)

    # Each stage method performs one iteration and reports whether it did.

    def _absorb(self, kind: str, const: Cirquent, rule) -> bool:
        variant = "a" if kind == OR else "b"
        hit = _first_surface_par(
            self.d, lambda n: n.kind == kind and (n.left == const or n.right == const))
        if hit is None:
            return False
        path, node = hit
        if node.right != const:
            self.apply(commutativity(variant, path))
        self.apply(rule(variant, path))
        return True

    def stage1(self) -> bool:
        return self._absorb(OR, BOT, identity) or self._absorb(AND, BOT, domination)

    def _distribute(self, variant: str) -> bool:
        wanted_type, wanted_kind = (Par, AND) if variant == "a" else (Choice, AND)

        def wanted(x):
            return type(x) is wanted_type and x.kind == wanted_kind

        hit = _first_surface_par(self.d, lambda n: n.kind == OR and (wanted(n.left) or wanted(n.right)))
        if hit is None:
            return False
        path, node = hit
        if not wanted(node.left):
            self.apply(commutativity("a", path))
        self.apply(distribution(variant, path))
        return True

    def stage2(self) -> bool:
        return self._distribute("a")

    def stage3(self) -> bool:
        return self._distribute("b")

    def stage4(self) -> bool:
        found = []

        def complementary(n):
            if n.kind != OR:
                return False
            letter = _complementary_letter(flatten(n, OR))
            found.append(letter)
            return letter is not None

        hit = _first_surface_par(self.d, complementary)
        if hit is None:
            return False
        self._trivialize(hit[0], found[-1])
        return True

    def _trivialize(self, path: Path, p: str):
        """Rewrite the disjunction at ``path`` (containing ~p and p) to T."""
        neg, pos = Lit(p, False), Lit(p, True)
        node = subcirquent_at(self.d, path)
        if node == Par(OR, pos, neg):
            self.apply(commutativity("a", path))
            node = Par(OR, neg, pos)
        if node == Par(OR, neg, pos):
            self.apply(trivialization(path, p))
            return

        def both(x):
            ds = flatten(x, OR)
            return neg in ds and pos in ds

        if both(node.left):
            self._trivialize(path + (0,), p)
            self.apply(commutativity("a", path))
            self.apply(domination("a", path))
            return
        if both(node.right):
            self._trivialize(path + (1,), p)
            self.apply(domination("a", path))
            return
        # the pair is split between the operands: rotate one member rightwards
        if not (isinstance(node.left, Par) and node.left.kind == OR):
            self.apply(commutativity("a", path))
            node = subcirquent_at(self.d, path)
        left = node.left
        mine = neg if neg in flatten(left, OR) else pos
        if mine in flatten(left.left, OR):
            self.apply(commutativity("a", path + (0,)))
        self.apply(associativity("a", path))
        self._trivialize(path + (1,), p)
        self.apply(domination("a", path))

    def stage5(self) -> bool:
        return self._absorb(OR, TOP, domination) or self._absorb(AND, TOP, identity)

    def stage6(self) -> bool:
        hit = _first_surface_par(self.d, lambda n: (
            n.kind == AND
            and type(n.left) is Choice and n.left.kind == AND
            and type(n.right) is Choice and n.right.kind == AND))
        if hit is None:
            return False
        self.apply(quadrilemma(hit[0], fresh_conjunctive_cluster(self.d)))
        return True

    def stage7(self) -> bool:
        d = self.d
        if not (isinstance(d, Choice) and d.kind == AND):
            return False
        for variant, arm in (("a", d.left), ("b", d.right)):
            for inner_path, node in iter_nodes(arm):
                if isinstance(node, Choice) and node.cluster == d.cluster:
                    self.apply(cleansing(variant, (), inner_path))
                    return True
        return False


def _first_surface_par(node: Cirquent, pred, path: Path = ()):
    """Leftmost-outermost parallel node outside every choice satisfying ``pred``."""
    if type(node) is not Par:
        return None
    if pred(node):
        return path, node
    return (_first_surface_par(node.left, pred, path + (0,))
            or _first_surface_par(node.right, pred, path + (1,)))


def _complementary_letter(disjuncts) -> str | None:
    lits = {x for x in disjuncts if isinstance(x, Lit)}
    for x in disjuncts:
        if isinstance(x, Lit) and Lit(x.letter, not x.positive) in lits:
            return x.letter
    return None


def fresh_conjunctive_cluster(c: Cirquent) -> ClusterId:
    used = {cl.index for cl in clusters_of(c) if cl.polarity == CONJ}
    return ClusterId(CONJ, next(n for n in count(1) if n not in used))


def purify(c: Cirquent) -> PurificationResult:
    """Drive ``c`` to a pure cirquent, recording every rule application."""
    return _Purification(c).run()
