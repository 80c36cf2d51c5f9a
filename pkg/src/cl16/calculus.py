"""The ten inference rules, proof objects and the proof checker.

Rules are applied in the conclusion-to-premise direction: given a
conclusion and a :class:`RuleDescriptor` that pins down where and how the
rule applies, :func:`premises_of` returns the unique premise list. A proof
line is correct iff those premises equal the cirquents on the cited lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .syntax import (
    AND,
    BOT,
    CONJ,
    OR,
    TOP,
    Choice,
    Cirquent,
    ClusterId,
    InvalidPathError,
    Lit,
    Par,
    Path,
    format_path,
    has_cluster,
    parse,
    parse_path,
    replace_at,
    subcirquent_at,
    to_text,
)

COMMUTATIVITY = "commutativity"
ASSOCIATIVITY = "associativity"
IDENTITY = "identity"
DOMINATION = "domination"
CHOOSING = "choosing"
CLEANSING = "cleansing"
DISTRIBUTION = "distribution"
TRIVIALIZATION = "trivialization"
QUADRILEMMA = "quadrilemma"
SPLITTING = "splitting"
AXIOM = "axiom"

RULES = (COMMUTATIVITY, ASSOCIATIVITY, IDENTITY, DOMINATION, CHOOSING, CLEANSING,
         DISTRIBUTION, TRIVIALIZATION, QUADRILEMMA, SPLITTING)
_VARIANT_RULES = {COMMUTATIVITY, ASSOCIATIVITY, IDENTITY, DOMINATION, CHOOSING, CLEANSING, DISTRIBUTION}
_PATH_RULES = set(RULES) - {CHOOSING, SPLITTING}


class RuleError(ValueError):
    """A rule does not apply; ``kind`` is 'structure' or 'side-condition'."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


@dataclass(frozen=True)
class RuleDescriptor:
    rule: str
    variant: str | None = None
    path: Path | None = None
    inner_path: Path | None = None
    cluster: ClusterId | None = None
    choice: int | None = None
    letter: str | None = None

    def __post_init__(self):
        rule = self.rule
        if rule not in RULES:
            raise ValueError(f"unknown rule {rule!r}")
        if (self.variant is not None) != (rule in _VARIANT_RULES):
            raise ValueError(f"{rule}: variant must be {'given' if rule in _VARIANT_RULES else 'absent'}")
        if self.variant not in (None, "a", "b"):
            raise ValueError(f"bad variant {self.variant!r}")
        if (self.path is not None) != (rule in _PATH_RULES):
            raise ValueError(f"{rule}: path must be {'given' if rule in _PATH_RULES else 'absent'}")
        if (self.inner_path is not None) != (rule == CLEANSING):
            raise ValueError("inner_path is required for cleansing only")
        if (self.cluster is not None) != (rule in (CHOOSING, QUADRILEMMA, SPLITTING)):
            raise ValueError(f"{rule}: cluster presence mismatch")
        if (self.choice is not None) != (rule == CHOOSING):
            raise ValueError("choice is required for choosing only")
        if rule == CHOOSING and self.choice != (0 if self.variant == "a" else 1):
            raise ValueError("choosing(a) selects 0 and choosing(b) selects 1")
        if (self.letter is not None) != (rule == TRIVIALIZATION):
            raise ValueError("letter is required for trivialization only")
        if self.path is not None:
            object.__setattr__(self, "path", tuple(self.path))
        if self.inner_path is not None:
            object.__setattr__(self, "inner_path", tuple(self.inner_path))

    def __str__(self) -> str:
        name = self.rule.capitalize() + (f"({self.variant})" if self.variant else "")
        extras = []
        if self.path is not None:
            extras.append(f"@ {format_path(self.path) or '.'}")
        if self.inner_path is not None:
            extras.append(f"inner {format_path(self.inner_path) or '.'}")
        if self.cluster is not None:
            extras.append(f"cluster {self.cluster}")
        if self.letter is not None:
            extras.append(f"letter {self.letter}")
        return " ".join([name] + extras)


# short constructors used by the purifier and the tests

def commutativity(variant: str, path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(COMMUTATIVITY, variant, tuple(path))


def associativity(variant: str, path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(ASSOCIATIVITY, variant, tuple(path))


def identity(variant: str, path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(IDENTITY, variant, tuple(path))


def domination(variant: str, path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(DOMINATION, variant, tuple(path))


def distribution(variant: str, path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(DISTRIBUTION, variant, tuple(path))


def trivialization(path: Sequence[int], letter: str) -> RuleDescriptor:
    return RuleDescriptor(TRIVIALIZATION, path=tuple(path), letter=letter)


def cleansing(variant: str, path: Sequence[int], inner_path: Sequence[int]) -> RuleDescriptor:
    return RuleDescriptor(CLEANSING, variant, tuple(path), tuple(inner_path))


def quadrilemma(path: Sequence[int], cluster: ClusterId) -> RuleDescriptor:
    return RuleDescriptor(QUADRILEMMA, path=tuple(path), cluster=cluster)


def choosing(cluster: ClusterId, choice: int) -> RuleDescriptor:
    return RuleDescriptor(CHOOSING, "ab"[choice], cluster=cluster, choice=choice)


def splitting(cluster: ClusterId) -> RuleDescriptor:
    return RuleDescriptor(SPLITTING, cluster=cluster)


# ---------------------------------------------------------------------------
# rule application

def choose_all(c: Cirquent, cluster: ClusterId, i: int) -> Cirquent:
    """Replace every choice node of ``cluster`` by (the image of) its i-th arm."""
    if isinstance(c, Choice):
        if c.cluster == cluster:
            return choose_all(c.right if i else c.left, cluster, i)
        return Choice(c.kind, c.cluster, choose_all(c.left, cluster, i), choose_all(c.right, cluster, i))
    if isinstance(c, Par):
        return Par(c.kind, choose_all(c.left, cluster, i), choose_all(c.right, cluster, i))
    return c


def _structure(msg: str) -> RuleError:
    return RuleError("structure", msg)


def _par(node: Cirquent, kind: str, what: str) -> Par:
    if not (isinstance(node, Par) and node.kind == kind):
        raise _structure(f"expected {what}, found {to_text(node)!r}")
    return node


def _local_premise(conclusion: Cirquent, d: RuleDescriptor) -> Cirquent:
    """Premise subtree replacing the conclusion's subtree at ``d.path``."""
    try:
        node = subcirquent_at(conclusion, d.path)
    except InvalidPathError as e:
        raise _structure(str(e)) from None
    rule, variant = d.rule, d.variant
    kind = OR if variant == "a" else AND
    sym = "|" if kind == OR else "&"

    if rule == COMMUTATIVITY:
        n = _par(node, kind, f"A {sym} B")
        return Par(kind, n.right, n.left)

    if rule == ASSOCIATIVITY:
        n = _par(node, kind, f"(A {sym} B) {sym} C")
        inner = _par(n.left, kind, f"(A {sym} B) as left operand")
        return Par(kind, inner.left, Par(kind, inner.right, n.right))

    if rule == IDENTITY:
        n = _par(node, kind, f"A {sym} {'F' if kind == OR else 'T'}")
        unit = BOT if kind == OR else TOP
        if n.right != unit:
            raise _structure(f"right operand must be {to_text(unit)}")
        return n.left

    if rule == DOMINATION:
        n = _par(node, kind, f"A {sym} {'T' if kind == OR else 'F'}")
        absorber = TOP if kind == OR else BOT
        if n.right != absorber:
            raise _structure(f"right operand must be {to_text(absorber)}")
        return absorber

    if rule == DISTRIBUTION:
        n = _par(node, OR, "(A & B) | C or (A *[c] B) | C")
        left, c = n.left, n.right
        if variant == "a":
            ab = _par(left, AND, "A & B as left disjunct")
            return Par(AND, Par(OR, ab.left, c), Par(OR, ab.right, c))
        if not (isinstance(left, Choice) and left.kind == AND):
            raise _structure("expected A *[c] B as left disjunct")
        return Choice(AND, left.cluster, Par(OR, left.left, c), Par(OR, left.right, c))

    if rule == TRIVIALIZATION:
        want = Par(OR, Lit(d.letter, False), Lit(d.letter, True))
        if node != want:
            raise _structure(f"expected ~{d.letter} | {d.letter}, found {to_text(node)!r}")
        return TOP

    if rule == CLEANSING:
        if not (isinstance(node, Choice) and node.kind == AND):
            raise _structure("expected a choice conjunction")
        cl = node.cluster
        arm = node.left if variant == "a" else node.right
        try:
            inner = subcirquent_at(arm, d.inner_path)
        except InvalidPathError as e:
            raise _structure(str(e)) from None
        if not (isinstance(inner, Choice) and inner.cluster == cl):
            raise _structure(f"inner node is not a choice conjunction of cluster {cl}")
        arm = replace_at(arm, d.inner_path, inner.left if variant == "a" else inner.right)
        return node._replace(left=arm) if variant == "a" else node._replace(right=arm)

    if rule == QUADRILEMMA:
        n = _par(node, AND, "(A *[a] B) & (C *[b] D)")
        x, y = n.left, n.right
        if not (isinstance(x, Choice) and x.kind == AND and isinstance(y, Choice) and y.kind == AND):
            raise _structure("both conjuncts must be choice conjunctions")
        if d.cluster.polarity != CONJ:
            raise RuleError("side-condition", "quadrilemma needs a conjunctive cluster")
        if has_cluster(conclusion, d.cluster):
            raise RuleError("side-condition", f"cluster {d.cluster} occurs in the conclusion")
        a, b, c, dd = x.left, x.right, y.left, y.right
        return Choice(
            AND, d.cluster,
            Choice(AND, x.cluster, Par(AND, a, y), Par(AND, b, y)),
            Choice(AND, y.cluster, Par(AND, x, c), Par(AND, x, dd)),
        )

    raise ValueError(f"{rule} is not a local rule")


def premises_of(conclusion: Cirquent, d: RuleDescriptor) -> list[Cirquent]:
    """The premise list that ``d`` determines for ``conclusion``.

    Raises RuleError on a structural mismatch or a violated side condition.
    """
    if d.rule == CHOOSING:
        if not d.cluster.disjunctive:
            raise RuleError("side-condition", "choosing needs a disjunctive cluster")
        if not has_cluster(conclusion, d.cluster):
            raise RuleError("side-condition", f"cluster {d.cluster} does not occur in the conclusion")
        return [choose_all(conclusion, d.cluster, d.choice)]
    if d.rule == SPLITTING:
        if not (isinstance(conclusion, Choice) and conclusion.cluster == d.cluster):
            raise _structure(f"conclusion is not rooted by a choice conjunction of cluster {d.cluster}")
        if has_cluster(conclusion.left, d.cluster) or has_cluster(conclusion.right, d.cluster):
            raise RuleError("side-condition", f"cluster {d.cluster} occurs inside a component")
        return [conclusion.left, conclusion.right]
    return [replace_at(conclusion, d.path, _local_premise(conclusion, d))]


# ---------------------------------------------------------------------------
# proofs

@dataclass(frozen=True)
class ProofLine:
    index: int
    cirquent: Cirquent
    descriptor: RuleDescriptor | None = None  # None marks the axiom
    premises: tuple[int, ...] = ()

    @property
    def is_axiom(self) -> bool:
        return self.descriptor is None


@dataclass
class Proof:
    lines: list[ProofLine] = field(default_factory=list)

    @property
    def conclusion(self) -> Cirquent:
        return self.lines[-1].cirquent

    def __len__(self) -> int:
        return len(self.lines)

    def add(self, cirquent: Cirquent, descriptor: RuleDescriptor | None = None,
            premises: Iterable[int] = ()) -> int:
        index = len(self.lines) + 1
        self.lines.append(ProofLine(index, cirquent, descriptor, tuple(premises)))
        return index

    @classmethod
    def axiom(cls) -> "Proof":
        p = cls()
        p.add(TOP)
        return p

    def to_json(self) -> list[dict]:
        return [line_to_json(line) for line in self.lines]

    def dumps(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def from_json(cls, data: list[dict] | str) -> "Proof":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([line_from_json(obj) for obj in data])

    def render(self) -> str:
        out = []
        for line in self.lines:
            just = "Axiom" if line.is_axiom else f"{line.descriptor}: {', '.join(map(str, line.premises))}"
            out.append(f"{line.index}. {to_text(line.cirquent)}    [{just}]")
        return "\n".join(out)


def line_to_json(line: ProofLine) -> dict:
    obj: dict = {"i": line.index, "cirquent": to_text(line.cirquent)}
    d = line.descriptor
    if d is None:
        obj["rule"] = AXIOM
    else:
        obj["rule"] = d.rule
        if d.variant is not None:
            obj["variant"] = d.variant
        if d.path is not None:
            obj["path"] = format_path(d.path)
        if d.inner_path is not None:
            obj["innerPath"] = format_path(d.inner_path)
        if d.cluster is not None:
            obj["cluster"] = str(d.cluster)
        if d.choice is not None:
            obj["choice"] = d.choice
        if d.letter is not None:
            obj["letter"] = d.letter
    obj["premises"] = list(line.premises)
    return obj


def line_from_json(obj: dict) -> ProofLine:
    cirquent = parse(obj["cirquent"])
    rule = obj["rule"]
    if rule == AXIOM:
        return ProofLine(int(obj["i"]), cirquent, None, tuple(obj.get("premises", ())))
    d = RuleDescriptor(
        rule,
        variant=obj.get("variant"),
        path=parse_path(obj["path"]) if "path" in obj else None,
        inner_path=parse_path(obj["innerPath"]) if "innerPath" in obj else None,
        cluster=ClusterId.parse(obj["cluster"]) if "cluster" in obj else None,
        choice=obj.get("choice"),
        letter=obj.get("letter"),
    )
    return ProofLine(int(obj["i"]), cirquent, d, tuple(int(i) for i in obj.get("premises", ())))


@dataclass(frozen=True)
class CheckError:
    line: int
    kind: str  # bad-axiom, bad-index, side-condition, mismatch
    reason: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.kind}: {self.reason}"


@dataclass(frozen=True)
class CheckResult:
    conclusion: Cirquent | None = None
    error: CheckError | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def __bool__(self) -> bool:
        return self.ok


def check_line(line: ProofLine, earlier: Sequence[Cirquent]) -> CheckError | None:
    """Check one line against the cirquents of lines 1..index-1."""
    if line.is_axiom:
        if line.cirquent != TOP or line.premises:
            return CheckError(line.index, "bad-axiom", "an axiom line must be T with no premises")
        return None
    for k in line.premises:
        if not 1 <= k < line.index:
            return CheckError(line.index, "bad-index", f"premise {k} is not an earlier line")
    try:
        wanted = premises_of(line.cirquent, line.descriptor)
    except RuleError as e:
        # a descriptor that does not fit the conclusion's shape is a mismatch
        kind = "side-condition" if e.kind == "side-condition" else "mismatch"
        return CheckError(line.index, kind, str(e))
    cited = [earlier[k - 1] for k in line.premises]
    if wanted != cited:
        return CheckError(
            line.index, "mismatch",
            f"{line.descriptor} needs premises {[to_text(w) for w in wanted]}, "
            f"cited {[to_text(c) for c in cited]}",
        )
    return None


def check_proof(proof: Proof) -> CheckResult:
    if not proof.lines:
        return CheckResult(error=CheckError(0, "bad-axiom", "empty proof"))
    first = proof.lines[0]
    if not first.is_axiom or first.cirquent != TOP:
        return CheckResult(error=CheckError(1, "bad-axiom", "line 1 must be the axiom T"))
    cirquents: list[Cirquent] = []
    for expected, line in enumerate(proof.lines, 1):
        if line.index != expected:
            return CheckResult(error=CheckError(expected, "bad-index", f"line numbered {line.index}"))
        err = check_line(line, cirquents)
        if err is not None:
            return CheckResult(error=err)
        cirquents.append(line.cirquent)
    return CheckResult(conclusion=proof.conclusion)
