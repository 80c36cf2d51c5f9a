"""Cirquent abstract syntax, surface grammar, printing and structural helpers.

Cirquents are immutable trees built from four node classes:

* :class:`Const` -- the elementary games ``T`` and ``F``
* :class:`Lit` -- a possibly negated game letter
* :class:`Par` -- parallel disjunction/conjunction (``|`` / ``&``)
* :class:`Choice` -- choice disjunction/conjunction tagged with a cluster
  (``+[n]`` / ``*[n]``)

The node classes are named tuples, so structural equality and hashing are
cheap and values can be used directly as dictionary keys.

Surface grammar, loosest binding first::

    expr    := par_or ('->' expr)?          # right associative
    par_or  := par_and ('|' par_and)*
    par_and := choice ('&' choice)*
    choice  := unary (('+[' n ']' | '*[' n ']') unary)*
    unary   := '~' unary | atom
    atom    := 'T' | 'F' | letter | '(' expr ')'

``~`` over a compound and ``->`` are abbreviations and are expanded during
parsing, so every parsed cirquent has negation on letters only.
"""

from __future__ import annotations

import json
import os
import re
from itertools import count
from typing import Iterator, NamedTuple, Sequence, Union

OR = "or"
AND = "and"

DISJ = "d"
CONJ = "c"

LETTER_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

DEFAULT_RANK_DIGIT_CAP = 100_000


class CirquentSyntaxError(ValueError):
    """Raised for malformed surface text; ``pos`` is the offending offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class ClusterPolarityError(CirquentSyntaxError):
    pass


class InvalidPathError(LookupError):
    pass


class RankOverflowError(ArithmeticError):
    """The exact rank would exceed the configured number of decimal digits."""


class ClusterId(NamedTuple):
    polarity: str  # DISJ or CONJ
    index: int

    @property
    def dual(self) -> "ClusterId":
        return ClusterId(CONJ if self.polarity == DISJ else DISJ, self.index)

    @property
    def disjunctive(self) -> bool:
        return self.polarity == DISJ

    def __str__(self) -> str:
        return f"{self.polarity}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ClusterId":
        m = re.fullmatch(r"([dc])(\d+)", text.strip())
        if not m:
            raise ValueError(f"bad cluster token {text!r}; expected d<n> or c<n>")
        return cls(m.group(1), int(m.group(2)))


def cluster_sort_key(c: ClusterId):
    return (c.index, c.polarity != DISJ)


class Const(NamedTuple):
    value: bool


class Lit(NamedTuple):
    letter: str
    positive: bool


class Par(NamedTuple):
    kind: str  # OR or AND
    left: "Cirquent"
    right: "Cirquent"


class Choice(NamedTuple):
    kind: str  # OR or AND
    cluster: ClusterId
    left: "Cirquent"
    right: "Cirquent"


Cirquent = Union[Const, Lit, Par, Choice]
Path = tuple

TOP = Const(True)
BOT = Const(False)


def lit(letter: str, positive: bool = True) -> Lit:
    if not LETTER_RE.match(letter):
        raise ValueError(f"invalid letter {letter!r}")
    return Lit(letter, positive)


def disj(left: Cirquent, right: Cirquent) -> Par:
    return Par(OR, left, right)


def conj(left: Cirquent, right: Cirquent) -> Par:
    return Par(AND, left, right)


def choice(kind: str, cluster: ClusterId | int, left: Cirquent, right: Cirquent) -> Choice:
    """Build a choice node, checking that the cluster polarity matches ``kind``."""
    want = DISJ if kind == OR else CONJ
    if isinstance(cluster, int):
        cluster = ClusterId(want, cluster)
    if cluster.polarity != want:
        raise ClusterPolarityError(
            f"choice {kind} needs a {'disjunctive' if want == DISJ else 'conjunctive'} "
            f"cluster, got {cluster}"
        )
    return Choice(kind, cluster, left, right)


def chor(cluster: int, left: Cirquent, right: Cirquent) -> Choice:
    return Choice(OR, ClusterId(DISJ, cluster), left, right)


def chand(cluster: int, left: Cirquent, right: Cirquent) -> Choice:
    return Choice(AND, ClusterId(CONJ, cluster), left, right)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<chop>[+*]\[\s*(?P<cl>[a-z]?\d*)\s*\])
  | (?P<op>[~&|()])
  | (?P<const>[TF])(?![A-Za-z0-9_])
  | (?P<letter>[a-z][a-z0-9_]*)
    """,
    re.VERBOSE,
)

# sentinel polarity for `+[]` / `*[]` placeholders awaiting cirquentize()
PLACEHOLDER = -1


class _Parser:
    def __init__(self, text: str, allow_placeholders: bool):
        self.text = text
        self.allow_placeholders = allow_placeholders
        self.tokens: list[tuple[str, str, int, str | None]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise CirquentSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind == "cl":  # lastgroup reports the innermost group
                kind = "chop"
            if kind != "ws":
                self.tokens.append((kind, m.group(kind), pos, m.group("cl")))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text), None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value:
            raise CirquentSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])

    def parse(self) -> Cirquent:
        if not self.tokens:
            raise CirquentSyntaxError("empty expression", 0)
        node = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise CirquentSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> Cirquent:
        left = self.par(OR)
        if self.peek()[0] == "arrow":
            self.take()
            right = self.expr()
            return Par(OR, negate(left), right)
        return left

    def par(self, kind: str) -> Cirquent:
        sym, sub = ("|", lambda: self.par(AND)) if kind == OR else ("&", self.choice)
        node = sub()
        while self.peek()[1] == sym:
            self.take()
            node = Par(kind, node, sub())
        return node

    def choice(self) -> Cirquent:
        node = self.unary()
        while self.peek()[0] == "chop":
            _, text, pos, cl = self.take()
            kind = OR if text[0] == "+" else AND
            want = DISJ if kind == OR else CONJ
            if cl == "":
                if not self.allow_placeholders:
                    raise CirquentSyntaxError("missing cluster number", pos)
                cluster = ClusterId(want, PLACEHOLDER)
            else:
                prefix = cl.rstrip("0123456789")
                digits = cl[len(prefix):]
                if prefix not in ("", "d", "c") or not digits:
                    raise CirquentSyntaxError(f"bad cluster token {cl!r}", pos)
                if prefix and prefix != want:
                    raise ClusterPolarityError(
                        f"{text[0]!r} takes a {'disjunctive' if want == DISJ else 'conjunctive'} "
                        f"cluster, got {cl!r}",
                        pos,
                    )
                cluster = ClusterId(want, int(digits))
            node = Choice(kind, cluster, node, self.unary())
        return node

    def unary(self) -> Cirquent:
        kind, text, pos, _ = self.peek()
        if text == "~":
            self.take()
            return negate(self.unary())
        if text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "const":
            self.take()
            return TOP if text == "T" else BOT
        if kind == "letter":
            self.take()
            return Lit(text, True)
        raise CirquentSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse(text: str) -> Cirquent:
    """Parse surface text into an official-form cirquent."""
    return _Parser(text, allow_placeholders=False).parse()


def parse_extended(text: str) -> Cirquent:
    """Like :func:`parse` but accepts bare ``+[]``/``*[]``; see :func:`cirquentize`."""
    return _Parser(text, allow_placeholders=True).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {OR: 1, AND: 2}
_CHOICE_PREC = 3
_ATOM_PREC = 5


def _prec(c: Cirquent) -> int:
    if isinstance(c, Par):
        return _PREC[c.kind]
    if isinstance(c, Choice):
        return _CHOICE_PREC
    return _ATOM_PREC


def _cluster_text(cluster: ClusterId) -> str:
    return "" if cluster.index == PLACEHOLDER else str(cluster.index)


def to_text(c: Cirquent) -> str:
    """Canonical surface text with minimal parentheses."""
    if isinstance(c, Const):
        return "T" if c.value else "F"
    if isinstance(c, Lit):
        return c.letter if c.positive else "~" + c.letter
    if isinstance(c, Par):
        op = " | " if c.kind == OR else " & "
    else:
        op = (" +[" if c.kind == OR else " *[") + _cluster_text(c.cluster) + "] "
    p = _prec(c)
    left, right = to_text(c.left), to_text(c.right)
    # all binary operators are left associative
    if _prec(c.left) < p:
        left = f"({left})"
    if _prec(c.right) <= p:
        right = f"({right})"
    return left + op + right


# ---------------------------------------------------------------------------
# JSON form

def to_json(c: Cirquent) -> dict:
    if isinstance(c, Const):
        return {"kind": "top" if c.value else "bot"}
    if isinstance(c, Lit):
        return {"kind": "lit", "letter": c.letter, "positive": c.positive}
    if isinstance(c, Par):
        return {"kind": c.kind, "left": to_json(c.left), "right": to_json(c.right)}
    return {
        "kind": "chor" if c.kind == OR else "chand",
        "cluster": c.cluster.index,
        "left": to_json(c.left),
        "right": to_json(c.right),
    }


def from_json(obj: dict | str) -> Cirquent:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj["kind"]
    if kind == "top":
        return TOP
    if kind == "bot":
        return BOT
    if kind == "lit":
        return lit(obj["letter"], bool(obj["positive"]))
    if kind in (OR, AND):
        return Par(kind, from_json(obj["left"]), from_json(obj["right"]))
    if kind in ("chor", "chand"):
        ck = OR if kind == "chor" else AND
        return choice(ck, int(obj["cluster"]), from_json(obj["left"]), from_json(obj["right"]))
    raise ValueError(f"unknown node kind {kind!r}")


# ---------------------------------------------------------------------------
# structural operations

def negate(c: Cirquent) -> Cirquent:
    """De Morgan dual: flip literals, swap Or/And, dualize clusters."""
    if isinstance(c, Const):
        return BOT if c.value else TOP
    if isinstance(c, Lit):
        return Lit(c.letter, not c.positive)
    if isinstance(c, Par):
        return Par(AND if c.kind == OR else OR, negate(c.left), negate(c.right))
    return Choice(AND if c.kind == OR else OR, c.cluster.dual, negate(c.left), negate(c.right))


def rank_digit_cap() -> int:
    return int(os.environ.get("CL16_RANK_DIGIT_CAP", DEFAULT_RANK_DIGIT_CAP))


_LOG10_5 = 0.6989700043360189


def _pow5(x: int, cap: int) -> int:
    # x can itself be huge, so compare without converting it to float
    if x > cap / _LOG10_5:
        shown = str(x) if x < 10**12 else f"<~{int(x.bit_length() * 0.30103)}-digit number>"
        raise RankOverflowError(f"5**{shown} exceeds {cap} decimal digits")
    return 5**x


def tower5(height: int, cap: int | None = None) -> int:
    """Tetration ``^height 5``: a tower of fives ``height`` high."""
    if cap is None:
        cap = rank_digit_cap()
    if height < 1:
        raise ValueError("tower height must be positive")
    value = 5
    for _ in range(height - 1):
        value = _pow5(value, cap)
    return value


def rank(c: Cirquent, cap: int | None = None) -> int:
    """Exact termination measure; raises RankOverflowError past ``cap`` digits."""
    if cap is None:
        cap = rank_digit_cap()
    if isinstance(c, (Const, Lit)):
        return 1
    total = rank(c.left, cap) + rank(c.right, cap)
    if isinstance(c, Choice):
        return total
    if c.kind == AND:
        return _pow5(total, cap)
    return tower5(total, cap)


def clusters_of(c: Cirquent) -> set[ClusterId]:
    out: set[ClusterId] = set()
    stack = [c]
    while stack:
        n = stack.pop()
        if isinstance(n, Choice):
            out.add(n.cluster)
        if isinstance(n, (Par, Choice)):
            stack.append(n.left)
            stack.append(n.right)
    return out


def letters_of(c: Cirquent) -> set[str]:
    out: set[str] = set()
    stack = [c]
    while stack:
        n = stack.pop()
        if isinstance(n, Lit):
            out.add(n.letter)
        elif isinstance(n, (Par, Choice)):
            stack.append(n.left)
            stack.append(n.right)
    return out


def atoms_of(c: Cirquent) -> tuple[set[ClusterId], set[str]]:
    """Clusters and letters of ``c`` in one pass."""
    clusters: set[ClusterId] = set()
    letters: set[str] = set()
    stack = [c]
    while stack:
        n = stack.pop()
        t = type(n)
        if t is Lit:
            letters.add(n.letter)
        elif t is Par or t is Choice:
            if t is Choice:
                clusters.add(n.cluster)
            stack.append(n.left)
            stack.append(n.right)
    return clusters, letters


def has_cluster(c: Cirquent, cluster: ClusterId) -> bool:
    if isinstance(c, Choice):
        if c.cluster == cluster:
            return True
    elif not isinstance(c, Par):
        return False
    return has_cluster(c.left, cluster) or has_cluster(c.right, cluster)


def size(c: Cirquent) -> int:
    """Number of connective nodes."""
    if isinstance(c, (Par, Choice)):
        return 1 + size(c.left) + size(c.right)
    return 0


def subcirquent_at(c: Cirquent, at: Sequence[int]) -> Cirquent:
    node = c
    for depth, step in enumerate(at):
        if not isinstance(node, (Par, Choice)) or step not in (0, 1):
            raise InvalidPathError(f"path {format_path(at)} invalid at step {depth}")
        node = node.right if step else node.left
    return node


def replace_at(c: Cirquent, at: Sequence[int], s: Cirquent) -> Cirquent:
    if not at:
        return s
    if not isinstance(c, (Par, Choice)) or at[0] not in (0, 1):
        raise InvalidPathError(f"path {format_path(at)} invalid")
    if at[0] == 0:
        return c._replace(left=replace_at(c.left, at[1:], s))
    return c._replace(right=replace_at(c.right, at[1:], s))


def format_path(at: Sequence[int]) -> str:
    return ".".join(str(i) for i in at)


def parse_path(text: str) -> Path:
    text = text.strip()
    if not text:
        return ()
    try:
        steps = tuple(int(s) for s in text.split("."))
    except ValueError:
        raise InvalidPathError(f"bad path {text!r}") from None
    if any(s not in (0, 1) for s in steps):
        raise InvalidPathError(f"bad path {text!r}")
    return steps


class Root(NamedTuple):
    """Root descriptor; ``cluster`` is set only for the choice roots."""

    name: str  # top, bot, positive_lit, negative_lit, or, and, chor, chand
    cluster: ClusterId | None = None


def root(c: Cirquent) -> Root:
    if isinstance(c, Const):
        return Root("top" if c.value else "bot")
    if isinstance(c, Lit):
        return Root("positive_lit" if c.positive else "negative_lit")
    if isinstance(c, Par):
        return Root(c.kind)
    return Root("chor" if c.kind == OR else "chand", c.cluster)


def flatten(c: Cirquent, kind: str) -> list[Cirquent]:
    """Operands of the maximal ``kind``-chain of parallel nodes rooted at ``c``."""
    if isinstance(c, Par) and c.kind == kind:
        return flatten(c.left, kind) + flatten(c.right, kind)
    return [c]


def iter_nodes(c: Cirquent, path: Path = (), surface_only: bool = False) -> Iterator[tuple[Path, Cirquent]]:
    """Pre-order (leftmost-outermost) walk yielding ``(path, node)`` pairs.

    With ``surface_only`` the walk does not descend below choice nodes.
    """
    yield path, c
    if isinstance(c, Par) or (isinstance(c, Choice) and not surface_only):
        yield from iter_nodes(c.left, path + (0,), surface_only)
        yield from iter_nodes(c.right, path + (1,), surface_only)


def cirquentize(c: Cirquent) -> Cirquent:
    """Give every placeholder choice connective its own fresh cluster."""
    used = {cl.index for cl in clusters_of(c) if cl.index != PLACEHOLDER}
    fresh = (n for n in count(1) if n not in used)

    def walk(n: Cirquent) -> Cirquent:
        if isinstance(n, Par):
            return Par(n.kind, walk(n.left), walk(n.right))
        if isinstance(n, Choice):
            cluster = n.cluster
            if cluster.index == PLACEHOLDER:
                cluster = ClusterId(cluster.polarity, next(fresh))
            return Choice(n.kind, cluster, walk(n.left), walk(n.right))
        return n

    return walk(c)
