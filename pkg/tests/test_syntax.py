import pytest
from hypothesis import given

from cl16.syntax import (
    AND,
    BOT,
    OR,
    TOP,
    Choice,
    CirquentSyntaxError,
    ClusterId,
    ClusterPolarityError,
    InvalidPathError,
    Lit,
    Par,
    RankOverflowError,
    Root,
    cirquentize,
    clusters_of,
    from_json,
    letters_of,
    negate,
    parse,
    parse_extended,
    parse_path,
    format_path,
    rank,
    replace_at,
    root,
    subcirquent_at,
    to_json,
    to_text,
    tower5,
)

from strategies import cirquents

D1, C1, C2, C3 = ClusterId("d", 1), ClusterId("c", 1), ClusterId("c", 2), ClusterId("c", 3)
P, Q, R = Lit("p", True), Lit("q", True), Lit("r", True)


def np(x):
    return Lit(x, False)


@pytest.mark.parametrize("text, expected", [
    ("T", TOP),
    ("F", BOT),
    ("p & (q +[1] r)", Par(AND, P, Choice(OR, D1, Q, R))),
    ("~(p *[1] q)", Choice(OR, D1, np("p"), np("q"))),
    ("p -> q", Par(OR, np("p"), Q)),
    ("p | q & r", Par(OR, P, Par(AND, Q, R))),
    ("p +[1] q & r", Par(AND, Choice(OR, D1, P, Q), R)),
    ("p -> q -> r", Par(OR, np("p"), Par(OR, np("q"), R))),
    ("~~p", P),
    ("+[d1]".join(["p", "q"]), Choice(OR, D1, P, Q)),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text", ["", "p &", "(p", "p +[x] q", "P", "p q", "p +[1 q", "p ~ q"])
def test_parse_errors(text):
    with pytest.raises(CirquentSyntaxError):
        parse(text)


def test_polarity_prefix_mismatch():
    with pytest.raises(ClusterPolarityError):
        parse("p +[c3] q")
    with pytest.raises(ClusterPolarityError):
        parse("p *[d3] q")


def test_error_carries_position():
    with pytest.raises(CirquentSyntaxError) as info:
        parse("p & & q")
    assert info.value.pos == 4


@pytest.mark.parametrize("node, text", [
    (TOP, "T"),
    (Par(OR, np("p"), Q), "~p | q"),
    (Choice(AND, C3, P, Q), "p *[3] q"),
    (Par(AND, Par(OR, P, Q), R), "(p | q) & r"),
    (Par(OR, P, Par(OR, Q, R)), "p | (q | r)"),
    (Par(OR, Par(OR, P, Q), R), "p | q | r"),
])
def test_print(node, text):
    assert to_text(node) == text


@given(cirquents())
def test_print_parse_round_trip(c):
    text = to_text(c)
    assert parse(text) == c
    assert to_text(parse(text)) == text


@given(cirquents())
def test_json_round_trip(c):
    assert from_json(to_json(c)) == c


def test_negate_examples():
    assert negate(P) == np("p")
    assert to_text(negate(parse("p *[1] q"))) == "~p +[1] ~q"
    assert negate(TOP) == BOT


@given(cirquents())
def test_negate_involution(c):
    assert negate(negate(c)) == c


@given(cirquents())
def test_choice_kind_matches_cluster_polarity(c):
    for node in (c, negate(c)):
        stack = [node]
        while stack:
            n = stack.pop()
            if isinstance(n, Choice):
                assert n.cluster.disjunctive == (n.kind == OR)
            if isinstance(n, (Par, Choice)):
                stack += [n.left, n.right]


def test_cluster_dual_is_involution():
    assert D1.dual == ClusterId("c", 1)
    assert D1.dual.dual == D1
    assert D1 != ClusterId("c", 1)


@pytest.mark.parametrize("text, expected", [
    ("T", 1),
    ("p & q", 25),
    ("p | q", 3125),
    ("p *[1] q", 2),
    ("(p *[1] q) & r", 125),
    ("(p & q) *[1] r", 26),
])
def test_rank(text, expected):
    assert rank(parse(text)) == expected


def test_rank_of_negation_can_differ():
    # swapping | and & changes the rank clause, so rank is not negation invariant
    c = parse("p & q")
    assert rank(c) == 25
    assert rank(negate(c)) == 3125


@given(cirquents())
def test_rank_negation_invariant_without_parallel_nodes(c):
    if "|" not in to_text(c) and "&" not in to_text(c):
        assert rank(negate(c)) == rank(c)


def test_rank_cap():
    with pytest.raises(RankOverflowError):
        rank(parse("p | q | r"))
    assert tower5(2) == 3125
    assert tower5(3) == 5**3125


def test_rank_cap_env(monkeypatch):
    monkeypatch.setenv("CL16_RANK_DIGIT_CAP", "3")
    with pytest.raises(RankOverflowError):
        rank(parse("p | q"))
    assert rank(parse("p & q")) == 25


@given(cirquents(6), cirquents(3))
def test_rank_monotone(c, s):
    paths = [()]
    stack = [((), c)]
    while stack:
        path, n = stack.pop()
        paths.append(path)
        if isinstance(n, (Par, Choice)):
            stack += [(path + (0,), n.left), (path + (1,), n.right)]
    for path in paths:
        try:
            old, new = rank(subcirquent_at(c, path)), rank(s)
            if new < old:
                assert rank(replace_at(c, path, s)) < rank(c)
        except RankOverflowError:
            pass


def test_clusters_and_letters():
    assert clusters_of(TOP) == set() and letters_of(TOP) == set()
    c = parse("p +[1] (q *[2] p)")
    assert clusters_of(c) == {D1, C2}
    assert letters_of(c) == {"p", "q"}
    assert clusters_of(parse("~p | p")) == set()
    assert letters_of(parse("~p | p")) == {"p"}


def test_paths():
    c = parse("p & q")
    assert subcirquent_at(c, [1]) == Q
    assert replace_at(c, [0], TOP) == parse("T & q")
    assert subcirquent_at(c, []) == c
    with pytest.raises(InvalidPathError):
        subcirquent_at(c, [0, 0])
    assert parse_path(format_path((0, 1, 1))) == (0, 1, 1)
    assert format_path(()) == ""


@pytest.mark.parametrize("text, expected", [
    ("p +[1] q", Root("chor", D1)),
    ("p *[2] q", Root("chand", C2)),
    ("T", Root("top", None)),
    ("F", Root("bot", None)),
    ("(p|q) & r", Root("and", None)),
    ("p | q", Root("or", None)),
    ("p", Root("positive_lit", None)),
    ("~p", Root("negative_lit", None)),
])
def test_root(text, expected):
    assert root(parse(text)) == expected


def test_cirquentize():
    assert cirquentize(parse_extended("p +[] q")) == parse("p +[1] q")
    twice = cirquentize(parse_extended("(p +[] q) & (p +[] q)"))
    assert len(clusters_of(twice)) == 2
    assert all(cl.disjunctive for cl in clusters_of(twice))
    assert cirquentize(parse("p | q")) == parse("p | q")
    with pytest.raises(CirquentSyntaxError):
        parse("p +[] q")
