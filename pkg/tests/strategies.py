"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from cl16.syntax import AND, BOT, OR, TOP, Choice, ClusterId, Lit, Par

LETTERS = ("p", "q", "r")
CLUSTERS = (ClusterId("d", 1), ClusterId("c", 1), ClusterId("d", 2), ClusterId("c", 2))

leaf = st.one_of(
    st.sampled_from([TOP, BOT]),
    st.builds(Lit, st.sampled_from(LETTERS), st.booleans()),
)


def _extend(children):
    par = st.builds(Par, st.sampled_from([OR, AND]), children, children)
    choice = st.sampled_from(CLUSTERS).flatmap(
        lambda cl: st.builds(Choice, st.just(OR if cl.disjunctive else AND), st.just(cl), children, children)
    )
    return st.one_of(par, choice)


def cirquents(max_leaves: int = 8):
    return st.recursive(leaf, _extend, max_leaves=max_leaves)


def resolutions(clusters=CLUSTERS):
    return st.fixed_dictionaries({}, optional={cl: st.sampled_from([0, 1]) for cl in clusters})


interpretations = st.fixed_dictionaries({p: st.booleans() for p in LETTERS})
