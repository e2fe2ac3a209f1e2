"""Shared oracles and random generators for the test suite.

The oracles here re-implement the definitions in their most literal,
slowest form (direct recursion, explicit subset quantification) so the
fast paths in the package are checked against something independent.
"""

from __future__ import annotations

import random
from itertools import chain, combinations

import pytest
from hypothesis import strategies as st

from inqkh.formula import (
    And, Atom, Bottom, Box, Formula, Implies, Know, KnowHow, Or, BOT,
)
from inqkh.model import Model


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def supports_oracle(m: Model, state, f: Formula) -> bool:
    """The five support clauses, verbatim, with the naive substate loop."""
    s = frozenset(state)
    if isinstance(f, Atom):
        return all(f.name in m.valuation[w] for w in s)
    if isinstance(f, Bottom):
        return not s
    if isinstance(f, And):
        return supports_oracle(m, s, f.left) and supports_oracle(m, s, f.right)
    if isinstance(f, Or):
        return supports_oracle(m, s, f.left) or supports_oracle(m, s, f.right)
    if isinstance(f, Implies):
        return all(
            not supports_oracle(m, t, f.left) or supports_oracle(m, t, f.right)
            for t in map(frozenset, subsets(s))
        )
    raise TypeError(f"not a propositional formula: {f!r}")


def pl_truth(f: Formula, val: frozenset[str]) -> bool:
    if isinstance(f, Atom):
        return f.name in val
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return pl_truth(f.left, val) and pl_truth(f.right, val)
    if isinstance(f, Or):
        return pl_truth(f.left, val) or pl_truth(f.right, val)
    if isinstance(f, Implies):
        return not pl_truth(f.left, val) or pl_truth(f.right, val)
    raise TypeError(f"not a propositional formula: {f!r}")


def random_el(rng: random.Random, names, depth: int, modal: int) -> Formula:
    """Random K-only formula (no Kh, no box)."""
    if depth <= 0:
        return BOT if rng.random() < 0.1 else Atom(rng.choice(names))
    kinds = ["atom", "or", "and", "imp", "imp"]
    if modal > 0:
        kinds += ["know", "know", "know"]
    kind = rng.choice(kinds)
    if kind == "atom":
        return Atom(rng.choice(names))
    if kind == "know":
        return Know(random_el(rng, names, depth - 1, modal - 1))
    left = random_el(rng, names, depth - 1, modal)
    right = random_el(rng, names, depth - 1, modal)
    return {"or": Or, "and": And, "imp": Implies}[kind](left, right)


def random_small_model(rng: random.Random, names, max_worlds: int = 4) -> Model:
    n = rng.randint(1, max_worlds)
    worlds = tuple(f"w{i}" for i in range(n))
    val = {w: frozenset(a for a in names if rng.random() < 0.5) for w in worlds}
    return Model(worlds, val)


# hypothesis strategies

atom_names = st.sampled_from(["p", "q", "r"])
pl_leaves = st.one_of(st.builds(Atom, atom_names), st.just(BOT))
pl_formulas = st.recursive(
    pl_leaves,
    lambda kids: st.one_of(
        st.builds(And, kids, kids),
        st.builds(Or, kids, kids),
        st.builds(Implies, kids, kids),
    ),
    max_leaves=10,
)
small_pl_formulas = st.recursive(
    pl_leaves,
    lambda kids: st.one_of(
        st.builds(And, kids, kids),
        st.builds(Or, kids, kids),
        st.builds(Implies, kids, kids),
    ),
    max_leaves=5,
)
delkh_formulas = st.recursive(
    st.one_of(pl_leaves, st.builds(KnowHow, small_pl_formulas)),
    lambda kids: st.one_of(
        st.builds(And, kids, kids),
        st.builds(Or, kids, kids),
        st.builds(Implies, kids, kids),
        st.builds(Know, kids),
        st.builds(Box, kids),
    ),
    max_leaves=8,
)


@pytest.fixture
def rng():
    return random.Random(20260810)
