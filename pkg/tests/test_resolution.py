import random

import pytest
from hypothesis import given, settings

from inqkh.errors import ResourceError
from inqkh.formula import And, Atom, Implies, Or, BOT, neg, parse_formula
from inqkh.model import Model, full_model
from inqkh.resolution import (
    AtomRes, BottomRes, FnTable, Left, Pair, Right, render_resolution,
    resolution_space, resolution_space_size, resolutions_at,
    uniform_resolutions,
)
from inqkh.semantics import satisfies

from conftest import pl_formulas, random_small_model

p, q = Atom("p"), Atom("q")
F_BOT_P = FnTable(((AtomRes("p"), BottomRes()),))  # the unique resolution of ~p


def test_space_size_examples():
    assert resolution_space_size(p) == 1
    assert resolution_space_size(Or(p, q)) == 2
    pq = Or(p, q)
    assert resolution_space_size(Implies(pq, pq)) == 4


def test_space_size_matches_enumeration():
    f = Implies(Or(p, q), Or(p, q))
    space = resolution_space(f)
    assert len(space.elements) == resolution_space_size(f) == 4
    assert len(set(space.elements)) == 4


def test_space_examples():
    assert resolution_space(BOT).elements == (BottomRes(),)
    assert resolution_space(Or(p, q)).elements == (Left(AtomRes("p")), Right(AtomRes("q")))
    assert resolution_space(neg(p)).elements == (F_BOT_P,)


def test_space_cap():
    f = parse_formula("(p | q) -> (p | q)")
    with pytest.raises(ResourceError):
        resolution_space(f, cap=3)
    # nested implication blow-up is caught arithmetically, before enumeration
    tower = parse_formula("((p|q|r) -> (p|q|r)) -> ((p|q|r) -> (p|q|r))")
    assert resolution_space_size(tower) == 27 ** 27
    with pytest.raises(ResourceError):
        resolution_space(tower, cap=10 ** 6)


def test_resolutions_at_examples():
    m = full_model({"p"})
    assert resolutions_at(m, "w{p}", p) == {AtomRes("p")}
    assert resolutions_at(m, "w{p}", BOT) == frozenset()
    assert resolutions_at(m, "w{}", neg(p)) == {F_BOT_P}
    assert resolutions_at(m, "w{p}", neg(p)) == frozenset()


def test_uniform_resolutions_examples():
    m = full_model({"p"})
    lem = Or(p, neg(p))
    assert uniform_resolutions(m, m.worlds, lem) == frozenset()
    assert uniform_resolutions(m, ["w{p}"], lem) == resolutions_at(m, "w{p}", lem)
    dnp = Implies(neg(neg(p)), p)
    assert resolution_space_size(dnp) == 1
    assert len(uniform_resolutions(m, m.worlds, dnp)) == 1


def test_uniform_needs_nonempty_state():
    with pytest.raises(ValueError):
        uniform_resolutions(full_model({"p"}), [], p)


@settings(max_examples=60, deadline=None)
@given(pl_formulas)
def test_membership_and_truth(f):
    rng = random.Random(hash(f) & 0xFFFF)
    m = random_small_model(rng, ["p", "q", "r"], max_worlds=3)
    space = set(resolution_space(f).elements)
    for w in m.worlds:
        rs = resolutions_at(m, w, f)
        assert rs <= space
        # resolvability equals truth
        assert bool(rs) == satisfies(m, w, f)


@settings(max_examples=40, deadline=None)
@given(pl_formulas)
def test_locality(f):
    rng = random.Random(hash(f) & 0xFFFF)
    val = frozenset(a for a in ("p", "q", "r") if rng.random() < 0.5)
    m1 = Model(("u", "x"), {"u": val, "x": frozenset()})
    m2 = Model(("y",), {"y": val | frozenset({"zz_unused"})})
    left = resolutions_at(m1, "u", f)
    right = resolutions_at(m2, "y", f)
    assert left == right  # same valuation on the occurring atoms


@settings(max_examples=40, deadline=None)
@given(pl_formulas)
def test_negation_law(f):
    rng = random.Random(hash(f) >> 3 & 0xFFFF)
    m = random_small_model(rng, ["p", "q", "r"], max_worlds=3)
    fully_applied = neg(f)
    space_elements = resolution_space(fully_applied).elements
    assert len(space_elements) == 1  # |S(bot)|^|S(f)| = 1
    constant_fn = space_elements[0]
    for w in m.worlds:
        rs = resolutions_at(m, w, fully_applied)
        assert rs in (frozenset(), frozenset({constant_fn}))
        assert (rs == frozenset()) == bool(resolutions_at(m, w, f))


@settings(max_examples=40, deadline=None)
@given(pl_formulas)
def test_uniform_antimonotone(f):
    rng = random.Random(hash(f) >> 5 & 0xFFFF)
    m = random_small_model(rng, ["p", "q", "r"], max_worlds=4)
    worlds = list(m.worlds)
    big = frozenset(worlds)
    small = frozenset(worlds[: max(1, len(worlds) // 2)])
    assert uniform_resolutions(m, big, f) <= uniform_resolutions(m, small, f)


def test_render_resolution():
    m = full_model({"p"})
    (fn,) = uniform_resolutions(m, m.worlds, Implies(neg(neg(p)), p))
    assert render_resolution(fn) == "{{{p↦bot}↦bot}↦p}"
    assert render_resolution(Left(AtomRes("p"))) == "inl(p)"
    assert render_resolution(Pair(AtomRes("p"), BottomRes())) == "(p,bot)"
