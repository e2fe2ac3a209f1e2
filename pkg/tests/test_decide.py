import random

import pytest
from hypothesis import given, settings

from inqkh.decide import (
    delkh_valid, entails, enumerate_pointed_models, inqb_member,
    s5_valid, s5_valid_bruteforce, taut,
)
from inqkh.errors import AtomLimitError
from inqkh.formula import (
    And, Atom, Box, Implies, Know, KnowHow, Or, BOT,
    atoms, iff, khat, neg, parse_formula,
)
from inqkh.model import validate_model
from inqkh.semantics import satisfies, supports

from conftest import pl_formulas, random_el

p, q, r = Atom("p"), Atom("q"), Atom("r")
P = parse_formula


# --- taut ---

def test_taut_examples():
    assert taut(P("p | ~p")).result
    assert taut(P("~~p -> p")).result
    v = taut(P("p -> q"))
    assert not v.result
    assert v.witness == {"valuation": {"p": True, "q": False}}


def test_taut_atom_limit():
    f = P(" & ".join(f"a{i}" for i in range(25)))
    with pytest.raises(AtomLimitError):
        taut(f)


# --- S5 validity ---

def test_s5_valid_examples():
    assert s5_valid(P("K p -> p")).result
    v = s5_valid(P("p -> K p"))
    assert not v.result
    m = validate_model(v.witness["model"])
    assert len(m.worlds) == 2
    assert not satisfies(m, v.witness["world"], P("p -> K p"))
    # appendix-style S5 step, cross-checked against the brute-force oracle
    f = P("K(p | q) -> (Khat p | K q)")
    assert s5_valid(f).result
    assert s5_valid_bruteforce(f).result


def test_s5_bruteforce_examples():
    assert s5_valid_bruteforce(P("K p -> p")).result
    v = s5_valid_bruteforce(P("Khat p"))
    assert not v.result
    assert v.witness["model"]["worlds"] == ["w{}"]
    v = s5_valid_bruteforce(P("K(p | q) -> (K p | K q)"))
    assert not v.result
    vals = {frozenset(x) for x in v.witness["model"]["valuation"].values()}
    assert vals == {frozenset({"p"}), frozenset({"q"})}


def test_s5_bruteforce_atom_limit():
    with pytest.raises(AtomLimitError):
        s5_valid_bruteforce(P("K p | K q | K r"))


def test_oracle_agreement_random(rng):
    for _ in range(200):
        f = random_el(rng, ["p", "q"], depth=3, modal=3)
        fast = s5_valid(f)
        slow = s5_valid_bruteforce(f)
        assert fast.result == slow.result, f
        if not fast.result:
            m = validate_model(fast.witness["model"])
            assert not satisfies(m, fast.witness["world"], f)


# --- InqB membership ---

@pytest.mark.parametrize("text", [
    "~~p -> p",
    "(~p -> (q | r)) -> ((~p -> q) | (~p -> r))",            # KP instance
    "(~p -> (~q | ~r)) -> ((~p -> ~q) | (~p -> ~r))",        # ND_2 instance
    "((p -> q) -> p) -> p",                                  # Peirce for atoms
])
def test_inqb_member_true(text):
    assert inqb_member(P(text)).result


@pytest.mark.parametrize("text", [
    "p | ~p",
    "(((p | ~p) -> p) -> (p | ~p)) -> (p | ~p)",             # Peirce, a = p|~p
])
def test_inqb_member_false_with_witness(text):
    v = inqb_member(P(text))
    assert not v.result
    m = validate_model(v.witness["model"])
    assert not supports(m, v.witness["state"], P(text))


def test_inqb_routes_agree_randomized(rng):
    for _ in range(120):
        depth = rng.randint(1, 3)
        f = _random_pl(rng, ["p", "q"], depth)
        inqb_member(f)  # raises InternalInconsistencyError on route disagreement


def _random_pl(rng, names, depth):
    if depth <= 0:
        return BOT if rng.random() < 0.1 else Atom(rng.choice(names))
    kind = rng.choice(["atom", "or", "or", "and", "imp", "imp"])
    if kind == "atom":
        return Atom(rng.choice(names))
    ctor = {"or": Or, "and": And, "imp": Implies}[kind]
    return ctor(_random_pl(rng, names, depth - 1), _random_pl(rng, names, depth - 1))


def test_no_uniform_substitution():
    # the atomic double-negation law is in the logic, its compound instance is not
    assert inqb_member(P("~~p -> p")).result
    assert not inqb_member(P("~~(p | ~p) -> (p | ~p)")).result
    # excluded middle fails for atoms and for its negative instance alike,
    # each decided on its own full model
    assert not inqb_member(P("p | ~p")).result
    assert not inqb_member(P("~q | ~~q")).result


def test_disjunction_property(rng):
    for _ in range(100):
        a = _random_pl(rng, ["p", "q"], rng.randint(1, 3))
        b = _random_pl(rng, ["p", "q"], rng.randint(1, 3))
        whole = inqb_member(Or(a, b)).result
        parts = inqb_member(a).result or inqb_member(b).result
        assert whole == parts, (a, b)


# --- full-language validity ---

def test_delkh_valid_examples():
    a = And(p, q)
    assert delkh_valid(Implies(KnowHow(a), Know(a))).result
    lem = Or(p, neg(p))
    v = delkh_valid(Implies(Know(lem), KnowHow(lem)))
    assert not v.result
    m = validate_model(v.witness["model"])
    assert not satisfies(m, v.witness["world"], Implies(Know(lem), KnowHow(lem)))
    f = Implies(p, q)
    assert delkh_valid(iff(f, neg(Box(neg(KnowHow(f)))))).result  # a <-> <>Kh a


def test_delkh_countermodels_are_pruned():
    v = delkh_valid(Implies(Know(Or(p, neg(p))), KnowHow(Or(p, neg(p)))))
    assert len(v.witness["model"]["worlds"]) == 2  # cannot shrink below two worlds


@settings(max_examples=25, deadline=None)
@given(pl_formulas, pl_formulas)
def test_kh_implication_bridge(a, b):
    assert delkh_valid(KnowHow(Implies(a, b))).result \
        == delkh_valid(Implies(KnowHow(a), KnowHow(b))).result


# --- entailment ---

def test_entails_examples():
    assert entails([And(p, q)], p, "support").result
    assert entails([neg(neg(p))], p, "support").result
    assert entails([neg(neg(p))], p, "knowhow").result
    v = entails([Or(p, q)], p, "support")
    assert not v.result
    assert v.witness["model"]["worlds"] == ["w{q}"]
    assert not entails([Or(p, q)], p, "knowhow").result
    assert entails([], P("~~p -> p"), "support").result
    assert entails([], P("~~p -> p"), "knowhow").result


def test_entails_atom_limit():
    gamma = [P("p & q"), P("r & s")]
    with pytest.raises(AtomLimitError):
        entails(gamma, P("t"), "support")


def test_entails_witness_rechecks():
    v = entails([P("p | q"), P("p -> q")], P("q & p"), "support")
    assert not v.result
    m = validate_model(v.witness["model"])
    s = v.witness["state"]
    assert supports(m, s, P("p | q")) and supports(m, s, P("p -> q"))
    assert not supports(m, s, P("q & p"))


def test_entails_modes_agree(rng):
    for _ in range(60):
        gamma = [_random_pl(rng, ["p", "q"], rng.randint(1, 2))
                 for _ in range(rng.randint(0, 2))]
        f = _random_pl(rng, ["p", "q"], rng.randint(1, 2))
        assert entails(gamma, f, "support").result == entails(gamma, f, "knowhow").result


def test_deduction_theorem(rng):
    for _ in range(60):
        gamma = [_random_pl(rng, ["p", "q"], rng.randint(1, 2))
                 for _ in range(rng.randint(1, 2))]
        f = _random_pl(rng, ["p", "q"], rng.randint(1, 2))
        folded = entails(gamma[:-1], Implies(gamma[-1], f), "knowhow").result
        assert entails(gamma, f, "knowhow").result == folded


def test_verdict_doc_shape():
    doc = inqb_member(P("p | ~p")).to_doc()
    assert doc["result"] is False and doc["method"] == "full-model"
    assert set(doc["witness"]) == {"model", "state"}
