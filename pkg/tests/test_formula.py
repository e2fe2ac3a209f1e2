import pytest
from hypothesis import given

from inqkh.errors import KhScopeError, ParseError
from inqkh.formula import (
    And, Atom, AtomVar, Bottom, Box, FormulaVar, Implies, Know, KnowHow, Or,
    PLVar, BOT, TOP, atoms, iff, is_pl, khat, match_schema, neg,
    parse_formula, path_in_kh_scope, render_formula, replace_at,
    subformula_at, subformulas, substitute,
)

from conftest import delkh_formulas, subsets

p, q = Atom("p"), Atom("q")


def test_parse_double_negation_expands_sugar():
    assert parse_formula("~~p -> p") == Implies(Implies(Implies(p, BOT), BOT), p)


def test_parse_kh_disjunction():
    assert parse_formula("Kh(p | ~p)") == KnowHow(Or(p, Implies(p, BOT)))


def test_parse_kh_rejects_modal_argument():
    with pytest.raises(KhScopeError):
        parse_formula("Kh(K p)")
    with pytest.raises(KhScopeError):
        KnowHow(Know(p))


@pytest.mark.parametrize("text, expected", [
    ("top", TOP),
    ("⊥", BOT),
    ("p ∧ q", And(p, q)),
    ("p ∨ q", Or(p, q)),
    ("p → q", Implies(p, q)),
    ("¬p", neg(p)),
    ("□ p", Box(p)),
    ("◇ p", neg(Box(neg(p)))),
    ("Khat p", khat(p)),
    ("p ↔ q", iff(p, q)),
    ("p <-> q", iff(p, q)),
])
def test_unicode_and_ascii_aliases(text, expected):
    assert parse_formula(text) == expected


def test_precedence():
    assert parse_formula("~p & q | r -> s <-> t") == iff(
        Implies(Or(And(neg(p), q), Atom("r")), Atom("s")), Atom("t")
    )
    assert parse_formula("K p & q") == And(Know(p), q)
    assert parse_formula("a -> b -> c") == Implies(
        Atom("a"), Implies(Atom("b"), Atom("c"))
    )


@pytest.mark.parametrize("formula, text", [
    (Implies(p, BOT), "~p"),
    (KnowHow(Or(p, q)), "Kh(p | q)"),
    (Box(Know(p)), "[] K p"),
    (TOP, "top"),
    (neg(Box(neg(p))), "<> p"),
    (khat(And(p, q)), "Khat(p & q)"),
])
def test_render_examples(formula, text):
    assert render_formula(formula) == text


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_formula("p -> $q")
    assert err.value.position == 5
    with pytest.raises(ParseError):
        parse_formula("p q")
    with pytest.raises(ParseError):
        parse_formula("(p | q")


@given(delkh_formulas)
def test_round_trip(f):
    assert parse_formula(render_formula(f)) == f


@given(delkh_formulas)
def test_no_sugar_nodes(f):
    # the AST has exactly eight constructors; re-parsing proves the printer
    # never leaks a sugar-only form the grammar cannot express
    kinds = {type(g) for g in subformulas(f)}
    assert kinds <= {Atom, Bottom, And, Or, Implies, Know, KnowHow, Box}


def test_is_pl():
    assert is_pl(Or(p, Implies(p, BOT)))
    assert not is_pl(Know(p))
    assert not is_pl(And(p, KnowHow(q)))


def test_atoms():
    assert atoms(Or(p, Implies(p, BOT))) == {"p"}
    assert atoms(BOT) == frozenset()
    assert atoms(KnowHow(Implies(p, q))) == {"p", "q"}


# --- schema matching ---

KHK = Implies(KnowHow(PLVar("a")), Know(PLVar("a")))
KKHP = Implies(Know(AtomVar("p")), KnowHow(AtomVar("p")))
KHBOT = iff(KnowHow(BOT), BOT)


def test_match_khk_instance():
    target = parse_formula("Kh(p & q) -> K(p & q)")
    assert match_schema(KHK, target) == {"a": And(p, q)}


def test_match_kkhp_requires_atom():
    assert match_schema(KKHP, parse_formula("K(p | q) -> Kh(p | q)")) is None
    assert match_schema(KKHP, parse_formula("K p -> Kh p")) == {"p": p}


def test_match_khbot_empty_binding():
    assert match_schema(KHBOT, parse_formula("Kh bot <-> bot")) == {}


def test_match_requires_consistent_bindings():
    pattern = Implies(PLVar("a"), PLVar("a"))
    assert match_schema(pattern, Implies(p, p)) == {"a": p}
    assert match_schema(pattern, Implies(p, q)) is None


def test_pl_metavariable_rejects_modal_binding():
    pattern = Implies(PLVar("a"), Box(PLVar("a")))
    assert match_schema(pattern, Implies(Know(p), Box(Know(p)))) is None
    loose = Implies(FormulaVar("a"), Box(FormulaVar("a")))
    assert match_schema(loose, Implies(Know(p), Box(Know(p)))) == {"a": Know(p)}


def test_substitute_round_trip():
    binding = match_schema(KHK, parse_formula("Kh(p | q) -> K(p | q)"))
    assert substitute(KHK, binding) == parse_formula("Kh(p | q) -> K(p | q)")


def test_substitute_sort_violation():
    with pytest.raises(KhScopeError):
        substitute(KKHP, {"p": Or(p, q)})
    with pytest.raises(KeyError):
        substitute(KHK, {})


def test_match_none_means_no_binding_exists():
    # bounded enumeration over candidate subformulas confirms the miss
    candidate = parse_formula("K(p | q) -> Kh(p | q)")
    for sub in subformulas(candidate):
        try:
            built = substitute(KKHP, {"p": sub})
        except KhScopeError:
            continue
        assert built != candidate


# --- paths ---

def test_subformula_paths():
    f = parse_formula("K ~p -> K [](Kh p -> bot)")
    assert subformula_at(f, ()) == f
    assert subformula_at(f, (1, 0, 0, 1)) == BOT
    assert replace_at(f, (1, 0, 0, 1), KnowHow(BOT)) == parse_formula(
        "K ~p -> K [](Kh p -> Kh bot)"
    )
    assert not path_in_kh_scope(f, (1, 0, 0, 1))
    assert path_in_kh_scope(f, (1, 0, 0, 0, 0))
    with pytest.raises(ParseError):
        subformula_at(f, (4,))
