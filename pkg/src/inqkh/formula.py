"""Formula ASTs for PL and DELKh: parsing, printing, and schema matching.

The AST has exactly five propositional constructors (atom, bot, and, or,
implies) plus three modalities (K, Kh, box).  The derived connectives
~, top, <->, <> and Khat are parse-time sugar and print-time re-sugaring;
they never appear as nodes.  Kh only takes purely propositional arguments,
enforced at construction time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import KhScopeError, ParseError


class Formula:
    """Base class for formula nodes (frozen, hashable, structurally equal)."""

    __slots__ = ()

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    sub: Formula


@dataclass(frozen=True)
class KnowHow(Formula):
    sub: Formula

    def __post_init__(self):
        if not is_pl(self.sub):
            raise KhScopeError(
                f"Kh takes a purely propositional argument, got: {render_formula(self.sub)}"
            )


@dataclass(frozen=True)
class Box(Formula):
    sub: Formula


# Metavariables for axiom-schema skeletons.  They occur only at leaf
# positions of patterns; concrete formulas never contain them.

@dataclass(frozen=True)
class AtomVar(Formula):
    """Ranges over proposition letters only."""

    name: str


@dataclass(frozen=True)
class PLVar(Formula):
    """Ranges over purely propositional formulas."""

    name: str


@dataclass(frozen=True)
class FormulaVar(Formula):
    """Ranges over arbitrary formulas of the full language."""

    name: str


SchemaPattern = Formula
Binding = dict[str, Formula]

BOT = Bottom()
TOP = Implies(BOT, BOT)


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def diamond(f: Formula) -> Formula:
    return neg(Box(neg(f)))


def khat(f: Formula) -> Formula:
    return neg(Know(neg(f)))


def _fold_balanced(op, parts: list[Formula]) -> Formula:
    # balanced association keeps formula depth logarithmic; order is preserved
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return op(_fold_balanced(op, parts[:mid]), _fold_balanced(op, parts[mid:]))


def conj(parts: list[Formula], empty: Formula = TOP) -> Formula:
    """Conjunction of the parts in order (balanced); `empty` for the empty list."""
    return _fold_balanced(And, list(parts)) if parts else empty


def disj(parts: list[Formula], empty: Formula = BOT) -> Formula:
    """Disjunction of the parts in order (balanced); `empty` for the empty list."""
    return _fold_balanced(Or, list(parts)) if parts else empty


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or, Implies)):
        return (f.left, f.right)
    if isinstance(f, (Know, KnowHow, Box)):
        return (f.sub,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, including f itself."""
    yield f
    for c in children(f):
        yield from subformulas(c)


def is_pl(f: Formula) -> bool:
    """True iff f contains no K, Kh or box node (and no full-language metavariable)."""
    if isinstance(f, (Know, KnowHow, Box, FormulaVar)):
        return False
    return all(is_pl(c) for c in children(f))


def atoms(f: Formula) -> frozenset[str]:
    """The proposition letters occurring in f."""
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    cur = f
    for i in path:
        kids = children(cur)
        if i < 0 or i >= len(kids):
            raise ParseError(f"path {list(path)} does not exist in {render_formula(f)}")
        cur = kids[i]
    return cur


def replace_at(f: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    if not path:
        return new
    i, rest = path[0], path[1:]
    kids = children(f)
    if i < 0 or i >= len(kids):
        raise ParseError(f"path {list(path)} does not exist in {render_formula(f)}")
    replaced = replace_at(kids[i], rest, new)
    if isinstance(f, (And, Or, Implies)):
        parts = [f.left, f.right]
        parts[i] = replaced
        return type(f)(parts[0], parts[1])
    return type(f)(replaced)


def path_in_kh_scope(f: Formula, path: tuple[int, ...]) -> bool:
    """True iff the path descends strictly into the argument of some Kh node.

    A path pointing *at* a Kh node is not in its scope.
    """
    cur = f
    for i in path:
        if isinstance(cur, KnowHow):
            return True
        cur = children(cur)[i]
    return False


def match_schema(pattern: SchemaPattern, candidate: Formula) -> Optional[Binding]:
    """Match a concrete formula against a schema skeleton.

    Returns the (unique) binding of metavariable names to subformulas, or
    None if no sort-respecting binding exists.  Matching is structural and
    deterministic since metavariables occur only at leaves.
    """
    binding: Binding = {}
    return binding if _match(pattern, candidate, binding) else None


def _match(p: Formula, c: Formula, binding: Binding) -> bool:
    if isinstance(p, AtomVar):
        if not isinstance(c, Atom):
            return False
        return _bind(p.name, c, binding)
    if isinstance(p, PLVar):
        if not is_pl(c):
            return False
        return _bind(p.name, c, binding)
    if isinstance(p, FormulaVar):
        return _bind(p.name, c, binding)
    if type(p) is not type(c):
        return False
    if isinstance(p, Atom):
        return p.name == c.name
    return all(_match(pk, ck, binding) for pk, ck in zip(children(p), children(c)))


def _bind(name: str, value: Formula, binding: Binding) -> bool:
    if name in binding:
        return binding[name] == value
    binding[name] = value
    return True


def substitute(pattern: SchemaPattern, binding: Binding) -> Formula:
    """Instantiate a schema skeleton; raises on missing names or sort violations."""
    if isinstance(pattern, AtomVar):
        value = _lookup(pattern.name, binding)
        if not isinstance(value, Atom):
            raise KhScopeError(
                f"metavariable {pattern.name} requires a proposition letter, got {value}"
            )
        return value
    if isinstance(pattern, PLVar):
        value = _lookup(pattern.name, binding)
        if not is_pl(value):
            raise KhScopeError(
                f"metavariable {pattern.name} requires a propositional formula, got {value}"
            )
        return value
    if isinstance(pattern, FormulaVar):
        return _lookup(pattern.name, binding)
    if isinstance(pattern, (Atom, Bottom)):
        return pattern
    if isinstance(pattern, (And, Or, Implies)):
        return type(pattern)(substitute(pattern.left, binding), substitute(pattern.right, binding))
    return type(pattern)(substitute(pattern.sub, binding))


def _lookup(name: str, binding: Binding) -> Formula:
    if name not in binding:
        raise KeyError(f"no binding for metavariable {name}")
    return binding[name]


# --- Parsing ------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<arrow><->|->|↔|→)
      | (?P<sym>[()&|~¬∧∨⊥⊤□◇])
      | (?P<brack>\[\]|<>)
      | (?P<word>[A-Za-z][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)

_UNICODE_SYM = {"¬": "~", "∧": "&", "∨": "|", "↔": "<->", "→": "->",
                "□": "[]", "◇": "<>", "⊥": "bot", "⊤": "top"}

_PREFIX_WORDS = ("K", "Kh", "Khat")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        tok = m.group("arrow") or m.group("sym") or m.group("brack") or m.group("word")
        tokens.append((_UNICODE_SYM.get(tok, tok), m.end() - len(tok)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect(self, want: str):
        tok = self.peek()
        if tok != want:
            raise ParseError(f"expected {want!r}, found {tok!r}", self.pos())
        self.i += 1

    def parse(self) -> Formula:
        f = self.parse_iff()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        return f

    def parse_iff(self) -> Formula:
        f = self.parse_imp()
        while self.peek() == "<->":
            self.take()
            f = iff(f, self.parse_imp())
        return f

    def parse_imp(self) -> Formula:
        f = self.parse_or()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.parse_imp())
        return f

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        tok = self.peek()
        pos = self.pos()
        if tok == "~":
            self.take()
            return neg(self.parse_unary())
        if tok == "[]":
            self.take()
            return Box(self.parse_unary())
        if tok == "<>":
            self.take()
            return diamond(self.parse_unary())
        if tok in _PREFIX_WORDS:
            self.take()
            sub = self.parse_unary()
            if tok == "K":
                return Know(sub)
            if tok == "Khat":
                return khat(sub)
            try:
                return KnowHow(sub)
            except KhScopeError as e:
                raise KhScopeError(f"{e} (at position {pos})") from None
        return self.parse_atomlike()

    def parse_atomlike(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.parse_iff()
            self.expect(")")
            return f
        if tok == "bot":
            self.take()
            return BOT
        if tok == "top":
            self.take()
            return TOP
        if tok is not None and re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok):
            self.take()
            return Atom(tok)
        raise ParseError(f"expected a formula, found {tok!r}", self.pos())


def parse_formula(text: str) -> Formula:
    """Parse the published grammar into the sugar-free AST."""
    return _Parser(text).parse()


# --- Printing -----------------------------------------------------------

# precedence levels, loosest first
_IFF, _IMP, _OR, _AND, _PREFIX, _LEAF = range(6)


def _sugar(f: Formula):
    """Greedy re-sugaring: returns (kind, payload) or None."""
    if isinstance(f, Implies) and f.right == BOT:
        if f.left == BOT:
            return ("top", None)
        if isinstance(f.left, Box) and isinstance(f.left.sub, Implies) and f.left.sub.right == BOT:
            return ("diamond", f.left.sub.left)
        if isinstance(f.left, Know) and isinstance(f.left.sub, Implies) and f.left.sub.right == BOT:
            return ("khat", f.left.sub.left)
        return ("not", f.left)
    if isinstance(f, And) and isinstance(f.left, Implies) and isinstance(f.right, Implies):
        if f.left.left == f.right.right and f.left.right == f.right.left:
            return ("iff", (f.left.left, f.left.right))
    return None


def _render_prefix(word: str, sub: Formula, tight: bool) -> str:
    inner, prec = _render(sub)
    if prec < _PREFIX:
        return f"{word}({inner})"
    return f"{word}{inner}" if tight else f"{word} {inner}"


def _render(f: Formula) -> tuple[str, int]:
    sugar = _sugar(f)
    if sugar is not None:
        kind, payload = sugar
        if kind == "top":
            return "top", _LEAF
        if kind == "not":
            return _render_prefix("~", payload, tight=True), _PREFIX
        if kind == "diamond":
            return _render_prefix("<>", payload, tight=False), _PREFIX
        if kind == "khat":
            return _render_prefix("Khat", payload, tight=False), _PREFIX
        if kind == "iff":
            a, b = payload
            return f"{_at_least(a, _IMP)} <-> {_at_least(b, _IMP)}", _IFF
    if isinstance(f, Atom):
        return f.name, _LEAF
    if isinstance(f, Bottom):
        return "bot", _LEAF
    if isinstance(f, Implies):
        return f"{_at_least(f.left, _OR)} -> {_at_least(f.right, _IMP)}", _IMP
    if isinstance(f, Or):
        return f"{_at_least(f.left, _OR)} | {_at_least(f.right, _AND)}", _OR
    if isinstance(f, And):
        return f"{_at_least(f.left, _AND)} & {_at_least(f.right, _PREFIX)}", _AND
    if isinstance(f, Know):
        return _render_prefix("K", f.sub, tight=False), _PREFIX
    if isinstance(f, KnowHow):
        return _render_prefix("Kh", f.sub, tight=False), _PREFIX
    if isinstance(f, Box):
        return _render_prefix("[]", f.sub, tight=False), _PREFIX
    if isinstance(f, AtomVar):
        return f"${f.name}:atom", _LEAF
    if isinstance(f, PLVar):
        return f"${f.name}:pl", _LEAF
    if isinstance(f, FormulaVar):
        return f"${f.name}", _LEAF
    raise TypeError(f"not a formula: {f!r}")


def _at_least(f: Formula, minimum: int) -> str:
    text, prec = _render(f)
    return f"({text})" if prec < minimum else text


def render_formula(f: Formula) -> str:
    """Print a formula; parse_formula(render_formula(f)) == f."""
    return _render(f)[0]
