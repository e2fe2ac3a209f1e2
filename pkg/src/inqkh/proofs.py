"""Hilbert-style derivation checking for the SDELKh axiom system.

Proof scripts are line-oriented:  `<n>. <formula> ; <justification>`
with justifications

    ax NAME                      axiom-schema instance, binding inferred
    ax NAME {a:=p|q, b:=r}       axiom-schema instance, binding given
    mp I J                       modus ponens: line J is (line I -> this)
    neck I                       K-necessitation of line I
    necbox I                     box-necessitation of line I
    rre I at PATH using J        replace the subformula of line I at PATH by
                                 its equal from the biconditional on line J;
                                 PATH is `root` or dot-separated child indexes,
                                 and may not descend into a Kh argument
    rkhimp I                     from Kh a -> Kh b on line I infer Kh(a -> b)

Blank lines and `#` comments are ignored; numbering is sequential from 1
and references point strictly backwards.  TAUT is checked by abstracting
maximal modal subformulas as fresh atoms and running the truth-table
decider, since the system admits all propositional tautologies as axioms.
Every check failure carries a stable named reason code.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import KhScopeError, ParseError
from .formula import (
    And, Atom, AtomVar, Binding, Box, Formula, FormulaVar, Implies,
    Know, KnowHow, Or, PLVar, BOT, atoms, conj, diamond, iff, khat,
    match_schema, neg, parse_formula, path_in_kh_scope, render_formula,
    replace_at, subformula_at, subformulas, substitute,
)
from .decide import taut

_PHI, _PSI = FormulaVar("phi"), FormulaVar("psi")
_A, _B = PLVar("a"), PLVar("b")
_P = AtomVar("p")

SCHEMAS: dict[str, Formula] = {
    "DIST_K": Implies(Know(Implies(_PHI, _PSI)), Implies(Know(_PHI), Know(_PSI))),
    "T_K": Implies(Know(_PHI), _PHI),
    "4_K": Implies(Know(_PHI), Know(Know(_PHI))),
    "5_K": Implies(neg(Know(_PHI)), Know(neg(Know(_PHI)))),
    "DIST_Box": Implies(Box(Implies(_PHI, _PSI)), Implies(Box(_PHI), Box(_PSI))),
    "T_Box": Implies(Box(_PHI), _PHI),
    "4_Box": Implies(Box(_PHI), Box(Box(_PHI))),
    "PR": Implies(Know(Box(_PHI)), Box(Know(_PHI))),
    "Per": Implies(_A, Box(_A)),
    "Ver": Implies(_A, diamond(KnowHow(_A))),
    "KhK": Implies(KnowHow(_A), Know(_A)),
    "KKhp": Implies(Know(_P), KnowHow(_P)),
    "KhBot": iff(KnowHow(BOT), BOT),
    "KhOr": iff(KnowHow(Or(_A, _B)), Or(KnowHow(_A), KnowHow(_B))),
    "KhAnd": iff(KnowHow(And(_A, _B)), And(KnowHow(_A), KnowHow(_B))),
    "KhImp": iff(KnowHow(Implies(_A, _B)), Know(Box(Implies(KnowHow(_A), KnowHow(_B))))),
    "4_Kh": Implies(KnowHow(_A), Know(KnowHow(_A))),
    "5_Kh": Implies(neg(KnowHow(_A)), Know(neg(KnowHow(_A)))),
}

_ALIASES = {
    "DIST_□": "DIST_Box",
    "T_□": "T_Box",
    "4_□": "4_Box",
    "Kh⊥": "KhBot",
    "Kh∨": "KhOr",
    "Kh∧": "KhAnd",
    "Kh→": "KhImp",
    "EU_k": "EU",
}

AXIOM_NAMES = ("TAUT", "EU") + tuple(SCHEMAS)


def canonical_axiom_name(name: str) -> str:
    return _ALIASES.get(name, name)


def eu_pattern(k: int) -> Formula:
    """EU_k: a & Khat(a & a1) & ... -> <>(K a & Khat a1 & ...), left-associated."""
    if k < 0:
        raise ValueError("EU needs k >= 0")
    extras = [PLVar(f"a{i}") for i in range(1, k + 1)]
    antecedent = conj([_A] + [khat(And(_A, x)) for x in extras])
    consequent = diamond(conj([Know(_A)] + [khat(x) for x in extras]))
    return Implies(antecedent, consequent)


def instantiate(name: str, binding: Binding, k: Optional[int] = None) -> Formula:
    """The concrete instance of an axiom schema under a binding.

    EU takes its arity from `k` or from the a1..ak binding keys, which must
    be contiguous.  TAUT has no finite skeleton and cannot be instantiated.
    """
    name = canonical_axiom_name(name)
    if name == "TAUT":
        raise ValueError("TAUT is a schema family, not an instantiable skeleton")
    if name == "EU":
        if k is None:
            k = _eu_arity_from_binding(binding)
        expected = {"a"} | {f"a{i}" for i in range(1, k + 1)}
        if set(binding) != expected:
            raise ValueError(
                f"EU with k={k} needs bindings for exactly {sorted(expected)}, "
                f"got {sorted(binding)}"
            )
        return substitute(eu_pattern(k), binding)
    if name not in SCHEMAS:
        raise ValueError(f"unknown axiom {name!r}")
    return substitute(SCHEMAS[name], binding)


def _eu_arity_from_binding(binding: Binding) -> int:
    k = 0
    while f"a{k + 1}" in binding:
        k += 1
    return k


def modal_abstraction(f: Formula) -> Formula:
    """Replace maximal modal subformulas by fresh atoms, same subtree same atom."""
    table: dict[Formula, Atom] = {}
    taken = set(atoms(f))
    counter = itertools.count()

    def fresh() -> Atom:
        while True:
            name = f"m{next(counter)}"
            if name not in taken:
                return Atom(name)

    def go(g: Formula) -> Formula:
        if isinstance(g, (Know, KnowHow, Box)):
            if g not in table:
                table[g] = fresh()
            return table[g]
        if isinstance(g, (And, Or, Implies)):
            return type(g)(go(g.left), go(g.right))
        return g

    return go(f)


# --- Proof scripts --------------------------------------------------------

@dataclass(frozen=True)
class AxJust:
    name: str
    binding: Optional[Binding] = None


@dataclass(frozen=True)
class MPJust:
    i: int
    j: int


@dataclass(frozen=True)
class NecKJust:
    i: int


@dataclass(frozen=True)
class NecBoxJust:
    i: int


@dataclass(frozen=True)
class RREJust:
    i: int
    path: tuple[int, ...]
    j: int


@dataclass(frozen=True)
class RKhImpJust:
    i: int


Justification = AxJust | MPJust | NecKJust | NecBoxJust | RREJust | RKhImpJust


@dataclass(frozen=True)
class ProofLine:
    number: int
    formula: Formula
    justification: Justification
    text: str


@dataclass(frozen=True)
class Proof:
    lines: tuple[ProofLine, ...]


@dataclass(frozen=True)
class LineResult:
    number: int
    ok: bool
    code: Optional[str] = None
    message: Optional[str] = None


@dataclass(frozen=True)
class ProofReport:
    ok: bool
    lines: tuple[LineResult, ...]
    theorem: Optional[Formula] = field(default=None)

    def failures(self) -> list[LineResult]:
        return [r for r in self.lines if not r.ok]


_LINE_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*$")
_PATH_RE = re.compile(r"^\d+(\.\d+)*$")


def parse_proof(text: str) -> Proof:
    lines: list[ProofLine] = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE_RE.match(stripped)
        if m is None:
            raise ParseError(f"malformed proof line: {stripped!r}")
        number = int(m.group(1))
        if number != len(lines) + 1:
            raise ParseError(f"expected line number {len(lines) + 1}, got {number}")
        formula = parse_formula(m.group(2))
        just = _parse_justification(m.group(3))
        lines.append(ProofLine(number, formula, just, stripped))
    if not lines:
        raise ParseError("empty proof script")
    return Proof(tuple(lines))


def _parse_justification(text: str) -> Justification:
    parts = text.split(None, 1)
    if not parts:
        raise ParseError("missing justification")
    head, rest = parts[0], (parts[1] if len(parts) > 1 else "")
    if head == "ax":
        m = re.match(r"^(\S+)\s*(\{.*\})?\s*$", rest)
        if m is None:
            raise ParseError(f"malformed axiom justification: {text!r}")
        binding = _parse_binding(m.group(2)) if m.group(2) else None
        return AxJust(m.group(1), binding)
    if head == "mp":
        i, j = _int_args(rest, 2, text)
        return MPJust(i, j)
    if head == "neck":
        (i,) = _int_args(rest, 1, text)
        return NecKJust(i)
    if head == "necbox":
        (i,) = _int_args(rest, 1, text)
        return NecBoxJust(i)
    if head == "rre":
        m = re.match(r"^(\d+)\s+at\s+(\S+)\s+using\s+(\d+)\s*$", rest)
        if m is None:
            raise ParseError(f"malformed rre justification: {text!r}")
        path_text = m.group(2)
        if path_text == "root":
            path: tuple[int, ...] = ()
        elif _PATH_RE.match(path_text):
            path = tuple(int(x) for x in path_text.split("."))
        else:
            raise ParseError(f"malformed rre path {path_text!r}")
        return RREJust(int(m.group(1)), path, int(m.group(3)))
    if head == "rkhimp":
        (i,) = _int_args(rest, 1, text)
        return RKhImpJust(i)
    raise ParseError(f"unknown justification {head!r}")


def _int_args(rest: str, n: int, text: str) -> tuple[int, ...]:
    parts = rest.split()
    if len(parts) != n or not all(p.isdigit() for p in parts):
        raise ParseError(f"justification needs {n} line number(s): {text!r}")
    return tuple(int(p) for p in parts)


def _parse_binding(text: str) -> Binding:
    body = text.strip()[1:-1].strip()
    binding: Binding = {}
    if not body:
        return binding
    for entry in body.split(","):
        if ":=" not in entry:
            raise ParseError(f"malformed binding entry {entry!r}")
        name, _, value = entry.partition(":=")
        binding[name.strip()] = parse_formula(value.strip())
    return binding


# --- Checking -------------------------------------------------------------

def check_proof(proof: Proof | str) -> ProofReport:
    """Verify every line; the report names the failing side condition per line."""
    if isinstance(proof, str):
        proof = parse_proof(proof)
    results: list[LineResult] = []
    for line in proof.lines:
        code, message = _check_line(line, proof.lines)
        results.append(LineResult(line.number, code is None, code, message))
    ok = all(r.ok for r in results)
    return ProofReport(ok, tuple(results), proof.lines[-1].formula if ok else None)


def _check_line(line: ProofLine, lines) -> tuple[Optional[str], Optional[str]]:
    just = line.justification
    if isinstance(just, AxJust):
        return _check_axiom(line, just)

    refs = {MPJust: ("i", "j"), NecKJust: ("i",), NecBoxJust: ("i",),
            RREJust: ("i", "j"), RKhImpJust: ("i",)}[type(just)]
    for attr in refs:
        ref = getattr(just, attr)
        if not 1 <= ref < line.number:
            return "forward-reference", (
                f"line {line.number} references line {ref}, which is not strictly earlier"
            )

    if isinstance(just, MPJust):
        premise = lines[just.i - 1].formula
        rule = lines[just.j - 1].formula
        if rule != Implies(premise, line.formula):
            return "mp-mismatch", (
                f"line {just.j} is not (line {just.i} -> line {line.number})"
            )
        return None, None
    if isinstance(just, NecKJust):
        if line.formula != Know(lines[just.i - 1].formula):
            return "nec-mismatch", f"line {line.number} is not K applied to line {just.i}"
        return None, None
    if isinstance(just, NecBoxJust):
        if line.formula != Box(lines[just.i - 1].formula):
            return "nec-mismatch", f"line {line.number} is not box applied to line {just.i}"
        return None, None
    if isinstance(just, RREJust):
        return _check_rre(line, just, lines)
    if isinstance(just, RKhImpJust):
        ref = lines[just.i - 1].formula
        shape_ok = (
            isinstance(ref, Implies)
            and isinstance(ref.left, KnowHow)
            and isinstance(ref.right, KnowHow)
        )
        if not shape_ok:
            return "rkhimp-mismatch", f"line {just.i} is not of the form Kh a -> Kh b"
        if line.formula != KnowHow(Implies(ref.left.sub, ref.right.sub)):
            return "rkhimp-mismatch", (
                f"line {line.number} is not Kh of the implication from line {just.i}"
            )
        return None, None
    return "unknown-justification", f"cannot check {just!r}"


def _check_axiom(line: ProofLine, just: AxJust) -> tuple[Optional[str], Optional[str]]:
    name = canonical_axiom_name(just.name)
    if name not in AXIOM_NAMES:
        return "unknown-axiom", f"unknown axiom {just.name!r}"
    if name == "TAUT":
        if not taut(modal_abstraction(line.formula)).result:
            return "not-a-tautology", (
                f"line {line.number} is not a propositional tautology under modal abstraction"
            )
        return None, None
    if name == "EU":
        return _check_eu(line, just)
    pattern = SCHEMAS[name]
    if just.binding is not None:
        try:
            expected = instantiate(name, just.binding)
        except KhScopeError as e:
            return "sort-violation", str(e)
        except (KeyError, ValueError) as e:
            return "missing-binding", str(e)
        if expected != line.formula:
            return "axiom-mismatch", (
                f"binding instantiates {name} to {render_formula(expected)}, "
                f"not line {line.number}"
            )
        return None, None
    if match_schema(pattern, line.formula) is not None:
        return None, None
    if match_schema(_loosen(pattern), line.formula) is not None:
        return "sort-violation", (
            f"line {line.number} matches {name} only if a metavariable ignores its sort"
        )
    return "axiom-mismatch", f"line {line.number} is not an instance of {name}"


def _loosen(pattern: Formula, under_kh: bool = False) -> Formula:
    """The same skeleton with metavariable sorts relaxed, for diagnostics.

    Inside a Kh argument the relaxation stops at the PL sort, since concrete
    Kh nodes only ever hold propositional arguments anyway.
    """
    if isinstance(pattern, AtomVar):
        return PLVar(pattern.name) if under_kh else FormulaVar(pattern.name)
    if isinstance(pattern, PLVar):
        return pattern if under_kh else FormulaVar(pattern.name)
    if isinstance(pattern, (And, Or, Implies)):
        return type(pattern)(_loosen(pattern.left, under_kh), _loosen(pattern.right, under_kh))
    if isinstance(pattern, (Know, Box)):
        return type(pattern)(_loosen(pattern.sub, under_kh))
    if isinstance(pattern, KnowHow):
        return KnowHow(_loosen(pattern.sub, under_kh=True))
    return pattern


def _infer_eu_arity(f: Formula) -> Optional[int]:
    size = sum(1 for _ in subformulas(f))
    for k in range(size + 1):
        if match_schema(eu_pattern(k), f) is not None:
            return k
    return None


def _check_eu(line: ProofLine, just: AxJust) -> tuple[Optional[str], Optional[str]]:
    inferred = _infer_eu_arity(line.formula)
    if just.binding is None:
        if inferred is None:
            return "axiom-mismatch", f"line {line.number} is not an instance of EU"
        return None, None
    declared = _eu_arity_from_binding(just.binding)
    expected_keys = {"a"} | {f"a{i}" for i in range(1, declared + 1)}
    if set(just.binding) != expected_keys:
        return "eu-arity", (
            f"EU binding names must be a, a1..ak contiguously, got {sorted(just.binding)}"
        )
    if inferred is not None and inferred != declared:
        return "eu-arity", (
            f"line {line.number} is EU with k={inferred}, but the binding declares k={declared}"
        )
    try:
        expected = instantiate("EU", just.binding, declared)
    except KhScopeError as e:
        return "sort-violation", str(e)
    except (KeyError, ValueError) as e:
        return "missing-binding", str(e)
    if expected != line.formula:
        return "axiom-mismatch", (
            f"binding instantiates EU_{declared} to {render_formula(expected)}, "
            f"not line {line.number}"
        )
    return None, None


def _check_rre(line: ProofLine, just: RREJust, lines) -> tuple[Optional[str], Optional[str]]:
    source = lines[just.i - 1].formula
    bicond = lines[just.j - 1].formula
    sides = _biconditional_sides(bicond)
    if sides is None:
        return "rre-not-biconditional", f"line {just.j} is not a biconditional"
    x, y = sides
    try:
        target = subformula_at(source, just.path)
    except ParseError:
        return "rre-bad-path", f"path {list(just.path)} does not exist in line {just.i}"
    if path_in_kh_scope(source, just.path):
        return "kh-scope", (
            f"path {list(just.path)} descends into a Kh argument; "
            "replacement of equals is not admissible there"
        )
    if target == x:
        replacement = y
    elif target == y:
        replacement = x
    else:
        return "rre-mismatch", (
            f"subformula at path {list(just.path)} matches neither side of line {just.j}"
        )
    if replace_at(source, just.path, replacement) != line.formula:
        return "rre-mismatch", (
            f"replacing at path {list(just.path)} in line {just.i} does not give line {line.number}"
        )
    return None, None


def _biconditional_sides(f: Formula) -> Optional[tuple[Formula, Formula]]:
    if (
        isinstance(f, And)
        and isinstance(f.left, Implies)
        and isinstance(f.right, Implies)
        and f.left.left == f.right.right
        and f.left.right == f.right.left
    ):
        return f.left.left, f.left.right
    return None
