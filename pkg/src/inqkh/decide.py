"""Decision procedures with countermodel witnesses.

Every false verdict carries a witness document that re-checks to false
through the semantics module, greedily pruned for readability.  Caps are
per route; exceeding a fast route falls back where possible and otherwise
raises a typed resource error, never a wrong answer.

The single-agent S5 decider rests on the clause criterion: a normal-form
clause  a | Khat a0 | K a1 | ... | K an  fails at a pointed model iff
~a & ~a0 is satisfiable at the point and each ~ai & ~a0 is satisfiable
somewhere; so the clause is valid iff  a | a0  is a classical tautology
or some  a0 | ai  is.  (Clauses without the Khat part take a0 = bot.)
The brute-force enumerator guards this criterion in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import AtomLimitError, InternalInconsistencyError, ResourceError
from .formula import (
    And, Atom, Bottom, Box, Formula, Implies, Know, KnowHow, Or,
    BOT, atoms, conj, is_pl, render_formula, subformulas,
)
from .model import Model, full_model, restrict
from .resolution import DEFAULT_CAP
from .semantics import satisfies, support_bitset, supports
from .transform import (
    DEFAULT_CLAUSE_LIMIT, eliminate_box, eliminate_kh, rl_translation, s5_normal_form,
)

DEFAULT_TAUT_ATOM_LIMIT = 20
DEFAULT_FULL_MODEL_ATOM_LIMIT = 4


@dataclass(frozen=True)
class Verdict:
    result: bool
    method: str
    witness: Optional[dict] = field(default=None)

    def to_doc(self) -> dict:
        doc = {"result": self.result, "method": self.method}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


def _pl_truth(f: Formula, true_atoms: frozenset[str]) -> bool:
    if isinstance(f, Atom):
        return f.name in true_atoms
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return _pl_truth(f.left, true_atoms) and _pl_truth(f.right, true_atoms)
    if isinstance(f, Or):
        return _pl_truth(f.left, true_atoms) or _pl_truth(f.right, true_atoms)
    if isinstance(f, Implies):
        return not _pl_truth(f.left, true_atoms) or _pl_truth(f.right, true_atoms)
    raise TypeError(f"not a propositional formula: {f!r}")


def taut(f: Formula, atom_limit: int = DEFAULT_TAUT_ATOM_LIMIT) -> Verdict:
    """Classical tautology by truth table; witness is a falsifying valuation."""
    if not is_pl(f):
        raise ValueError(f"tautology check needs a propositional formula: {render_formula(f)}")
    names = sorted(atoms(f))
    if len(names) > atom_limit:
        raise AtomLimitError(f"{len(names)} atoms exceed the truth-table limit {atom_limit}")
    for bits in itertools.product((False, True), repeat=len(names)):
        val = frozenset(a for a, b in zip(names, bits) if b)
        if not _pl_truth(f, val):
            return Verdict(False, "brute-force", {"valuation": dict(zip(names, bits))})
    return Verdict(True, "brute-force")


def _require_el(f: Formula, who: str):
    for g in subformulas(f):
        if isinstance(g, (KnowHow, Box)):
            raise ValueError(f"{who} expects a K-only formula, found {render_formula(g)}")


def _valuation_world(val: frozenset[str], names: Sequence[str]) -> str:
    return "w{" + ",".join(n for n in names if n in val) + "}"


def _witness_from_valuations(designated: frozenset[str], others: list[frozenset[str]],
                             names: Sequence[str]) -> tuple[Model, str]:
    seen: dict[str, frozenset[str]] = {}
    order: list[str] = []
    for val in [designated] + others:
        wid = _valuation_world(val, names)
        if wid not in seen:
            seen[wid] = val
            order.append(wid)
    m = Model(tuple(order), seen)
    return m, _valuation_world(designated, names)


def _prune_pointed(m: Model, w: str, still_false) -> Model:
    """Greedily drop non-designated worlds while the verdict stays false."""
    worlds = list(m.worlds)
    for v in list(worlds):
        if v == w or len(worlds) == 1:
            continue
        candidate = restrict(m, [x for x in worlds if x != v])
        if still_false(candidate):
            worlds.remove(v)
            m = candidate
    return m


def s5_valid(f: Formula, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> Verdict:
    """Single-agent S5 validity via the normal-form clause criterion."""
    _require_el(f, "s5_valid")
    nf = s5_normal_form(f, clause_limit)
    names = sorted(atoms(f))
    for clause in nf.clauses:
        a0 = clause.khat_part if clause.khat_part is not None else BOT
        head = taut(Or(clause.plain, a0))
        if head.result:
            continue
        if any(taut(Or(a0, ai)).result for ai in clause.know_parts):
            continue
        designated = _valuation_of(head.witness, names)
        others = []
        for ai in clause.know_parts:
            side = taut(Or(a0, ai))
            others.append(_valuation_of(side.witness, names))
        m, w = _witness_from_valuations(designated, others, names)
        m = _prune_pointed(m, w, lambda mm: not satisfies(mm, w, f))
        return Verdict(False, "clause-criterion", {"model": m.to_doc(), "world": w})
    return Verdict(True, "clause-criterion")


def _valuation_of(witness: dict, names: Sequence[str]) -> frozenset[str]:
    val = witness["valuation"]
    return frozenset(n for n in names if val.get(n, False))


def enumerate_pointed_models(atom_names) -> Iterator[tuple[Model, str]]:
    """Every pointed model whose worlds are distinct valuations over the atoms.

    By locality and invariance under duplicate-valuation worlds, these
    exhaust the semantic possibilities for formulas over the given atoms.
    """
    names = sorted(set(atom_names))
    vals = [frozenset(c) for r in range(len(names) + 1)
            for c in itertools.combinations(names, r)]
    for mask in range(1, 1 << len(vals)):
        chosen = [vals[i] for i in range(len(vals)) if mask >> i & 1]
        worlds = tuple(_valuation_world(v, names) for v in chosen)
        m = Model(worlds, dict(zip(worlds, chosen)))
        for w in worlds:
            yield m, w


def s5_valid_bruteforce(f: Formula) -> Verdict:
    """Independent S5 oracle: exhaustive distinct-valuation pointed models."""
    _require_el(f, "s5_valid_bruteforce")
    names = sorted(atoms(f))
    if len(names) > 2:
        raise AtomLimitError(f"brute-force S5 oracle is limited to 2 atoms, got {len(names)}")
    for m, w in enumerate_pointed_models(names):
        if not satisfies(m, w, f):
            return Verdict(False, "brute-force", {"model": m.to_doc(), "world": w})
    return Verdict(True, "brute-force")


def inqb_member(f: Formula, atom_limit: int = DEFAULT_FULL_MODEL_ATOM_LIMIT,
                cap: int = DEFAULT_CAP,
                clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> Verdict:
    """Membership in the inquisitive logic: support by every state of every model.

    Decided on the full model over the occurring atoms and cross-checked
    against S5 validity of the RL translation; the two routes must agree.
    """
    if not is_pl(f):
        raise ValueError(f"membership is defined for propositional formulas: {render_formula(f)}")
    names = sorted(atoms(f))

    full_verdict = None
    if len(names) <= atom_limit:
        m = full_model(names)
        ok = supports(m, m.worlds, f)
        if ok:
            full_verdict = Verdict(True, "full-model")
        else:
            small = _prune_state_model(m, f)
            full_verdict = Verdict(False, "full-model", {
                "model": small.to_doc(), "state": list(small.worlds),
            })

    rl_verdict = None
    try:
        translated = rl_translation(f, cap)
        s5 = s5_valid(translated, clause_limit)
    except ResourceError:
        s5 = None
    if s5 is not None:
        if s5.result:
            rl_verdict = Verdict(True, "reduction")
        else:
            m = Model(**_doc_fields(s5.witness["model"]))
            if supports(m, m.worlds, f):
                raise InternalInconsistencyError(
                    f"RL countermodel for {render_formula(f)} re-checks as supporting"
                )
            rl_verdict = Verdict(False, "reduction", {
                "model": m.to_doc(), "state": list(m.worlds),
            })

    if full_verdict is None and rl_verdict is None:
        raise ResourceError(
            f"membership for {render_formula(f)}: both routes exceed their caps"
        )
    if full_verdict is not None and rl_verdict is not None \
            and full_verdict.result != rl_verdict.result:
        raise InternalInconsistencyError(
            f"membership routes disagree on {render_formula(f)}: "
            f"full-model={full_verdict.result}, reduction={rl_verdict.result}"
        )
    return full_verdict if full_verdict is not None else rl_verdict


def _doc_fields(doc: dict) -> dict:
    return {
        "worlds": tuple(doc["worlds"]),
        "valuation": {w: frozenset(v) for w, v in doc["valuation"].items()},
    }


def _prune_state_model(m: Model, f: Formula) -> Model:
    """Shrink a model whose trivial state fails to support f."""
    worlds = list(m.worlds)
    for v in list(worlds):
        if len(worlds) == 1:
            break
        rest = [x for x in worlds if x != v]
        candidate = restrict(m, rest)
        if not supports(candidate, candidate.worlds, f):
            worlds = rest
            m = candidate
    return m


def delkh_valid(f: Formula, cap: int = DEFAULT_CAP,
                clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> Verdict:
    """Validity for the full language: eliminate Kh and box, then decide in S5."""
    reduced = eliminate_box(eliminate_kh(f), clause_limit)
    verdict = s5_valid(reduced, clause_limit)
    if verdict.result:
        return Verdict(True, "reduction")
    m = Model(**_doc_fields(verdict.witness["model"]))
    w = verdict.witness["world"]
    if satisfies(m, w, f, cap):
        raise InternalInconsistencyError(
            f"countermodel for {render_formula(f)} re-checks as satisfying"
        )
    m = _prune_pointed(m, w, lambda mm: not satisfies(mm, w, f, cap))
    return Verdict(False, "reduction", {"model": m.to_doc(), "world": w})


def entails(gamma: Sequence[Formula], f: Formula, mode: str,
            atom_limit: int = DEFAULT_FULL_MODEL_ATOM_LIMIT,
            cap: int = DEFAULT_CAP,
            clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> Verdict:
    """Entailment from a finite set of propositional premises.

    mode "support": every supporting state of the full model over the
    combined atoms must support the conclusion.  mode "knowhow": validity
    of  Kh g1 & ... & Kh gn -> Kh f  via the reduction decider.  The two
    senses coincide.
    """
    gamma = list(gamma)
    for g in [*gamma, f]:
        if not is_pl(g):
            raise ValueError(f"entailment premises must be propositional: {render_formula(g)}")
    if mode == "support":
        names = sorted(set().union(atoms(f), *(atoms(g) for g in gamma)))
        if len(names) > atom_limit:
            raise AtomLimitError(
                f"support-mode entailment over {len(names)} atoms exceeds the limit {atom_limit}"
            )
        m = full_model(names)
        n_states = 1 << len(m.worlds)
        failing = ((1 << n_states) - 1) & ~support_bitset(m, f)
        for g in gamma:
            failing &= support_bitset(m, g)
        if failing == 0:
            return Verdict(True, "full-model")
        state_mask = (failing & -failing).bit_length() - 1  # lowest failing state; never empty
        state = [w for i, w in enumerate(m.worlds) if state_mask >> i & 1]
        small = restrict(m, state)
        small = _prune_gamma_model(small, gamma, f)
        return Verdict(False, "full-model", {
            "model": small.to_doc(), "state": list(small.worlds),
        })
    if mode == "knowhow":
        if gamma:
            body = Implies(conj([KnowHow(g) for g in gamma]), KnowHow(f))
        else:
            body = KnowHow(f)
        verdict = delkh_valid(body, cap, clause_limit)
        if verdict.result:
            return Verdict(True, "reduction")
        return Verdict(False, "reduction", verdict.witness)
    raise ValueError(f"unknown entailment mode {mode!r}")


def _prune_gamma_model(m: Model, gamma: Sequence[Formula], f: Formula) -> Model:
    def still_fails(mm: Model) -> bool:
        s = mm.worlds
        return all(supports(mm, s, g) for g in gamma) and not supports(mm, s, f)

    worlds = list(m.worlds)
    for v in list(worlds):
        if len(worlds) == 1:
            break
        rest = [x for x in worlds if x != v]
        candidate = restrict(m, rest)
        if still_fails(candidate):
            worlds = rest
            m = candidate
    return m
