"""Modality-elimination rewriting and the RL translation.

Three pipelines, all equivalence-preserving on every pointed model:

* eliminate_kh: rewrites Kh away using the reduction laws
  (Kh bot <-> bot, Kh p <-> K p, Kh over or/and distributes,
  Kh(a -> b) <-> K [](Kh a -> Kh b)), innermost first.
* s5_normal_form / eliminate_box: normalizes K-only formulas into a
  conjunction of modal-depth-one clauses  a | Khat a0 | K a1 | ... | K an,
  then eliminates box clause by clause (INV, KINV, hKINV, B-or, BK-or).
* rl / rl_translation: formula-level resolutions; Kh a is equivalent to
  the disjunction of K rho over rho in RL(a).

Rewrites optionally append provenance steps (axiom names per step) to a
caller-supplied trace list.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .errors import ResourceError
from .formula import (
    And, Atom, Bottom, Box, Formula, Implies, Know, KnowHow, Or,
    BOT, TOP, conj, disj, is_pl, khat as khat_sugar, neg, render_formula,
)

DEFAULT_CLAUSE_LIMIT = 4096
DEFAULT_RL_CAP = 10 ** 6

Trace = list


def _step(trace: Optional[Trace], axioms: list[str], before: Formula, after: Formula):
    if trace is not None:
        trace.append({
            "axioms": axioms,
            "before": render_formula(before),
            "after": render_formula(after),
        })


# --- Kh elimination -------------------------------------------------------

def eliminate_kh(f: Formula, trace: Optional[Trace] = None) -> Formula:
    """Rewrite every Kh away; the result is a DEL formula (K and box only)."""
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(eliminate_kh(f.left, trace), eliminate_kh(f.right, trace))
    if isinstance(f, (Know, Box)):
        return type(f)(eliminate_kh(f.sub, trace))
    if isinstance(f, KnowHow):
        return _kh_rewrite(f.sub, trace)
    raise TypeError(f"cannot rewrite {f!r}")


def _kh_rewrite(a: Formula, trace: Optional[Trace]) -> Formula:
    """Kh-free equivalent of Kh a; each step shrinks the Kh argument."""
    source = KnowHow(a)
    if isinstance(a, Atom):
        out: Formula = Know(a)
        _step(trace, ["KhK", "KKhp"], source, out)
    elif isinstance(a, Bottom):
        out = BOT
        _step(trace, ["Kh⊥"], source, out)
    elif isinstance(a, Or):
        out = Or(_kh_rewrite(a.left, trace), _kh_rewrite(a.right, trace))
        _step(trace, ["Kh∨"], source, out)
    elif isinstance(a, And):
        out = And(_kh_rewrite(a.left, trace), _kh_rewrite(a.right, trace))
        _step(trace, ["Kh∧"], source, out)
    elif isinstance(a, Implies):
        out = Know(Box(Implies(_kh_rewrite(a.left, trace), _kh_rewrite(a.right, trace))))
        _step(trace, ["Kh→"], source, out)
    else:
        raise TypeError(f"cannot rewrite {a!r}")
    return out


# --- S5 normal form -------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    """One disjunct block  plain | Khat khat_part | K k1 | ... | K kn.

    All parts are propositional; plain is BOT when the clause has no
    propositional disjunct, khat_part is None when it has no Khat disjunct.
    """

    plain: Formula
    khat_part: Optional[Formula]
    know_parts: tuple[Formula, ...]

    def to_formula(self) -> Formula:
        parts: list[Formula] = []
        if self.plain != BOT or (self.khat_part is None and not self.know_parts):
            parts.append(self.plain)
        if self.khat_part is not None:
            parts.append(khat_sugar(self.khat_part))
        parts.extend(Know(a) for a in self.know_parts)
        return disj(parts)


@dataclass(frozen=True)
class NormalForm:
    clauses: tuple[Clause, ...]

    def to_formula(self) -> Formula:
        return conj([c.to_formula() for c in self.clauses])


def _neg_simp(f: Formula) -> Formula:
    """Negation with double-negation collapse, keeping clause parts stable."""
    if isinstance(f, Implies) and f.right == BOT:
        return f.left
    return neg(f)


def _merge(c: Clause, d: Clause) -> Clause:
    if c.plain == BOT:
        plain = d.plain
    elif d.plain == BOT:
        plain = c.plain
    else:
        plain = Or(c.plain, d.plain)
    if c.khat_part is None:
        khat = d.khat_part
    elif d.khat_part is None:
        khat = c.khat_part
    else:
        khat = Or(c.khat_part, d.khat_part)  # Khat a | Khat b <-> Khat(a | b)
    know = tuple(dict.fromkeys(c.know_parts + d.know_parts))
    return Clause(plain, khat, know)


def _check_clause_count(n: int, limit: int, f: Formula):
    if n > limit:
        raise ResourceError(
            f"normal form of {render_formula(f)} needs {n} clauses (limit {limit})"
        )


def _merge_lists(xs: list[Clause], ys: list[Clause], limit: int, f: Formula) -> list[Clause]:
    _check_clause_count(len(xs) * len(ys), limit, f)
    return [_merge(c, d) for c in xs for d in ys]


def _negate_clause(c: Clause) -> list[Clause]:
    """The conjuncts of the negation of a clause, one singleton clause each."""
    parts: list[Clause] = []
    if c.plain != BOT:
        parts.append(Clause(_neg_simp(c.plain), None, ()))
    if c.khat_part is not None:
        parts.append(Clause(BOT, None, (_neg_simp(c.khat_part),)))
    for a in c.know_parts:
        parts.append(Clause(BOT, _neg_simp(a), ()))
    if not parts:
        parts.append(Clause(TOP, None, ()))  # negation of a bare-bot clause
    return parts


def _know_clause(c: Clause) -> Clause:
    """K applied to a clause: K(a | M) <-> M | K a  (modal parts are global)."""
    know = c.know_parts
    if c.plain != BOT or (c.khat_part is None and not know):
        know = tuple(dict.fromkeys(know + (c.plain,)))
    return Clause(BOT, c.khat_part, know)


def s5_normal_form(f: Formula, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> NormalForm:
    """Equivalent conjunction of modal-depth-one clauses for a K-only formula."""
    for bad, name in ((KnowHow, "Kh"), (Box, "box")):
        if any(isinstance(g, bad) for g in _walk(f)):
            raise ValueError(f"normal form input must not contain {name}: {render_formula(f)}")
    clauses = _nf(f, clause_limit)
    return NormalForm(tuple(dict.fromkeys(clauses)))


def _walk(f: Formula):
    yield f
    if isinstance(f, (And, Or, Implies)):
        yield from _walk(f.left)
        yield from _walk(f.right)
    elif isinstance(f, (Know, KnowHow, Box)):
        yield from _walk(f.sub)


def _nf(f: Formula, limit: int) -> list[Clause]:
    if isinstance(f, (Atom, Bottom)):
        return [Clause(f, None, ())]
    if isinstance(f, And):
        out = _nf(f.left, limit) + _nf(f.right, limit)
        _check_clause_count(len(out), limit, f)
        return out
    if isinstance(f, Or):
        return _merge_lists(_nf(f.left, limit), _nf(f.right, limit), limit, f)
    if isinstance(f, Implies):
        return _merge_lists(_nf_neg(f.left, limit), _nf(f.right, limit), limit, f)
    if isinstance(f, Know):
        return [_know_clause(c) for c in _nf(f.sub, limit)]
    raise TypeError(f"cannot normalize {f!r}")


def _nf_neg(f: Formula, limit: int) -> list[Clause]:
    """Normal form of the negation of f, via per-clause negation and distribution."""
    groups = [_negate_clause(c) for c in _nf(f, limit)]
    acc = [Clause(BOT, None, ())]
    for group in groups:
        acc = _merge_lists(acc, group, limit, f)
    return acc


# --- Box elimination ------------------------------------------------------

def eliminate_box(f: Formula, clause_limit: int = DEFAULT_CLAUSE_LIMIT,
                  trace: Optional[Trace] = None) -> Formula:
    """Rewrite every box away from a Kh-free formula; the result is in EL."""
    if any(isinstance(g, KnowHow) for g in _walk(f)):
        raise ValueError(f"box elimination expects a Kh-free formula: {render_formula(f)}")
    return _elim_box(f, clause_limit, trace)


def _elim_box(f: Formula, limit: int, trace: Optional[Trace]) -> Formula:
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_elim_box(f.left, limit, trace), _elim_box(f.right, limit, trace))
    if isinstance(f, Know):
        return Know(_elim_box(f.sub, limit, trace))
    if isinstance(f, Box):
        inner = _elim_box(f.sub, limit, trace)
        nf = s5_normal_form(inner, limit)
        rewritten = [_box_clause(c, trace) for c in nf.clauses]
        return conj(rewritten)
    raise TypeError(f"cannot rewrite {f!r}")


def _box_clause(c: Clause, trace: Optional[Trace]) -> Formula:
    """box applied to one clause, rewritten to an EL formula."""
    axioms: list[str] = []
    parts: list[Formula] = []
    has_plain = c.plain != BOT
    if c.khat_part is not None:
        if has_plain:
            axioms.append("B∨")
            parts.append(c.plain)
        axioms.append("BK∨" if c.know_parts else "hKINV")
        parts.append(c.khat_part)
        parts.extend(Know(Or(c.khat_part, a)) for a in c.know_parts)
    elif c.know_parts:
        if has_plain:
            axioms.append("B∨")
            parts.append(c.plain)
        axioms.append("KINV")
        parts.extend(Know(a) for a in c.know_parts)
    else:
        axioms.append("INV")
        parts.append(c.plain)
    out = disj(parts)
    _step(trace, axioms, Box(c.to_formula()), out)
    return out


# --- RL translation -------------------------------------------------------

def rl(f: Formula, cap: int = DEFAULT_RL_CAP) -> list[Formula]:
    """The formula-level resolutions RL(f), canonical order, all disjunction-free."""
    if not is_pl(f):
        raise ValueError(f"RL is defined for propositional formulas only: {render_formula(f)}")
    return _rl(f, cap, {})


def _rl(f: Formula, cap: int, memo: dict) -> list[Formula]:
    if f in memo:
        return memo[f]
    if isinstance(f, (Atom, Bottom)):
        out = [f]
    elif isinstance(f, Or):
        out = list(dict.fromkeys(_rl(f.left, cap, memo) + _rl(f.right, cap, memo)))
    elif isinstance(f, And):
        left, right = _rl(f.left, cap, memo), _rl(f.right, cap, memo)
        _check_rl_count(len(left) * len(right), cap, f)
        out = list(dict.fromkeys(And(r, s) for r in left for s in right))
    else:
        dom, cod = _rl(f.left, cap, memo), _rl(f.right, cap, memo)
        _check_rl_count(len(cod) ** len(dom), cap, f)
        out = list(dict.fromkeys(
            conj([Implies(rho, value) for rho, value in zip(dom, values)])
            for values in product(cod, repeat=len(dom))
        ))
    memo[f] = out
    return out


def _check_rl_count(n: int, cap: int, f: Formula):
    if n > cap:
        raise ResourceError(f"RL({render_formula(f)}) has {n} members (cap {cap})")


def rl_translation(f: Formula, cap: int = DEFAULT_RL_CAP) -> Formula:
    """The disjunction of K rho over RL(f); equivalent to Kh f on every model."""
    return disj([Know(rho) for rho in rl(f, cap)])
