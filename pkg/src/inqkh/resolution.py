"""Resolution spaces S(α), per-world resolutions R(w,α), and uniform resolutions.

A resolution is a concrete way a propositional formula is made true:
atoms resolve to a fixed tag, disjunctions to a tagged resolution of one
disjunct, conjunctions to pairs, implications to total function tables
from antecedent resolutions to consequent resolutions.  Values are frozen
and hashable so resolution sets support intersection directly.

Function tables are stored as (key, value) entry lists in the canonical
enumeration order of the antecedent space, giving every set-theoretic
function a unique representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ResourceError
from .formula import And, Atom, Bottom, Formula, Implies, Or, is_pl, render_formula
from .model import Model

DEFAULT_CAP = 10 ** 6


class Resolution:
    __slots__ = ()


@dataclass(frozen=True)
class AtomRes(Resolution):
    name: str


@dataclass(frozen=True)
class BottomRes(Resolution):
    pass


@dataclass(frozen=True)
class Left(Resolution):
    value: Resolution


@dataclass(frozen=True)
class Right(Resolution):
    value: Resolution


@dataclass(frozen=True)
class Pair(Resolution):
    first: Resolution
    second: Resolution


@dataclass(frozen=True)
class FnTable(Resolution):
    entries: tuple[tuple[Resolution, Resolution], ...]

    def apply(self, key: Resolution) -> Resolution:
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)


BOTTOM_RES = BottomRes()


@dataclass(frozen=True)
class ResolutionSpace:
    """Canonical enumeration of S(α) for one propositional formula."""

    formula: Formula
    elements: tuple[Resolution, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def _require_pl(f: Formula):
    if not is_pl(f):
        raise ValueError(f"resolutions are defined for propositional formulas only: {render_formula(f)}")


def resolution_space_size(f: Formula) -> int:
    """|S(α)| by the size recurrence, exact big-integer arithmetic, no enumeration."""
    _require_pl(f)
    return _space_size(f, {})


def _space_size(f: Formula, memo: dict) -> int:
    if f in memo:
        return memo[f]
    if isinstance(f, (Atom, Bottom)):
        n = 1
    elif isinstance(f, Or):
        n = _space_size(f.left, memo) + _space_size(f.right, memo)
    elif isinstance(f, And):
        n = _space_size(f.left, memo) * _space_size(f.right, memo)
    elif isinstance(f, Implies):
        n = _space_size(f.right, memo) ** _space_size(f.left, memo)
    else:
        raise ValueError(f"not a propositional formula: {render_formula(f)}")
    memo[f] = n
    return n


def resolution_space(f: Formula, cap: int = DEFAULT_CAP) -> ResolutionSpace:
    """Enumerate S(α) in canonical order.

    Order: left tags before right tags for disjunction, lexicographic pairs
    for conjunction, and function tables lexicographic by the antecedent
    enumeration (first antecedent most significant).
    """
    _require_pl(f)
    return _space(f, cap, {})


def _space(f: Formula, cap: int, memo: dict) -> ResolutionSpace:
    if f in memo:
        return memo[f]
    size = _space_size(f, {})
    if size > cap:
        raise ResourceError(
            f"resolution space of {render_formula(f)} has {size} elements (cap {cap})"
        )
    if isinstance(f, Atom):
        elements: tuple[Resolution, ...] = (AtomRes(f.name),)
    elif isinstance(f, Bottom):
        elements = (BOTTOM_RES,)
    elif isinstance(f, Or):
        left = _space(f.left, cap, memo)
        right = _space(f.right, cap, memo)
        elements = tuple(Left(x) for x in left.elements) + tuple(Right(y) for y in right.elements)
    elif isinstance(f, And):
        left = _space(f.left, cap, memo)
        right = _space(f.right, cap, memo)
        elements = tuple(Pair(x, y) for x, y in itertools.product(left.elements, right.elements))
    else:
        dom = _space(f.left, cap, memo)
        cod = _space(f.right, cap, memo)
        if dom.size * size > 16 * cap:
            raise ResourceError(
                f"function tables for {render_formula(f)} need {dom.size * size} cells (cap {cap})"
            )
        elements = tuple(
            FnTable(tuple(zip(dom.elements, values)))
            for values in itertools.product(cod.elements, repeat=dom.size)
        )
    space = ResolutionSpace(f, elements)
    memo[f] = space
    return space


def resolutions_at(m: Model, w: str, f: Formula, cap: int = DEFAULT_CAP) -> frozenset[Resolution]:
    """R(w,α): the actual resolutions of α at world w; a subset of S(α)."""
    m.val(w)
    _require_pl(f)
    return _res_at(m.val(w), f, cap, {}, {})


def _res_at(val: frozenset[str], f: Formula, cap: int,
            space_memo: dict, res_memo: dict) -> frozenset[Resolution]:
    # depends only on the world's own valuation, so the memo keys on f alone
    if f in res_memo:
        return res_memo[f]
    if isinstance(f, Bottom):
        out: frozenset[Resolution] = frozenset()
    elif isinstance(f, Atom):
        out = frozenset({AtomRes(f.name)}) if f.name in val else frozenset()
    elif isinstance(f, Or):
        out = frozenset(itertools.chain(
            (Left(x) for x in _res_at(val, f.left, cap, space_memo, res_memo)),
            (Right(y) for y in _res_at(val, f.right, cap, space_memo, res_memo)),
        ))
    elif isinstance(f, And):
        out = frozenset(
            Pair(x, y)
            for x in _res_at(val, f.left, cap, space_memo, res_memo)
            for y in _res_at(val, f.right, cap, space_memo, res_memo)
        )
    else:
        # the literal defining clause: filter the full function space
        ra = _res_at(val, f.left, cap, space_memo, res_memo)
        rb = _res_at(val, f.right, cap, space_memo, res_memo)
        out = frozenset(
            fn for fn in _space(f, cap, space_memo).elements
            if all(v in rb for k, v in fn.entries if k in ra)
        )
    res_memo[f] = out
    return out


def uniform_resolutions(m: Model, s, f: Formula, cap: int = DEFAULT_CAP) -> frozenset[Resolution]:
    """R(U,α): resolutions shared by every world of a non-empty state."""
    state = m.state(s)
    if not state:
        raise ValueError("uniform resolutions need a non-empty state")
    worlds = [w for w in m.worlds if w in state]
    out = resolutions_at(m, worlds[0], f, cap)
    for w in worlds[1:]:
        if not out:
            break
        out = out & resolutions_at(m, w, f, cap)
    return out


def kh_holds(m: Model, f: Formula, cap: int = DEFAULT_CAP) -> bool:
    """Whether a uniform resolution over all worlds exists: R(M,α) != empty."""
    return bool(uniform_resolutions(m, m.worlds, f, cap))


def render_resolution(r: Resolution) -> str:
    if isinstance(r, AtomRes):
        return r.name
    if isinstance(r, BottomRes):
        return "bot"
    if isinstance(r, Left):
        return f"inl({render_resolution(r.value)})"
    if isinstance(r, Right):
        return f"inr({render_resolution(r.value)})"
    if isinstance(r, Pair):
        return f"({render_resolution(r.first)},{render_resolution(r.second)})"
    if isinstance(r, FnTable):
        inner = ", ".join(
            f"{render_resolution(k)}↦{render_resolution(v)}" for k, v in r.entries
        )
        return "{" + inner + "}"
    raise TypeError(f"not a resolution: {r!r}")
