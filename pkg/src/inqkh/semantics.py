"""Support over states and satisfaction over pointed models.

Support is evaluated with one bitset per subformula indexed by state
bitmask, i.e. a full memo over (subformula, state).  The implication
clause ("every substate that supports the antecedent supports the
consequent") becomes a superset-closure over violating substates, which
keeps 16-world models tractable.

Satisfaction follows the classical clauses; K quantifies over all worlds
of the current model, box over all submodels containing the current
world, and Kh asks for a uniform resolution.  Kh falls back to the
RL-translation route when the resolution space exceeds the cap; the two
routes are provably equivalent and a flag can force either one for
differential testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InternalInconsistencyError, ResourceError
from .formula import (
    And, Atom, Bottom, Box, Formula, Implies, Know, KnowHow, Or,
    diamond, is_pl, khat, neg, render_formula,
)
from .model import MAX_ENUM_WORLDS, Model, State, mask_to_state, state_to_mask
from .resolution import DEFAULT_CAP, resolutions_at
from . import transform


def _check_worlds(m: Model):
    if len(m.worlds) > MAX_ENUM_WORLDS:
        raise ResourceError(
            f"evaluation over {len(m.worlds)} worlds exceeds the {MAX_ENUM_WORLDS}-world limit"
        )


def _superset_closure(bits: int, n_worlds: int) -> int:
    """Close a set of state masks upward: add every superset of a member."""
    for b in range(n_worlds):
        stride = 1 << b
        absent = ~_bit_pattern(b, n_worlds)
        bits |= (bits & absent) << stride
    return bits


_PATTERN_CACHE: dict[tuple[int, int], int] = {}


def _bit_pattern(b: int, n_worlds: int) -> int:
    """Bitset of all state masks that contain world-bit b."""
    key = (b, n_worlds)
    if key not in _PATTERN_CACHE:
        block = ((1 << (1 << b)) - 1) << (1 << b)  # 2^b zeros then 2^b ones
        width = 1 << (b + 1)
        out = 0
        for i in range(1 << (n_worlds - b - 1)):
            out |= block << (i * width)
        _PATTERN_CACHE[key] = out
    return _PATTERN_CACHE[key]


def support_bitset(m: Model, f: Formula, stats: Optional[dict] = None) -> int:
    """Bitset over state masks: bit s is set iff state s supports f."""
    _check_worlds(m)
    if not is_pl(f):
        raise ValueError(f"support is defined for propositional formulas only: {render_formula(f)}")
    n = len(m.worlds)
    n_states = 1 << n
    full = (1 << n_states) - 1
    atom_masks = {}
    for i, w in enumerate(m.worlds):
        for a in m.valuation[w]:
            atom_masks[a] = atom_masks.get(a, 0) | (1 << i)
    table: dict[Formula, int] = {}
    hits = 0

    def go(g: Formula) -> int:
        nonlocal hits
        if g in table:
            hits += 1
            return table[g]
        if isinstance(g, Atom):
            am = atom_masks.get(g.name, 0)
            bits = 0
            sub = am
            while True:  # all submasks of am, i.e. states where g holds everywhere
                bits |= 1 << sub
                if sub == 0:
                    break
                sub = (sub - 1) & am
        elif isinstance(g, Bottom):
            bits = 1  # only the empty state
        elif isinstance(g, And):
            bits = go(g.left) & go(g.right)
        elif isinstance(g, Or):
            bits = go(g.left) | go(g.right)
        else:
            sl, sr = go(g.left), go(g.right)
            violators = sl & ~sr & full
            bits = full & ~_superset_closure(violators, n)
        table[g] = bits
        return bits

    out = go(f)
    if stats is not None:
        stats["subformulas"] = len(table)
        stats["states_visited"] = len(table) * n_states
        stats["cache_hits"] = hits
    return out


def supports(m: Model, s, f: Formula, stats: Optional[dict] = None) -> bool:
    """The support relation between a state of m and a propositional formula."""
    mask = state_to_mask(m, s)
    return bool(support_bitset(m, f, stats) >> mask & 1)


class _Evaluator:
    """Satisfaction over one base model; memoizes per (submodel, world, formula)."""

    def __init__(self, m: Model, cap: int, kh_route: str):
        if kh_route not in ("auto", "resolution", "rl"):
            raise ValueError(f"unknown Kh route {kh_route!r}")
        _check_worlds(m)
        self.model = m
        self.cap = cap
        self.kh_route = kh_route
        self.memo: dict = {}
        self.res_memo: dict = {}
        self.rl_memo: dict = {}

    def eval(self, worlds: tuple[str, ...], w: str, f: Formula) -> bool:
        key = (worlds, w, f)
        if key in self.memo:
            return self.memo[key]
        out = self._eval(worlds, w, f)
        self.memo[key] = out
        return out

    def _eval(self, worlds: tuple[str, ...], w: str, f: Formula) -> bool:
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Atom):
            return f.name in self.model.valuation[w]
        if isinstance(f, And):
            return self.eval(worlds, w, f.left) and self.eval(worlds, w, f.right)
        if isinstance(f, Or):
            return self.eval(worlds, w, f.left) or self.eval(worlds, w, f.right)
        if isinstance(f, Implies):
            return not self.eval(worlds, w, f.left) or self.eval(worlds, w, f.right)
        if isinstance(f, Know):
            return all(self.eval(worlds, v, f.sub) for v in worlds)
        if isinstance(f, Box):
            others = [v for v in worlds if v != w]
            for mask in range(1 << len(others)):
                keep = {w} | {others[i] for i in range(len(others)) if mask >> i & 1}
                sub = tuple(v for v in worlds if v in keep)
                if not self.eval(sub, w, f.sub):
                    return False
            return True
        if isinstance(f, KnowHow):
            return self._kh(worlds, f.sub)
        raise TypeError(f"cannot evaluate {f!r}")

    def _kh(self, worlds: tuple[str, ...], alpha: Formula) -> bool:
        if self.kh_route in ("auto", "resolution"):
            try:
                return self._kh_resolution(worlds, alpha)
            except ResourceError:
                if self.kh_route == "resolution":
                    raise
        return self._kh_rl(worlds, alpha)

    def _kh_resolution(self, worlds: tuple[str, ...], alpha: Formula) -> bool:
        shared = None
        for w in worlds:
            key = (w, alpha)
            if key not in self.res_memo:
                self.res_memo[key] = resolutions_at(self.model, w, alpha, self.cap)
            shared = self.res_memo[key] if shared is None else shared & self.res_memo[key]
            if not shared:
                return False
        return bool(shared)

    def _kh_rl(self, worlds: tuple[str, ...], alpha: Formula) -> bool:
        if alpha not in self.rl_memo:
            self.rl_memo[alpha] = transform.rl(alpha, self.cap)
        members = self.rl_memo[alpha]
        return any(
            all(self.eval(worlds, v, rho) for v in worlds) for rho in members
        )


def satisfies(m: Model, w: str, f: Formula, cap: int = DEFAULT_CAP,
              kh_route: str = "auto") -> bool:
    """Truth of a DELKh formula at a pointed model."""
    m.val(w)
    return _Evaluator(m, cap, kh_route).eval(m.worlds, w, f)


def valid_on_model(m: Model, f: Formula, cap: int = DEFAULT_CAP,
                   kh_route: str = "auto") -> bool:
    """Truth at every world of the model."""
    ev = _Evaluator(m, cap, kh_route)
    return all(ev.eval(m.worlds, w, f) for w in m.worlds)


def proposition(m: Model, f: Formula) -> list[State]:
    """All supporting states (including the empty one), ascending bitmask."""
    bits = support_bitset(m, f)
    n_states = 1 << len(m.worlds)
    return [mask_to_state(m, s) for s in range(n_states) if bits >> s & 1]


def alternatives(m: Model, f: Formula) -> list[State]:
    """The maximal supporting states, ascending bitmask.

    Support is persistent (downward closed), so maximality only needs the
    one-world extensions checked.
    """
    bits = support_bitset(m, f)
    n = len(m.worlds)
    out = []
    for s in range(1 << n):
        if not bits >> s & 1:
            continue
        if any(not s >> b & 1 and bits >> (s | 1 << b) & 1 for b in range(n)):
            continue
        out.append(mask_to_state(m, s))
    return out


@dataclass(frozen=True)
class Classification:
    informative: bool
    inquisitive: bool
    question: bool
    statement: bool
    alternatives: tuple[State, ...]
    uncovered_world: Optional[str]
    witness_submodel: Optional[State]


def classify(m: Model, f: Formula, cap: int = DEFAULT_CAP) -> Classification:
    """Classify a propositional formula on a model.

    Computes the flags twice, from the alternative-based definitions and
    from the epistemic characterizations (informative iff ~K f holds;
    inquisitive iff Khat <> (K f & ~Kh f) holds), and insists they agree.
    """
    alts = alternatives(m, f)
    covered = frozenset().union(*alts) if alts else frozenset()
    uncovered = next((w for w in m.worlds if w not in covered), None)
    informative_def = uncovered is not None
    inquisitive_def = len(alts) >= 2
    witness = frozenset(alts[0] | alts[1]) if inquisitive_def else None

    w0 = m.worlds[0]
    informative_epi = not satisfies(m, w0, Know(f), cap)
    inquisitive_epi = satisfies(m, w0, khat(diamond(And(Know(f), neg(KnowHow(f))))), cap)

    if informative_def != informative_epi:
        raise InternalInconsistencyError(
            f"informativeness routes disagree on {render_formula(f)}: "
            f"definitional={informative_def}, epistemic={informative_epi}"
        )
    if inquisitive_def != inquisitive_epi:
        raise InternalInconsistencyError(
            f"inquisitiveness routes disagree on {render_formula(f)}: "
            f"definitional={inquisitive_def}, epistemic={inquisitive_epi}"
        )
    return Classification(
        informative=informative_def,
        inquisitive=inquisitive_def,
        question=not informative_def,
        statement=not inquisitive_def,
        alternatives=tuple(alts),
        uncovered_world=uncovered,
        witness_submodel=witness,
    )
