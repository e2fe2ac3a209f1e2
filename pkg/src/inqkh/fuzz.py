"""Cross-semantics fuzz harness.

Each trial draws a random model, a random propositional formula and a
random non-empty state, then evaluates the same question along every
route: the support relation, Kh over the restricted model through the
resolution engine, the non-empty intersection of per-world resolutions,
the RL translation, and the fully reduced K-only formula.  The routes are
provably equivalent, so any disagreement is a bug; disagreeing trials are
delta-debugged down to a minimal (model, state, formula) triple.

Runs are reproducible: the report is a pure function of (seed, config).
Random generation weights implications down and bounds their nesting,
since resolution spaces grow as a tower of exponentials under implication.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .formula import (
    And, Atom, Bottom, Box, Formula, Implies, Know, KnowHow, Or,
    BOT, children, is_pl, render_formula,
)
from .model import Model, restrict
from .resolution import DEFAULT_CAP, uniform_resolutions
from .semantics import satisfies, supports, valid_on_model
from .transform import eliminate_box, eliminate_kh, rl_translation

ROUTES = ("support", "resolution", "uniform", "rl", "reduced")

_LIMITS = {"max_worlds": 5, "max_atoms": 3, "max_depth": 4, "max_imp_nesting": 2}
_ATOM_POOL = ("p", "q", "r")


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 100
    max_worlds: int = 4
    max_atoms: int = 3
    max_depth: int = 4
    max_imp_nesting: int = 2
    routes: tuple[str, ...] = ROUTES
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        for name, cap in _LIMITS.items():
            value = getattr(self, name)
            if not 1 <= value <= cap:
                raise ValueError(f"{name} must be between 1 and {cap}, got {value}")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        unknown = set(self.routes) - set(ROUTES)
        if unknown:
            raise ValueError(f"unknown routes {sorted(unknown)}")
        if len(self.routes) < 2:
            raise ValueError("need at least two routes to compare")

    def to_doc(self) -> dict:
        return {
            "seed": self.seed, "trials": self.trials,
            "max_worlds": self.max_worlds, "max_atoms": self.max_atoms,
            "max_depth": self.max_depth, "max_imp_nesting": self.max_imp_nesting,
            "routes": list(self.routes), "cap": self.cap,
        }


@dataclass(frozen=True)
class FuzzReport:
    config: FuzzConfig
    trials: int
    discrepancies: tuple[dict, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_doc(self) -> dict:
        return {
            "config": self.config.to_doc(),
            "trials": self.trials,
            "ok": self.ok,
            "discrepancies": list(self.discrepancies),
        }


def random_model(rng: random.Random, max_worlds: int, atom_names) -> Model:
    n = rng.randint(1, max_worlds)
    worlds = tuple(f"w{i}" for i in range(1, n + 1))
    val = {w: frozenset(a for a in atom_names if rng.random() < 0.5) for w in worlds}
    return Model(worlds, val)


def random_state(rng: random.Random, m: Model) -> frozenset[str]:
    mask = rng.randint(1, (1 << len(m.worlds)) - 1)
    return frozenset(w for i, w in enumerate(m.worlds) if mask >> i & 1)


def random_pl(rng: random.Random, atom_names, max_depth: int,
              max_imp_nesting: int) -> Formula:
    atom_names = list(atom_names)

    def go(depth: int, imp_budget: int) -> Formula:
        if depth <= 0:
            return BOT if rng.random() < 0.12 else Atom(rng.choice(atom_names))
        kinds = ["atom", "atom", "or", "or", "or", "and", "and", "bot"]
        if imp_budget > 0:
            kinds += ["imp", "imp"]
        kind = rng.choice(kinds)
        if kind == "atom":
            return Atom(rng.choice(atom_names))
        if kind == "bot":
            return BOT
        if kind == "or":
            return Or(go(depth - 1, imp_budget), go(depth - 1, imp_budget))
        if kind == "and":
            return And(go(depth - 1, imp_budget), go(depth - 1, imp_budget))
        return Implies(go(depth - 1, imp_budget - 1), go(depth - 1, imp_budget - 1))

    return go(rng.randint(1, max_depth), max_imp_nesting)


def random_delkh(rng: random.Random, atom_names, max_depth: int = 3,
                 max_modal_depth: int = 3) -> Formula:
    """Random full-language formula; Kh arguments are small PL formulas."""
    atom_names = list(atom_names)

    def go(depth: int, modal: int) -> Formula:
        if depth <= 0:
            return BOT if rng.random() < 0.1 else Atom(rng.choice(atom_names))
        kinds = ["atom", "or", "and", "imp", "imp"]
        if modal > 0:
            kinds += ["know", "box", "kh", "kh"]
        kind = rng.choice(kinds)
        if kind == "atom":
            return Atom(rng.choice(atom_names))
        if kind == "or":
            return Or(go(depth - 1, modal), go(depth - 1, modal))
        if kind == "and":
            return And(go(depth - 1, modal), go(depth - 1, modal))
        if kind == "imp":
            return Implies(go(depth - 1, modal), go(depth - 1, modal))
        if kind == "know":
            return Know(go(depth - 1, modal - 1))
        if kind == "box":
            return Box(go(depth - 1, modal - 1))
        return KnowHow(random_pl(rng, atom_names, min(depth, 2), 1))

    return go(max_depth, max_modal_depth)


def evaluate_routes(m: Model, state, alpha: Formula, routes=ROUTES,
                    cap: int = DEFAULT_CAP) -> dict[str, bool]:
    """The same support question along each requested route."""
    sub = restrict(m, state)
    w0 = sub.worlds[0]
    out = {}
    if "support" in routes:
        out["support"] = supports(m, state, alpha)
    if "resolution" in routes:
        out["resolution"] = satisfies(sub, w0, KnowHow(alpha), cap, kh_route="resolution")
    if "uniform" in routes:
        out["uniform"] = bool(uniform_resolutions(m, state, alpha, cap))
    if "rl" in routes:
        out["rl"] = valid_on_model(sub, rl_translation(alpha, cap))
    if "reduced" in routes:
        reduced = eliminate_box(eliminate_kh(KnowHow(alpha)))
        out["reduced"] = all(satisfies(sub, w, reduced, cap) for w in sub.worlds)
    return out


def _discrepant(m: Model, state, alpha: Formula, routes, cap: int) -> Optional[dict]:
    values = evaluate_routes(m, state, alpha, routes, cap)
    return values if len(set(values.values())) > 1 else None


def shrink(m: Model, state, alpha: Formula, routes=ROUTES,
           cap: int = DEFAULT_CAP) -> tuple[Model, frozenset[str], Formula]:
    """Greedy delta-debugging: smaller triples that still disagree."""
    state = frozenset(state)
    changed = True
    while changed:
        changed = False
        for m2, s2, a2 in _shrink_candidates(m, state, alpha):
            if _discrepant(m2, s2, a2, routes, cap) is not None:
                m, state, alpha = m2, s2, a2
                changed = True
                break
    return m, state, alpha


def _shrink_candidates(m: Model, state: frozenset[str], alpha: Formula):
    for w in m.worlds:
        if len(m.worlds) > 1 and state - {w}:
            smaller = restrict(m, [x for x in m.worlds if x != w])
            yield smaller, state - {w}, alpha
    for w in sorted(state):
        if len(state) > 1:
            yield m, state - {w}, alpha
    for child in children(alpha):
        yield m, state, child
    if not isinstance(alpha, (Atom, Bottom)):
        yield m, state, BOT


def fuzz_equivalence(cfg: FuzzConfig) -> FuzzReport:
    """Run the seeded trials; any disagreement is shrunk and reported."""
    rng = random.Random(cfg.seed)
    discrepancies = []
    for trial in range(cfg.trials):
        trial_rng = random.Random(rng.getrandbits(64))
        names = _ATOM_POOL[: cfg.max_atoms]
        m = random_model(trial_rng, cfg.max_worlds, names)
        alpha = random_pl(trial_rng, names, cfg.max_depth, cfg.max_imp_nesting)
        state = random_state(trial_rng, m)
        values = _discrepant(m, state, alpha, cfg.routes, cfg.cap)
        if values is None:
            continue
        sm, ss, sa = shrink(m, state, alpha, cfg.routes, cfg.cap)
        discrepancies.append({
            "trial": trial,
            "routes": _discrepant(sm, ss, sa, cfg.routes, cfg.cap),
            "model": sm.to_doc(),
            "state": sorted(ss),
            "formula": render_formula(sa),
            "original_formula": render_formula(alpha),
        })
    return FuzzReport(cfg, cfg.trials, tuple(discrepancies))
