"""Finite information/epistemic models and states.

Worlds carry string ids so counterexamples stay readable; enumeration is
bitmask-based over the declared world order, ascending, so every stream is
deterministic and restartable.  Models with more than MAX_ENUM_WORLDS
worlds refuse to enumerate states or submodels (typed resource error, never
silent truncation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import EmptyStateError, ModelError, ResourceError

State = frozenset[str]

MAX_ENUM_WORLDS = 16


@dataclass(frozen=True)
class Model:
    """Immutable model: ordered world ids plus an atom valuation per world."""

    worlds: tuple[str, ...]
    valuation: Mapping[str, frozenset[str]] = field(compare=True)

    def __post_init__(self):
        if not self.worlds:
            raise ModelError("a model needs a non-empty set of worlds")
        if len(set(self.worlds)) != len(self.worlds):
            dup = next(w for i, w in enumerate(self.worlds) if w in self.worlds[:i])
            raise ModelError(f"duplicate world id {dup!r}")
        extra = set(self.valuation) - set(self.worlds)
        if extra:
            raise ModelError(f"valuation references unknown world {sorted(extra)[0]!r}")
        # normalize: every world gets an entry, values become frozensets
        full = {w: frozenset(self.valuation.get(w, ())) for w in self.worlds}
        object.__setattr__(self, "valuation", full)

    def val(self, world: str) -> frozenset[str]:
        try:
            return self.valuation[world]
        except KeyError:
            raise ModelError(f"unknown world {world!r}") from None

    def state(self, worlds: Iterable[str] | None = None) -> State:
        """The trivial state by default, else a checked subset of the worlds."""
        if worlds is None:
            return frozenset(self.worlds)
        s = frozenset(worlds)
        bad = s - set(self.worlds)
        if bad:
            raise ModelError(f"state references unknown world {sorted(bad)[0]!r}")
        return s

    def to_doc(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "valuation": {w: sorted(self.valuation[w]) for w in self.worlds},
        }


def validate_model(doc: dict) -> Model:
    """Build a Model from a {"worlds": [...], "valuation": {...}} document."""
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    worlds = doc.get("worlds")
    valuation = doc.get("valuation", {})
    if not isinstance(worlds, list) or not all(isinstance(w, str) for w in worlds):
        raise ModelError('"worlds" must be a list of world ids')
    if not isinstance(valuation, dict):
        raise ModelError('"valuation" must map world ids to atom lists')
    val = {}
    for w, atoms_ in valuation.items():
        if not isinstance(atoms_, (list, tuple)) or not all(isinstance(a, str) for a in atoms_):
            raise ModelError(f"valuation for {w!r} must be a list of atom names")
        val[w] = frozenset(atoms_)
    return Model(tuple(worlds), val)


def full_model(atom_set: Iterable[str]) -> Model:
    """One world per subset of the atom set, tagged by its valuation.

    World ids encode the subset, e.g. "w{p,q}" and "w{}"; order is ascending
    bitmask over the sorted atom list.
    """
    names = sorted(set(atom_set))
    n = len(names)
    worlds = []
    val = {}
    for mask in range(2 ** n):
        subset = [names[i] for i in range(n) if mask >> i & 1]
        wid = "w{" + ",".join(subset) + "}"
        worlds.append(wid)
        val[wid] = frozenset(subset)
    return Model(tuple(worlds), val)


def restrict(m: Model, s: Iterable[str]) -> Model:
    """The induced submodel on a non-empty state."""
    keep = m.state(s)
    if not keep:
        raise EmptyStateError("the empty state does not induce a model")
    worlds = tuple(w for w in m.worlds if w in keep)
    return Model(worlds, {w: m.valuation[w] for w in worlds})


def _check_enum_size(m: Model):
    if len(m.worlds) > MAX_ENUM_WORLDS:
        raise ResourceError(
            f"enumeration over {len(m.worlds)} worlds exceeds the {MAX_ENUM_WORLDS}-world limit"
        )


def state_to_mask(m: Model, s: Iterable[str]) -> int:
    keep = m.state(s)
    return sum(1 << i for i, w in enumerate(m.worlds) if w in keep)


def mask_to_state(m: Model, mask: int) -> State:
    return frozenset(w for i, w in enumerate(m.worlds) if mask >> i & 1)


def submodels_containing(m: Model, w: str) -> Iterator[Model]:
    """Every induced submodel whose world set contains w, ascending bitmask."""
    if w not in m.valuation:
        raise ModelError(f"unknown world {w!r}")
    _check_enum_size(m)
    others = [x for x in m.worlds if x != w]
    for mask in range(2 ** len(others)):
        keep = {w} | {others[i] for i in range(len(others)) if mask >> i & 1}
        yield restrict(m, keep)


def nonempty_states(m: Model) -> Iterator[State]:
    """All non-empty states, ascending bitmask over the declared world order."""
    _check_enum_size(m)
    for mask in range(1, 2 ** len(m.worlds)):
        yield mask_to_state(m, mask)
