"""Propositional inquisitive logic as an epistemic logic of knowing how.

Formulas of plain propositional logic are evaluated over information
states by the support relation; the same questions are answered over
single-agent S5 epistemic models through a knowing-how modality whose
truth asks for a uniform resolution, through a translation into plain
epistemic logic, and through modality-elimination rewriting.  The routes
are equivalent and the package keeps them all, checked against each
other.  A Hilbert-style derivation checker covers the SDELKh axiom
system.
"""

from .errors import (
    AtomLimitError, EmptyStateError, InqkhError, InternalInconsistencyError,
    KhScopeError, ModelError, ParseError, ResourceError,
)
from .formula import (
    And, Atom, AtomVar, Bottom, Box, Formula, FormulaVar, Implies, Know,
    KnowHow, Or, PLVar, BOT, TOP, atoms, conj, diamond, disj, iff, is_pl,
    khat, match_schema, neg, parse_formula, render_formula, substitute,
)
from .model import (
    MAX_ENUM_WORLDS, Model, State, full_model, nonempty_states, restrict,
    submodels_containing, validate_model,
)
from .resolution import (
    DEFAULT_CAP, AtomRes, BottomRes, FnTable, Left, Pair, Resolution,
    ResolutionSpace, Right, render_resolution, resolution_space,
    resolution_space_size, resolutions_at, uniform_resolutions,
)
from .semantics import (
    Classification, alternatives, classify, proposition, satisfies,
    supports, valid_on_model,
)
from .transform import (
    DEFAULT_CLAUSE_LIMIT, Clause, NormalForm, eliminate_box, eliminate_kh,
    rl, rl_translation, s5_normal_form,
)
from .decide import (
    Verdict, delkh_valid, entails, enumerate_pointed_models, inqb_member,
    s5_valid, s5_valid_bruteforce, taut,
)
from .proofs import (
    AXIOM_NAMES, Proof, ProofReport, check_proof, instantiate, parse_proof,
)
from .fuzz import FuzzConfig, FuzzReport, fuzz_equivalence

__all__ = [name for name in dir() if not name.startswith("_")]
