"""Ordinal combinatorics and exact game determinacy on well-founded trees.

Subpackages by topic: ``ordinal`` (Cantor-normal-form arithmetic below
epsilon_0), ``btree`` (finite B-trees and the derivative calculus),
``families`` (the T and Gamma tree families with exact branch weights),
``derivation`` (derivation indices and Cantor-Bendixson closed forms),
``games`` (exact determinacy solver with the weighted functional payoff),
``cli`` (the ``ordgames`` command).
"""

from .btree import FiniteBTree, NodePath, path_from_text, path_to_text, verify_monotone_map
from .derivation import (
    INFINITY,
    DerivationSystem,
    cb_index,
    cb_stage,
    cb_step,
    derivation_index,
    dz_bound,
)
from .families import (
    GammaFamily,
    TFamily,
    TruncationBudget,
    budget_from_json,
    family_from_json,
    family_to_json,
    gamma_family,
    make_family,
    monotone_embedding,
    t_family,
)
from .games import (
    PAYOFF_SZLENK,
    GameSpec,
    ModelSpace,
    Strategy,
    brute_force_winner,
    build_szlenk_game,
    complete_substrategy,
    eval_payoff,
    extract_collections,
    solve,
    verify_strategy,
)
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    OrdinalError,
    compare,
    omega_mul,
    omega_pow,
    quot_rem_omega_pow,
    subtract_left,
)

__version__ = "0.1.0"
