"""Symmetric points of moduli problems via a linear representation criterion.

A point ``A`` of a space ``X`` acted on by a gauge group ``G`` and a symmetry
group ``S`` (commuting actions) has an ``S``-fixed class in ``X/G`` when some
homomorphism ``rho: Lie(S) -> Lie(G)`` makes ``x.A + rho(x).A = 0`` for every
``x``. modfix enumerates candidate ``rho``, solves the linear constraint and
checks each answer independently at group level.
"""

__version__ = "0.1.0"

from .actions import Block, LinearAction, SpaceX, build_action, check_commuting
from .catalog import builtin_algebra, catalog_keys, spin_irrep
from .estimator import SymmetricPointFinder
from .exceptions import (
    ActionConstructionError,
    DomainError,
    HypothesisError,
    ModfixError,
    NotInNormalizerError,
    SchemaError,
    UnsupportedSymmetryError,
)
from .homs import HomCandidate, candidates, enumerate_su2_to_un
from .lie import LieAlgebra, adjoint, bracket
from .linalg import matrix_exp
from .problem import parse_problem
from .pipeline import run_pipeline
from .solver import solve_symmetric, stabilizer_algebra, trivial_solution_filter
from .verify import check_components, orbit_membership, verify_exp_path, verify_fixed_point

__all__ = [
    "ActionConstructionError", "Block", "DomainError", "HomCandidate", "HypothesisError",
    "LieAlgebra", "LinearAction", "ModfixError", "NotInNormalizerError", "SchemaError",
    "SpaceX", "SymmetricPointFinder", "UnsupportedSymmetryError", "adjoint", "bracket",
    "build_action", "builtin_algebra", "candidates", "catalog_keys", "check_commuting",
    "check_components", "enumerate_su2_to_un", "matrix_exp", "orbit_membership",
    "parse_problem", "run_pipeline", "solve_symmetric", "spin_irrep", "stabilizer_algebra",
    "trivial_solution_filter", "verify_exp_path", "verify_fixed_point",
]
