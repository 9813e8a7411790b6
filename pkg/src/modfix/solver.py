"""Symmetric subspaces and stabilizer subalgebras.

For a candidate ``rho`` the symmetric points form the common kernel of the
operators ``D_i = L_S(x_i) + L_G(rho(x_i))`` over a basis ``x_i`` of the
symmetry algebra. Stacking the ``D_i`` turns this into one nullspace problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .actions import LinearAction
from .exceptions import DomainError
from .homs import HomCandidate
from .linalg import nullspace, orthonormal_span

NULLSPACE_TOL = 1e-8
GAP_WARN_RATIO = 0.1
BRACKET_CLOSURE_TOL = 1e-7

TRIVIAL_NOTE = (
    "A = 0 satisfies the constraint for every candidate; it is reported "
    "separately and never counted in the basis."
)

IN_SCOPE_COMPACT = "compact G, compact connected S: the linear criterion characterizes fixed classes"
IN_SCOPE_ONEDIM = "one-dimensional connected S: the linear criterion characterizes fixed classes"
OUT_OF_SCOPE = (
    "outside theorem hypotheses; the one-dimensional criterion applies only when dim S = 1"
)


def hypotheses_label(act_s: LinearAction, act_g: LinearAction) -> str:
    """Which characterization (if any) backs a solve for these actions."""
    if act_s.algebra.dim == 1:
        return IN_SCOPE_ONEDIM
    if act_g.algebra.compact and act_s.algebra.compact:
        return IN_SCOPE_COMPACT
    return OUT_OF_SCOPE


def _check_pair(act_s, act_g, rho=None):
    if act_s.space != act_g.space:
        raise DomainError("symmetry and gauge actions live on different spaces")
    if rho is not None:
        if not rho.source.same_as(act_s.algebra):
            raise DomainError(f"rho has source {rho.source.name}, S acts through {act_s.algebra.name}")
        if not rho.target.same_as(act_g.algebra):
            raise DomainError(f"rho has target {rho.target.name}, G acts through {act_g.algebra.name}")


def constraint_operators(act_s: LinearAction, act_g: LinearAction, rho: HomCandidate) -> np.ndarray:
    """``D_i = L_S(x_i) + L_G(rho(x_i))`` stacked as an array ``(dim S, m, m)``."""
    _check_pair(act_s, act_g, rho)
    return act_s.operators + np.tensordot(rho.matrix.T, act_g.operators, axes=1)


@dataclass(frozen=True, eq=False)
class SymmetricSubspace:
    """Orthonormal basis (columns of ``basis``) of the points symmetric under ``rho``."""

    rho: HomCandidate
    basis: np.ndarray
    residual: float
    rank_gap: float
    singular_values: np.ndarray
    tol: float
    hypotheses: str
    warnings: tuple = ()
    annotations: tuple = ()

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def distance(self, a) -> float:
        a = np.asarray(a, dtype=float)
        return float(np.linalg.norm(a - self.projector @ a))

    def to_dict(self, include_basis: bool = True) -> dict:
        out = {
            "rho": self.rho.to_dict(),
            "dim": self.dim,
            "residual": self.residual,
            "rank_gap": None if math.isinf(self.rank_gap) else self.rank_gap,
            "tol": self.tol,
            "hypotheses": self.hypotheses,
            "warnings": list(self.warnings),
            "annotations": list(self.annotations),
        }
        if include_basis:
            out["basis"] = self.basis.T.tolist()
        return out


def solve_symmetric(act_s: LinearAction, act_g: LinearAction, rho: HomCandidate,
                    tol: float = NULLSPACE_TOL,
                    gap_ratio: float = GAP_WARN_RATIO) -> SymmetricSubspace:
    """Solve ``x.A + rho(x).A = 0`` for all ``x`` in the symmetry algebra.

    The ``dim S`` operators are stacked into a ``(dim S * m) x m`` matrix whose
    nullspace is read off an SVD. The rank cut sits at the largest gap among
    singular values below ``tol * s_max``; a warning is attached when the
    largest discarded value exceeds ``gap_ratio`` times the smallest kept one.
    The commuting hypothesis is the caller's responsibility (see
    :func:`~modfix.actions.check_commuting`).
    """
    ops = constraint_operators(act_s, act_g, rho)
    m = act_s.space.dim_m
    stacked = ops.reshape(-1, m)
    basis, decision = nullspace(stacked, tol)
    residual = 0.0
    for d in ops:
        if basis.shape[1]:
            residual = max(residual, float(np.linalg.norm(d @ basis, axis=0).max()))
    warnings = []
    if decision.ill_conditioned(gap_ratio):
        warnings.append(
            f"ill-conditioned rank decision: kept/discarded singular value ratio "
            f"{decision.rank_gap:.3e} is below {1 / gap_ratio:g}"
        )
    return SymmetricSubspace(
        rho=rho,
        basis=basis,
        residual=residual,
        rank_gap=decision.rank_gap,
        singular_values=decision.singular_values,
        tol=tol,
        hypotheses=hypotheses_label(act_s, act_g),
        warnings=tuple(warnings),
    )


def trivial_solution_filter(sub: SymmetricSubspace, threshold: float = 0.0) -> SymmetricSubspace:
    """Annotate that the zero point always solves the constraint.

    No basis direction is flagged or removed; ``threshold`` is accepted for a
    future flagging policy and currently unused.
    """
    notes = sub.annotations if TRIVIAL_NOTE in sub.annotations else sub.annotations + (TRIVIAL_NOTE,)
    return replace(sub, annotations=notes)


@dataclass(frozen=True, eq=False)
class StabilizerAlgebra:
    """Directions of the symmetry algebra whose motion of ``point`` a gauge motion undoes.

    ``basis`` columns are orthonormal symmetry-algebra coordinates;
    ``witnesses`` column ``k`` is the minimum-norm gauge element ``y`` with
    ``L_S(x_k) A + L_G(y) A = 0``.
    """

    point: np.ndarray
    basis: np.ndarray
    witnesses: np.ndarray
    witness_residual: float
    bracket_residual: float
    rank_gap: float
    tol: float = NULLSPACE_TOL
    closure_tol: float = BRACKET_CLOSURE_TOL

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def closed(self) -> bool:
        return self.bracket_residual <= self.closure_tol

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "basis": self.basis.T.tolist(),
            "witnesses": self.witnesses.T.tolist(),
            "witness_residual": self.witness_residual,
            "bracket_residual": self.bracket_residual,
            "bracket_closed": self.closed,
            "rank_gap": None if math.isinf(self.rank_gap) else self.rank_gap,
        }


def stabilizer_algebra(act_s: LinearAction, act_g: LinearAction, a,
                       tol: float = NULLSPACE_TOL,
                       closure_tol: float = BRACKET_CLOSURE_TOL) -> StabilizerAlgebra:
    """Stabilizer subalgebra of the class of ``a``.

    Builds ``M = [L_S(x_i) A | L_G(e_j) A]``, takes its nullspace, projects it
    onto the symmetry coordinates and orthonormalizes. Bracket closure of the
    result is measured, not enforced.
    """
    _check_pair(act_s, act_g)
    a = act_s.space.check_point(a)
    ds = act_s.algebra.dim
    b_s = np.column_stack([op @ a for op in act_s.operators])
    b_g = np.column_stack([op @ a for op in act_g.operators])
    null, decision = nullspace(np.hstack([b_s, b_g]), tol)
    # null vectors are unit length, so their symmetry parts are cut on an absolute scale
    basis = orthonormal_span(null[:ds], tol=tol, atol=tol)
    if b_g.any():
        witnesses = -np.linalg.lstsq(b_g, b_s @ basis, rcond=tol)[0]
    else:
        witnesses = np.zeros((act_g.algebra.dim, basis.shape[1]))
    if basis.shape[1]:
        wres = float(np.linalg.norm(b_s @ basis + b_g @ witnesses, axis=0).max())
    else:
        wres = 0.0
    proj = basis @ basis.T
    c = act_s.algebra.structure
    closure = 0.0
    for i in range(basis.shape[1]):
        for j in range(i + 1, basis.shape[1]):
            z = np.einsum("a,b,abk->k", basis[:, i], basis[:, j], c)
            closure = max(closure, float(np.linalg.norm(z - proj @ z)))
    return StabilizerAlgebra(a, basis, witnesses, wres, closure, decision.rank_gap, tol, closure_tol)
