"""scikit-learn style front end to the symmetric-point solver."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .actions import check_commuting
from .exceptions import DomainError, HypothesisError
from .homs import HomCandidate, candidates as enumerate_candidates
from .solver import (
    GAP_WARN_RATIO,
    NULLSPACE_TOL,
    solve_symmetric,
    stabilizer_algebra,
    trivial_solution_filter,
)


class SymmetricPointFinder(TransformerMixin, BaseEstimator):
    """Find the points whose gauge class is fixed by a symmetry group.

    ``fit`` checks that the two actions commute, enumerates candidate
    homomorphisms and solves the linear constraint for each. Afterwards the
    estimator behaves like a clustering model whose "centers" are the
    symmetric subspaces: ``transform`` gives distances to every subspace and
    ``predict`` names the subspace containing a point.

    Parameters
    ----------
    action_s, action_g : LinearAction
        Symmetry and gauge actions on the same space.
    strategy : dict, optional
        Candidate strategy passed to :func:`modfix.homs.candidates`. Ignored
        when ``candidates`` is given.
    candidates : list of HomCandidate, optional
        Explicit candidates.
    tol : float
        Relative rank cut for the nullspace.
    gap_ratio : float
        Rank decisions with discarded/kept ratio above this carry a warning.
    commute_trials : int
        Random group samples for the commuting check.
    random_state : int or None

    Attributes
    ----------
    commuting_report_ : CommutingReport
    candidates_ : list of HomCandidate
    subspaces_ : list of SymmetricSubspace
        One per candidate, in candidate order, trivial ones included.
    n_features_in_ : int
    """

    def __init__(self, action_s=None, action_g=None, strategy=None, candidates=None,
                 tol=NULLSPACE_TOL, gap_ratio=GAP_WARN_RATIO, commute_trials=8,
                 random_state=0):
        self.action_s = action_s
        self.action_g = action_g
        self.strategy = strategy
        self.candidates = candidates
        self.tol = tol
        self.gap_ratio = gap_ratio
        self.commute_trials = commute_trials
        self.random_state = random_state

    def fit(self, X=None, y=None):
        """Solve for every candidate. ``X`` and ``y`` are ignored."""
        if self.action_s is None or self.action_g is None:
            raise DomainError("both action_s and action_g are required")
        if not 0 < self.tol < 1:
            raise DomainError("tol must lie in (0, 1)")
        report = check_commuting(self.action_g, self.action_s, trials=self.commute_trials,
                                 rng=self.random_state)
        if not report.passed:
            raise HypothesisError(report)
        if self.candidates is not None:
            cands = list(self.candidates)
            if not all(isinstance(c, HomCandidate) for c in cands):
                raise DomainError("candidates must be HomCandidate instances")
        elif self.strategy is not None:
            cands = list(enumerate_candidates(self.action_s.algebra, self.action_g.algebra,
                                              self.strategy))
        else:
            raise DomainError("give either a strategy or explicit candidates")
        self.commuting_report_ = report
        self.candidates_ = cands
        self.subspaces_ = [
            trivial_solution_filter(
                solve_symmetric(self.action_s, self.action_g, c, self.tol, self.gap_ratio)
            )
            for c in cands
        ]
        self.n_features_in_ = self.action_s.space.dim_m
        return self

    @property
    def symmetric_subspaces_(self):
        """The subspaces with a nontrivial basis."""
        check_is_fitted(self, "subspaces_")
        return [s for s in self.subspaces_ if not s.is_trivial]

    def _points(self, X):
        check_is_fitted(self, "subspaces_")
        X = check_array(X, dtype=np.float64, ensure_2d=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, the space has {self.n_features_in_}"
            )
        return X

    def transform(self, X):
        """Distance from each row of ``X`` to each candidate's symmetric subspace.

        Returns
        -------
        ndarray, shape (n_samples, n_candidates)
        """
        X = self._points(X)
        out = np.empty((X.shape[0], len(self.subspaces_)))
        for k, sub in enumerate(self.subspaces_):
            out[:, k] = np.linalg.norm(X - X @ sub.projector, axis=1)
        return out

    def predict(self, X, atol=1e-8):
        """Index of the first candidate whose subspace contains the point, else -1.

        The zero point lies in every subspace and is labelled by the first
        candidate with a nontrivial subspace.
        """
        dist = self.transform(X)
        scale = np.maximum(1.0, np.linalg.norm(np.asarray(X, dtype=float), axis=1))[:, None]
        nontrivial = np.array([not s.is_trivial for s in self.subspaces_], dtype=bool)
        hit = (dist <= atol * scale) & nontrivial
        return np.where(hit.any(axis=1), hit.argmax(axis=1), -1)

    def project(self, X, index):
        """Orthogonal projection of the rows of ``X`` onto subspace ``index``."""
        X = self._points(X)
        return X @ self.subspaces_[index].projector

    def stabilizers(self, X):
        """Stabilizer subalgebra of each row of ``X``."""
        X = self._points(X)
        return [stabilizer_algebra(self.action_s, self.action_g, x, self.tol) for x in X]
