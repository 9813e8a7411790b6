"""Dense linear algebra kernels: matrix exponential, realification, nullspaces."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])
"""Realified multiplication by i on a single complex coordinate."""

_EPS = np.finfo(float).eps


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def matrix_exp(m, tol: float = 1e-13) -> np.ndarray:
    """Exponential of a real square matrix by scaling and squaring.

    The matrix is scaled by ``2**-s`` so its 1-norm is at most 1/2, the
    exponential of the scaled matrix is summed as a Taylor series until the
    tail bound drops below ``tol * 2**-s``, and the result is squared ``s``
    times.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Real matrix with finite entries.
    tol : float
        Target bound on ``||result - exp(m)|| / exp(||m||)``. Values below
        machine precision are accepted but cannot be met exactly.

    Returns
    -------
    ndarray, shape (n, n)
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    m = _as_square(m)
    n = m.shape[0]
    norm = np.linalg.norm(m, 1)
    if norm == 0.0:
        return np.eye(n)
    s = max(0, int(math.ceil(math.log2(norm / 0.5))))
    a = m / 2.0**s
    a_norm = norm / 2.0**s
    # tail of the series after order k is bounded by a_norm**(k+1)/(k+1)! * 2
    target = max(tol / 2.0**s, _EPS / 4)
    result = np.eye(n)
    term = np.eye(n)
    bound = a_norm
    k = 0
    while True:
        k += 1
        term = term @ a / k
        result = result + term
        bound = bound * a_norm / (k + 1)
        if 2.0 * bound <= target or k >= 40:
            break
    for _ in range(s):
        result = result @ result
    return result


def realify(z) -> np.ndarray:
    """Real form of a complex matrix, entry ``a+bi`` becoming ``[[a,-b],[b,a]]``.

    Works on stacks: the last two axes are realified.
    """
    z = np.asarray(z, dtype=complex)
    *lead, p, q = z.shape
    out = np.empty((*lead, p, 2, q, 2))
    out[..., :, 0, :, 0] = z.real
    out[..., :, 0, :, 1] = -z.imag
    out[..., :, 1, :, 0] = z.imag
    out[..., :, 1, :, 1] = z.real
    return out.reshape(*lead, 2 * p, 2 * q)


def complexify(r) -> np.ndarray:
    """Inverse of :func:`realify` (reads the first column of each 2x2 block)."""
    r = np.asarray(r, dtype=float)
    if r.shape[-1] % 2 or r.shape[-2] % 2:
        raise DomainError(f"realified matrix needs even shape, got {r.shape}")
    return r[..., 0::2, 0::2] + 1j * r[..., 1::2, 0::2]


def is_complex_linear(r, atol: float = 1e-12) -> bool:
    """True when ``r`` commutes with the complex structure, i.e. is a realified complex matrix."""
    r = np.asarray(r, dtype=float)
    return bool(np.allclose(realify(complexify(r)), r, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class RankDecision:
    """Outcome of a numerical rank cut.

    ``rank_gap`` is the smallest kept singular value over the largest discarded
    one (``inf`` when nothing was discarded or the discarded values are 0).
    """

    rank: int
    singular_values: np.ndarray
    rank_gap: float
    threshold: float

    def ill_conditioned(self, max_ratio: float = 0.1) -> bool:
        return self.rank_gap < 1.0 / max_ratio


def rank_decision(singular_values, n: int, tol: float) -> RankDecision:
    """Cut a descending singular value list at its largest gap below ``tol * s_max``.

    ``singular_values`` is padded with zeros to length ``n``.
    """
    s = np.zeros(n)
    sv = np.asarray(singular_values, dtype=float)[:n]
    s[: sv.size] = sv
    if not 0 < tol < 1:
        raise DomainError("relative rank tolerance must lie in (0, 1)")
    smax = s[0] if n else 0.0
    if smax == 0.0:
        return RankDecision(0, s, math.inf, 0.0)
    threshold = tol * smax
    small = np.nonzero(s <= threshold)[0]
    if small.size == 0:
        return RankDecision(n, s, math.inf, threshold)
    # values at roundoff level count as zero when measuring gaps
    floor = 10 * n * _EPS * smax
    best_k, best_ratio = n, -1.0
    for k in small:
        ratio = s[k - 1] / max(s[k], floor)
        if ratio > best_ratio:
            best_k, best_ratio = int(k), ratio
    gap = math.inf if s[best_k] == 0.0 else s[best_k - 1] / s[best_k]
    return RankDecision(best_k, s, gap, threshold)


def nullspace(m, tol: float = 1e-8) -> tuple[np.ndarray, RankDecision]:
    """Orthonormal basis (as columns) of the numerical nullspace of ``m``.

    Parameters
    ----------
    m : array_like, shape (r, n)
    tol : float
        Relative singular value cut, see :func:`rank_decision`.

    Returns
    -------
    basis : ndarray, shape (n, k)
    decision : RankDecision
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise DomainError(f"expected a 2-d array, got shape {m.shape}")
    n = m.shape[1]
    if m.shape[0] == 0 or n == 0:
        return np.eye(n), RankDecision(0, np.zeros(n), math.inf, 0.0)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    decision = rank_decision(s, n, tol)
    return vh[decision.rank :].T.copy(), decision


def orthonormal_span(vectors, tol: float = 1e-10, atol: float = 0.0) -> np.ndarray:
    """Orthonormal basis (columns) for the column span of ``vectors``.

    Singular values at or below ``max(tol * s_max, atol)`` are dropped.
    """
    v = np.asarray(vectors, dtype=float)
    if v.size == 0:
        return np.zeros((v.shape[0], 0))
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((v.shape[0], 0))
    rank = int(np.sum(s > max(tol * s[0], atol)))
    return u[:, :rank].copy()


def projector(basis) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns."""
    b = np.asarray(basis, dtype=float)
    return b @ b.T
