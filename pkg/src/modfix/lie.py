"""Real matrix Lie algebras given by a basis and stored structure constants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NotInNormalizerError

JACOBI_TOL = 1e-10
BRACKET_TOL = 1e-10
ROUNDTRIP_TOL = 1e-12
NORMALIZER_TOL = 1e-8


def commutator(a, b):
    return a @ b - b @ a


def structure_constants(basis) -> np.ndarray:
    """Structure constants ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``.

    Brackets are projected onto the basis with the trace inner product and
    the result is antisymmetrized so that ``c[i, j] == -c[j, i]`` exactly.
    """
    basis = np.asarray(basis, dtype=float)
    d = basis.shape[0]
    flat = basis.reshape(d, -1)
    gram = flat @ flat.T
    if d and np.linalg.matrix_rank(gram, tol=1e-12 * np.abs(gram).max()) < d:
        raise DomainError("basis elements are linearly dependent")
    br = basis[:, None] @ basis[None, :]
    br = br - br.transpose(1, 0, 2, 3)
    rhs = br.reshape(d * d, -1) @ flat.T
    c = np.linalg.solve(gram, rhs.T).T.reshape(d, d, d)
    return (c - c.transpose(1, 0, 2)) / 2


class LieAlgebra:
    """A finite-dimensional real Lie algebra of ``n x n`` matrices.

    Parameters
    ----------
    name : str
    basis : array_like, shape (d, n, n)
    structure : array_like, shape (d, d, d)
        Stored structure constants; validated, never recomputed.
    kind : str
        Catalog family (``"unitary"``, ``"special_unitary"``,
        ``"orthogonal"``, ``"torus"``, ``"line"``) or ``"custom"``.
    cartan : sequence of int, optional
        Basis indices spanning the designated maximal abelian subalgebra.
    compact : bool
        Whether the simply described group ``exp(algebra)`` is compact.
    tol : float
        Tolerance for the Jacobi identity and basis-bracket consistency.

    Raises
    ------
    DomainError
        If the basis is dependent, the constants are not antisymmetric, the
        Jacobi identity fails, or the matrix brackets disagree with the
        stored constants.
    """

    def __init__(self, name, basis, structure, kind="custom", cartan=None,
                 compact=True, tol=JACOBI_TOL):
        basis = np.array(basis, dtype=float)
        structure = np.array(structure, dtype=float)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2] or basis.shape[0] < 1:
            raise DomainError(f"basis must have shape (d, n, n), got {basis.shape}")
        d = basis.shape[0]
        if structure.shape != (d, d, d):
            raise DomainError(f"structure constants must have shape {(d, d, d)}")
        basis.setflags(write=False)
        structure.setflags(write=False)
        self.name = str(name)
        self.basis = basis
        self.structure = structure
        self.kind = kind
        self.cartan = tuple(int(i) for i in (range(d) if cartan is None else cartan))
        self.compact = bool(compact)
        flat = basis.reshape(d, -1)
        self._gram = flat @ flat.T
        evals = np.linalg.eigvalsh(self._gram)
        if evals[0] <= 1e-12 * max(evals[-1], 1.0):
            raise DomainError(f"{name}: basis is linearly dependent")
        self._flat = flat
        self.residuals = self._validate(tol)

    @classmethod
    def from_basis(cls, name, basis, **kwargs):
        """Build an algebra, computing its structure constants from ``basis``."""
        return cls(name, basis, structure_constants(basis), **kwargs)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_size(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim}, ambient_size={self.ambient_size})"

    def same_as(self, other) -> bool:
        return (
            self is other
            or (
                isinstance(other, LieAlgebra)
                and self.name == other.name
                and self.basis.shape == other.basis.shape
                and np.array_equal(self.basis, other.basis)
            )
        )

    def _validate(self, tol):
        c = self.structure
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            raise DomainError(f"{self.name}: structure constants are not antisymmetric")
        d = self.dim
        jacobi = 0.0
        # sum over cyclic (i, j, k) of [e_i, [e_j, e_k]], one i at a time to bound memory
        for i in range(d):
            t1 = c @ c[i]
            t2 = np.matmul(c[:, i, :], c)
            t3 = np.tensordot(c[i], c, axes=([1], [1]))
            jacobi = max(jacobi, float(np.abs(t1 + t2 + t3).max()))
        if jacobi > tol:
            raise DomainError(f"{self.name}: Jacobi identity violated by {jacobi:.3e}")
        br = self.basis[:, None] @ self.basis[None, :]
        br = br - br.transpose(1, 0, 2, 3)
        expected = np.einsum("ijk,kab->ijab", c, self.basis)
        consistency = float(np.abs(br - expected).max())
        if consistency > tol:
            raise DomainError(
                f"{self.name}: matrix brackets disagree with structure constants by {consistency:.3e}"
            )
        return {"jacobi": jacobi, "bracket_consistency": consistency}

    # coordinates

    def matrix(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise DomainError(f"{self.name}: expected {self.dim} coordinates, got {coords.shape}")
        return np.tensordot(coords, self.basis, axes=1)

    def coords_of(self, m) -> tuple[np.ndarray, float]:
        """Least-squares coordinates of ``m`` and the entrywise distance to the span."""
        m = np.asarray(m, dtype=float)
        if m.shape != (self.ambient_size, self.ambient_size):
            raise DomainError(f"{self.name}: expected a {self.ambient_size}-square matrix")
        coords = np.linalg.solve(self._gram, self._flat @ m.ravel())
        resid = float(np.abs(self.matrix(coords) - m).max())
        return coords, resid

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, np.asarray(coords, dtype=float))

    def from_matrix(self, m, atol: float = NORMALIZER_TOL) -> "AlgebraElement":
        coords, resid = self.coords_of(m)
        if resid > atol * max(1.0, float(np.abs(m).max())):
            raise DomainError(f"matrix is not in {self.name} (off by {resid:.3e})")
        return AlgebraElement(self, coords)

    def basis_element(self, i: int) -> "AlgebraElement":
        coords = np.zeros(self.dim)
        coords[i] = 1.0
        return AlgebraElement(self, coords)

    def ad(self, coords) -> np.ndarray:
        """Matrix of ``ad_y`` in the basis: column ``k`` holds the coordinates of ``[y, e_k]``."""
        coords = np.asarray(coords, dtype=float)
        return np.einsum("j,jki->ik", coords, self.structure)

    def is_abelian(self, atol: float = 0.0) -> bool:
        return bool(np.abs(self.structure).max(initial=0.0) <= atol)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of a :class:`LieAlgebra` stored by its coordinates."""

    algebra: LieAlgebra
    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.shape != (self.algebra.dim,):
            raise DomainError(
                f"{self.algebra.name}: expected {self.algebra.dim} coordinates, got {coords.shape}"
            )
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def matrix(self) -> np.ndarray:
        return self.algebra.matrix(self.coords)

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or not self.algebra.same_as(other.algebra):
            raise DomainError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, self.coords - other.coords)

    def __mul__(self, scalar):
        return AlgebraElement(self.algebra, float(scalar) * self.coords)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coords)

    def allclose(self, other, atol=1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"AlgebraElement({self.algebra.name}, {np.array2string(self.coords, precision=6)})"


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Lie bracket computed from the stored structure constants."""
    a._check(b)
    c = np.einsum("i,j,ijk->k", a.coords, b.coords, a.algebra.structure)
    return AlgebraElement(a.algebra, c)


def _inverse(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {g.shape}")
    if not np.all(np.isfinite(g)) or np.linalg.cond(g) > 1e12:
        raise DomainError("group element is singular")
    return np.linalg.inv(g)


def adjoint_matrix(algebra: LieAlgebra, g, atol: float = NORMALIZER_TOL) -> np.ndarray:
    """Coordinate matrix of ``Ad_g`` on ``algebra``; column ``j`` is ``Ad_g(e_j)``.

    Raises
    ------
    NotInNormalizerError
        If some ``g e_j g^-1`` leaves the span of the basis by more than ``atol``.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (algebra.ambient_size,) * 2:
        raise DomainError(f"group element must be {algebra.ambient_size}-square for {algebra.name}")
    ginv = _inverse(g)
    cols = []
    for e in algebra.basis:
        conj = g @ e @ ginv
        coords, resid = algebra.coords_of(conj)
        if resid > atol * max(1.0, float(np.abs(conj).max())):
            raise NotInNormalizerError(
                f"conjugate of a basis element leaves {algebra.name} by {resid:.3e}"
            )
        cols.append(coords)
    return np.column_stack(cols)


def adjoint(g, a: AlgebraElement, atol: float = NORMALIZER_TOL) -> AlgebraElement:
    """``Ad_g(a) = g a g^-1`` in coordinates."""
    g = np.asarray(g, dtype=float)
    if g.shape != (a.algebra.ambient_size,) * 2:
        raise DomainError(f"group element must be {a.algebra.ambient_size}-square")
    conj = g @ a.matrix @ _inverse(g)
    coords, resid = a.algebra.coords_of(conj)
    if resid > atol * max(1.0, float(np.abs(conj).max())):
        raise NotInNormalizerError(f"Ad_g(a) leaves {a.algebra.name} by {resid:.3e}")
    return AlgebraElement(a.algebra, coords)
