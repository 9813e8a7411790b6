"""Built-in algebras and the spin irreducible representations of su(2).

Basis conventions
-----------------
su(n)
    ``-(i/2) * lambda`` for the generalized Gell-Mann matrices ``lambda``,
    ordered pair by pair (``a < b``: symmetric then antisymmetric) followed
    by the diagonal ones. For ``n = 2`` this is ``e_k = -(i/2) sigma_k`` with
    ``[e_1, e_2] = e_3``.
u(n)
    The off-diagonal su(n) elements followed by ``i E_aa`` for each ``a``.
    The ``i E_aa`` span the designated Cartan subalgebra, so Cartan
    coordinates are integer weights ``diag(i w_1, ..., i w_n)``.
so(n)
    ``E_ba - E_ab`` for ``a < b``; for ``n = 2`` this is the rotation
    generator ``[[0, -1], [1, 0]]``.
torus(k)
    ``k`` copies of the realified ``i``, one per 2x2 diagonal block. ``u(1)``
    and ``circle`` are aliases of ``torus(1)``.
r
    The line, realized as ``[[0, 1], [0, 0]]`` so that ``exp(t e) =
    [[1, t], [0, 1]]`` records ``t`` exactly.

Complex matrices are stored realified (``a+bi -> [[a,-b],[b,a]]``), so u(n)
and su(n) live in ``2n x 2n`` real matrices.
"""

from __future__ import annotations

import functools
import re

import numpy as np

from .exceptions import DomainError
from .lie import LieAlgebra
from .linalg import realify

MAX_N = 8
MAX_TORUS = 4

_KEY = re.compile(r"^\s*(u|su|so|torus)\s*\(\s*(\d+)\s*\)\s*$")


def gell_mann(n: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices (Hermitian, traceless, ``tr(l_a l_b) = 2 delta_ab``)."""
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            sym = np.zeros((n, n), complex)
            sym[a, b] = sym[b, a] = 1
            anti = np.zeros((n, n), complex)
            anti[a, b] = -1j
            anti[b, a] = 1j
            mats += [sym, anti]
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return mats


def _special_unitary(n):
    gm = gell_mann(n)
    basis = [-0.5j * m for m in gm]
    n_off = n * (n - 1)
    cartan = list(range(n_off, len(basis)))
    return LieAlgebra.from_basis(
        f"su({n})", realify(np.array(basis)), kind="special_unitary", cartan=cartan
    )


def _unitary(n):
    if n == 1:
        return _torus(1, name="u(1)")
    gm = gell_mann(n)
    n_off = n * (n - 1)
    basis = [-0.5j * m for m in gm[:n_off]]
    for a in range(n):
        e = np.zeros((n, n), complex)
        e[a, a] = 1j
        basis.append(e)
    cartan = list(range(n_off, n_off + n))
    return LieAlgebra.from_basis(
        f"u({n})", realify(np.array(basis)), kind="unitary", cartan=cartan
    )


def _orthogonal(n):
    basis = []
    for a in range(n):
        for b in range(a + 1, n):
            e = np.zeros((n, n))
            e[b, a] = 1.0
            e[a, b] = -1.0
            basis.append(e)
    # commuting rotation planes (0,1), (2,3), ...
    index = {pair: i for i, pair in enumerate((a, b) for a in range(n) for b in range(a + 1, n))}
    cartan = [index[(2 * k, 2 * k + 1)] for k in range(n // 2)]
    return LieAlgebra.from_basis(f"so({n})", np.array(basis), kind="orthogonal", cartan=cartan)


def _torus(k, name=None):
    basis = np.zeros((k, 2 * k, 2 * k))
    for j in range(k):
        basis[j, 2 * j + 1, 2 * j] = 1.0
        basis[j, 2 * j, 2 * j + 1] = -1.0
    return LieAlgebra.from_basis(name or f"torus({k})", basis, kind="torus")


def _line():
    return LieAlgebra.from_basis("r", [[[0.0, 1.0], [0.0, 0.0]]], kind="line", compact=False)


def normalize_key(key: str) -> str:
    """Canonical catalog key; aliases ``circle``/``u(1)``/``torus(1)`` and ``line``/``r``."""
    k = str(key).strip().lower().replace(" ", "")
    if k in ("circle", "torus(1)", "u(1)"):
        return "u(1)" if k == "u(1)" else "torus(1)"
    if k in ("r", "line"):
        return "r"
    return k


@functools.lru_cache(maxsize=None)
def builtin_algebra(key: str) -> LieAlgebra:
    """Catalog algebra for ``key``.

    Parameters
    ----------
    key : str
        One of ``u(n)``, ``su(n)``, ``so(n)`` (``n <= 8``), ``torus(k)``
        (``k <= 4``), ``r``/``line`` or ``circle``.

    Raises
    ------
    DomainError
        For unknown keys or sizes outside the catalog.
    """
    k = normalize_key(key)
    if k == "r":
        return _line()
    m = _KEY.match(k)
    if not m:
        raise DomainError(f"unknown algebra key {key!r}")
    family, size = m.group(1), int(m.group(2))
    if family == "torus":
        if not 1 <= size <= MAX_TORUS:
            raise DomainError(f"torus rank must be between 1 and {MAX_TORUS}")
        return _torus(size)
    lo = {"u": 1, "su": 2, "so": 2}[family]
    if not lo <= size <= MAX_N:
        raise DomainError(f"{family}(n) needs {lo} <= n <= {MAX_N}")
    return {"u": _unitary, "su": _special_unitary, "so": _orthogonal}[family](size)


def catalog_keys() -> list[str]:
    keys = [f"u({n})" for n in range(1, MAX_N + 1)]
    keys += [f"su({n})" for n in range(2, MAX_N + 1)]
    keys += [f"so({n})" for n in range(2, MAX_N + 1)]
    keys += [f"torus({k})" for k in range(1, MAX_TORUS + 1)]
    return keys + ["r"]


def spin_matrices(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hermitian spin operators ``J_x, J_y, J_z`` of dimension ``two_j + 1``.

    Built from the ladder operator with ``<m+1|J_+|m> = sqrt(j(j+1) - m(m+1))``
    on the basis ``m = j, j-1, ..., -j``.
    """
    if two_j < 0 or int(two_j) != two_j:
        raise DomainError("two_j must be a non-negative integer")
    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    jplus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def spin_irrep(two_j: int) -> np.ndarray:
    """Images of the canonical su(2) basis under the spin ``two_j / 2`` irrep.

    Returns complex skew-Hermitian matrices ``-i J_k`` of shape
    ``(3, two_j + 1, two_j + 1)``; apply :func:`~modfix.linalg.realify` for
    the real ambient form. ``spin_irrep(1)`` is exactly ``-(i/2) sigma_k``.
    """
    return -1j * np.array(spin_matrices(two_j))
