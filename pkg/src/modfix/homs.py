"""Candidate Lie algebra homomorphisms from the symmetry algebra into the gauge algebra.

Sources are restricted to su(2), one-dimensional algebras (circle, line) and
tori. Homomorphisms su(2) -> u(n) are complete up to conjugacy (one per
partition of ``n``). For abelian sources only strategies are offered: a
continuous family cannot be exhausted, and every element of a compact
algebra is conjugate into a maximal abelian subalgebra, so the Cartan
strategies search there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.linalg import block_diag

from .catalog import builtin_algebra, spin_irrep
from .exceptions import DomainError, UnsupportedSymmetryError
from .lie import AlgebraElement, LieAlgebra, adjoint_matrix
from .linalg import realify

HOM_TOL = 1e-9


def homomorphism_residual(source: LieAlgebra, target: LieAlgebra, matrix) -> float:
    """``max |rho([x_i, x_j]) - [rho(x_i), rho(x_j)]|`` over source basis pairs, entrywise."""
    matrix = np.asarray(matrix, dtype=float)
    images = np.tensordot(matrix.T, target.basis, axes=1)
    worst = 0.0
    for i in range(source.dim):
        for j in range(i + 1, source.dim):
            lhs = np.tensordot(source.structure[i, j], images, axes=1)
            rhs = images[i] @ images[j] - images[j] @ images[i]
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


@dataclass(frozen=True, eq=False)
class HomCandidate:
    """A linear map ``rho: source -> target`` checked to preserve brackets.

    ``matrix[:, i]`` holds the target coordinates of ``rho(e_i)``. For a
    one-dimensional source the bracket condition is vacuous;
    ``checked_trivially`` records that.

    Raises
    ------
    DomainError
        If the bracket residual exceeds ``tol``.
    """

    source: LieAlgebra
    target: LieAlgebra
    matrix: np.ndarray
    label: str = "user"
    tol: float = HOM_TOL
    residual: float = field(init=False)
    checked_trivially: bool = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim == 1 and self.source.dim == 1:
            m = m[:, None]
        if m.shape != (self.target.dim, self.source.dim):
            raise DomainError(
                f"rho matrix must have shape {(self.target.dim, self.source.dim)}, got {m.shape}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        res = homomorphism_residual(self.source, self.target, m)
        object.__setattr__(self, "residual", res)
        object.__setattr__(self, "checked_trivially", self.source.dim == 1)
        if res > self.tol:
            raise DomainError(f"{self.label}: not a homomorphism (residual {res:.3e})")

    def __call__(self, x) -> AlgebraElement:
        coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=float)
        return AlgebraElement(self.target, self.matrix @ coords)

    def image(self, i: int) -> np.ndarray:
        """Ambient matrix of ``rho(e_i)``."""
        return self.target.matrix(self.matrix[:, i])

    def __repr__(self):
        return f"HomCandidate({self.label!r}, {self.source.name} -> {self.target.name})"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "source": self.source.name,
            "target": self.target.name,
            "matrix": self.matrix.tolist(),
            "homomorphism_residual": self.residual,
            "checked_trivially": self.checked_trivially,
        }


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def su2_rep_from_partition(parts) -> np.ndarray:
    """Complex images ``(3, n, n)`` of the su(2) basis for the direct sum of irreps of sizes ``parts``."""
    irreps = [spin_irrep(p - 1) for p in parts]
    return np.array([block_diag(*[r[k] for r in irreps]) for k in range(3)])


def enumerate_su2_to_un(n: int, tol: float = HOM_TOL) -> list[HomCandidate]:
    """One homomorphism su(2) -> u(n) per conjugacy class.

    Classes correspond to partitions of ``n`` (block sizes of the irreducible
    summands; parts equal to 1 are trivial summands, so ``(1, ..., 1)`` is
    the zero map).
    """
    if not 1 <= n <= 8:
        raise DomainError("enumerate_su2_to_un needs 1 <= n <= 8")
    source = builtin_algebra("su(2)")
    target = builtin_algebra(f"u({n})")
    out = []
    for parts in partitions(n):
        images = realify(su2_rep_from_partition(parts))
        cols = [target.from_matrix(m).coords for m in images]
        out.append(HomCandidate(source, target, np.column_stack(cols),
                                label=f"partition:{parts}", tol=tol))
    return out


def _grid(lo, hi, step):
    if step <= 0:
        raise DomainError("grid step must be positive")
    if hi < lo:
        raise DomainError("grid range must have lo <= hi")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(count)]


def _cartan(target, strategy):
    idx = strategy.get("cartan")
    idx = list(target.cartan) if idx is None else [int(i) for i in idx]
    for i in idx:
        if not 0 <= i < target.dim:
            raise DomainError(f"cartan index {i} out of range for {target.name}")
    return idx


def _ranges(strategy, count, key):
    r = strategy.get(key)
    if r is None:
        raise DomainError(f"strategy needs '{key}'")
    r = np.asarray(r, dtype=float)
    if r.shape == (2,):
        r = np.tile(r, (count, 1))
    if r.shape != (count, 2):
        raise DomainError(f"'{key}' needs one [lo, hi] pair or {count} of them")
    return r


def _onedim_columns(target: LieAlgebra, strategy: dict) -> Iterator[tuple[str, np.ndarray]]:
    if not isinstance(strategy, dict) or "kind" not in strategy:
        raise DomainError("strategy must be a dict with a 'kind'")
    kind = strategy["kind"]
    if kind == "user":
        elements = strategy.get("elements") or []
        if not elements:
            raise DomainError("user strategy needs a non-empty 'elements' list")
        for i, e in enumerate(elements):
            e = np.asarray(e, dtype=float)
            if e.shape != (target.dim,):
                raise DomainError(f"user element {i} needs {target.dim} coordinates")
            yield f"user[{i}]", e
    elif kind in ("cartan_grid", "integer_weights"):
        idx = _cartan(target, strategy)
        if not idx:
            raise DomainError("empty Cartan subalgebra")
        if kind == "cartan_grid":
            ranges = _ranges(strategy, len(idx), "ranges" if "ranges" in strategy else "range")
            step = float(strategy.get("step", 0))
            axes = [_grid(lo, hi, step) for lo, hi in ranges]
            tag = "cartan"
        else:
            ranges = _ranges(strategy, len(idx), "ranges" if "ranges" in strategy else "range")
            axes = [list(range(int(np.ceil(lo)), int(np.floor(hi)) + 1)) for lo, hi in ranges]
            tag = "weights"
        if any(len(a) == 0 for a in axes):
            raise DomainError("strategy produces no candidates")
        for combo in itertools.product(*axes):
            coords = np.zeros(target.dim)
            coords[idx] = combo
            shown = ",".join(f"{v:g}" for v in combo)
            yield f"{tag}:({shown})", coords
    else:
        raise DomainError(f"unknown strategy kind {kind!r}")


def onedim_candidates(source: LieAlgebra, target: LieAlgebra, strategy: dict,
                      tol: float = HOM_TOL) -> Iterator[HomCandidate]:
    """Stream of candidates ``rho`` for a one-dimensional source.

    Parameters
    ----------
    strategy : dict
        ``{"kind": "user", "elements": [coords, ...]}``,
        ``{"kind": "cartan_grid", "range(s)": ..., "step": s}`` or
        ``{"kind": "integer_weights", "range(s)": ...}``. Cartan strategies
        use ``target.cartan`` unless ``"cartan"`` lists basis indices.
    """
    if source.dim != 1:
        raise DomainError("onedim_candidates needs a one-dimensional source")
    for label, col in _onedim_columns(target, strategy):
        yield HomCandidate(source, target, col[:, None], label=label, tol=tol)


def torus_candidates(source: LieAlgebra, target: LieAlgebra, strategy: dict,
                     tol: float = HOM_TOL) -> Iterator[HomCandidate]:
    """Commuting k-tuples of one-dimensional candidates for a torus source."""
    columns = list(_onedim_columns(target, strategy))
    for combo in itertools.product(columns, repeat=source.dim):
        mat = np.column_stack([c for _, c in combo])
        label = "+".join(lbl for lbl, _ in combo)
        try:
            yield HomCandidate(source, target, mat, label=label, tol=tol)
        except DomainError:
            continue


def check_source(source: LieAlgebra) -> None:
    """Refuse symmetry algebras without a homomorphism enumeration.

    Raises
    ------
    UnsupportedSymmetryError
        For sources other than su(2), one-dimensional algebras and tori.
    """
    if source.name == "su(2)" or source.dim == 1 or source.kind == "torus":
        return
    raise UnsupportedSymmetryError(
        f"unsupported symmetry source {source.name}: only su(2), circle, line and tori "
        "have a homomorphism enumeration"
    )


def candidates(source: LieAlgebra, target: LieAlgebra, strategy: dict,
               tol: float = HOM_TOL) -> Iterator[HomCandidate]:
    """Dispatch to the enumeration appropriate for ``source``.

    The source is checked eagerly (see :func:`check_source`); candidates are
    produced lazily.
    """
    check_source(source)
    if not isinstance(strategy, dict) or "kind" not in strategy:
        raise DomainError("strategy must be a dict with a 'kind'")
    return _candidates(source, target, strategy, tol)


def _candidates(source, target, strategy, tol):
    kind = strategy["kind"]
    if source.name == "su(2)":
        if kind == "su2_partitions":
            if target.kind != "unitary" and target.name != "u(1)":
                raise DomainError(f"su2_partitions needs a u(n) target, not {target.name}")
            n = target.ambient_size // 2
            yield from enumerate_su2_to_un(n, tol=tol)
        elif kind == "user":
            for i, mat in enumerate(strategy.get("elements") or []):
                yield HomCandidate(source, target, mat, label=f"user[{i}]", tol=tol)
        else:
            raise DomainError("su(2) sources take 'su2_partitions' or 'user' strategies")
    elif source.dim == 1:
        yield from onedim_candidates(source, target, strategy, tol=tol)
    else:
        yield from torus_candidates(source, target, strategy, tol=tol)


def conjugate_candidate(rho: HomCandidate, g) -> HomCandidate:
    """``Ad_g o rho`` for ``g`` in the normalizer of the target algebra."""
    ad = adjoint_matrix(rho.target, g)
    out = ad @ rho.matrix
    return HomCandidate(rho.source, rho.target, out, label=f"{rho.label}^g",
                        tol=max(rho.tol, 10 * rho.residual))
