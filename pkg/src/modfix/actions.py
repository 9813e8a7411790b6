"""Linear Lie group actions on block-structured vector spaces.

An action is described by a template, a small tree of dicts::

    {"op": "conjugate", "block": "Phi"}            # g A g^-1
    {"op": "left", "block": "v"}                   # g A
    {"op": "right_inverse", "block": "v"}          # A g^-1
    {"op": "weight", "block": "z", "weight": 2}    # chi_w(g) A, torus or line only
    {"op": "adjoint", "blocks": ["T1", "T2", "T3"]}  # mixes blocks by Ad_g
    {"op": "sum", "terms": [...]}                  # apply every term

Every primitive accepts ``"blocks": [...]`` to act simultaneously on several
blocks (except ``adjoint``, where the list is the mixed tuple). Blocks not
named by a template are left fixed. Overlapping terms of a ``sum`` are
applied in order at the group level and added at the algebra level, so they
must commute; the representation check at construction rejects templates
where they do not.

Infinitesimal operators are derived per primitive, not by numerical
differentiation: conjugation gives ``yA - Ay``, left multiplication ``yA``,
right inverse multiplication ``-Ay``, a weight ``w`` gives ``<w, y> i A``.
Weights act on complex coordinates; on a real block the coordinates are
read as consecutive (Re, Im) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ActionConstructionError, DomainError
from .lie import AlgebraElement, LieAlgebra, _inverse, adjoint_matrix
from .linalg import J2, complexify, is_complex_linear, matrix_exp, realify

REP_TOL = 1e-9
GROUP_COMMUTE_TOL = 1e-8
ALGEBRA_COMMUTE_TOL = 1e-9


@dataclass(frozen=True)
class Block:
    """A ``rows x cols`` matrix block of real or complex entries.

    Complex blocks hold ``2 * rows * cols`` real coordinates, ``(Re, Im)``
    interleaved per entry in row-major order, and are acted on through their
    realified ``2rows x 2cols`` form.
    """

    name: str
    rows: int
    cols: int = 1
    field: str = "real"

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"block {self.name!r} must have positive shape")
        if self.field not in ("real", "complex"):
            raise DomainError(f"block {self.name!r}: field must be 'real' or 'complex'")

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    @property
    def size(self) -> int:
        return self.rows * self.cols * (2 if self.is_complex else 1)

    @property
    def ambient_shape(self) -> tuple[int, int]:
        k = 2 if self.is_complex else 1
        return (k * self.rows, k * self.cols)


@dataclass(frozen=True)
class SpaceX:
    """A direct sum of matrix blocks, identified with ``R^m``."""

    blocks: tuple[Block, ...]
    _offsets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise DomainError("space needs at least one block")
        names = [b.name for b in blocks]
        if len(set(names)) != len(names):
            raise DomainError("block names must be unique")
        object.__setattr__(self, "blocks", blocks)
        offsets, start = {}, 0
        for b in blocks:
            offsets[b.name] = (start, start + b.size)
            start += b.size
        object.__setattr__(self, "_offsets", offsets)

    @classmethod
    def flat(cls, m: int, field: str = "real", name: str = "x") -> "SpaceX":
        """A single column vector block (``m`` real coordinates, or ``m`` complex ones)."""
        return cls((Block(name, m, 1, field),))

    @property
    def dim_m(self) -> int:
        return sum(b.size for b in self.blocks)

    def block(self, name) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise DomainError(f"unknown block {name!r}")

    def slice(self, name) -> slice:
        self.block(name)
        return slice(*self._offsets[name])

    def check_point(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if a.shape != (self.dim_m,):
            raise DomainError(f"point must have {self.dim_m} coordinates, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("point has non-finite coordinates")
        return a

    def get(self, a, name) -> np.ndarray:
        """Ambient (realified for complex blocks) matrix of block ``name`` in point ``a``."""
        b = self.block(name)
        c = np.asarray(a, dtype=float)[self.slice(name)]
        if b.is_complex:
            pairs = c.reshape(b.rows, b.cols, 2)
            return realify(pairs[..., 0] + 1j * pairs[..., 1])
        return c.reshape(b.rows, b.cols)

    def put(self, a, name, m) -> None:
        """Write ambient matrix ``m`` into block ``name`` of ``a`` in place."""
        b = self.block(name)
        if b.is_complex:
            z = complexify(m)
            coords = np.stack([z.real, z.imag], axis=-1).ravel()
        else:
            coords = np.asarray(m, dtype=float).ravel()
        a[self.slice(name)] = coords

    def point(self, **values) -> np.ndarray:
        """Assemble a point from per-block values (complex arrays for complex blocks)."""
        a = np.zeros(self.dim_m)
        for name, v in values.items():
            b = self.block(name)
            v = np.asarray(v)
            if b.is_complex:
                v = np.asarray(v, dtype=complex).reshape(b.rows, b.cols)
                a[self.slice(name)] = np.stack([v.real, v.imag], axis=-1).ravel()
            else:
                a[self.slice(name)] = np.asarray(v, dtype=float).reshape(b.rows, b.cols).ravel()
        return a

    def to_dict(self) -> dict:
        return {
            "blocks": [
                {"name": b.name, "rows": b.rows, "cols": b.cols, "field": b.field}
                for b in self.blocks
            ]
        }


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


# primitives: each maps (space, point) -> point, at group and algebra level


class _Primitive:
    def __init__(self, algebra: LieAlgebra, space: SpaceX, blocks):
        self.algebra = algebra
        self.space = space
        self.blocks = list(blocks)

    def group(self, g, ginv, a, out):
        raise NotImplementedError

    def algebra_(self, y, coords, a, out):
        raise NotImplementedError


class _Conjugate(_Primitive):
    def check(self):
        n = self.algebra.ambient_size
        for name in self.blocks:
            b = self.space.block(name)
            if b.rows != b.cols:
                raise DomainError(f"conjugation needs a square block, {name!r} is {b.rows}x{b.cols}")
            if b.ambient_shape[0] != n:
                raise DomainError(
                    f"block {name!r} has ambient size {b.ambient_shape[0]}, "
                    f"{self.algebra.name} acts on {n}"
                )

    def group(self, g, ginv, a, out):
        for name in self.blocks:
            self.space.put(out, name, g @ self.space.get(a, name) @ ginv)

    def algebra_(self, y, coords, a, out):
        for name in self.blocks:
            m = self.space.get(a, name)
            self.space.put(out, name, y @ m - m @ y)


class _Left(_Primitive):
    def check(self):
        n = self.algebra.ambient_size
        for name in self.blocks:
            b = self.space.block(name)
            if b.ambient_shape[0] != n:
                raise DomainError(
                    f"left multiplication by {self.algebra.name} needs {n} ambient rows "
                    f"in block {name!r}, found {b.ambient_shape[0]}"
                )

    def group(self, g, ginv, a, out):
        for name in self.blocks:
            self.space.put(out, name, g @ self.space.get(a, name))

    def algebra_(self, y, coords, a, out):
        for name in self.blocks:
            self.space.put(out, name, y @ self.space.get(a, name))


class _RightInverse(_Primitive):
    def check(self):
        n = self.algebra.ambient_size
        for name in self.blocks:
            b = self.space.block(name)
            if b.ambient_shape[1] != n:
                raise DomainError(
                    f"right multiplication by {self.algebra.name} needs {n} ambient columns "
                    f"in block {name!r}, found {b.ambient_shape[1]}"
                )

    def group(self, g, ginv, a, out):
        for name in self.blocks:
            self.space.put(out, name, self.space.get(a, name) @ ginv)

    def algebra_(self, y, coords, a, out):
        for name in self.blocks:
            self.space.put(out, name, -self.space.get(a, name) @ y)


class _Weight(_Primitive):
    def __init__(self, algebra, space, blocks, weight):
        super().__init__(algebra, space, blocks)
        w = np.atleast_1d(np.asarray(weight, dtype=float))
        if w.shape == (1,) and algebra.dim > 1:
            raise DomainError(f"weight for {algebra.name} needs {algebra.dim} entries")
        if w.shape != (algebra.dim,):
            raise DomainError(f"weight for {algebra.name} needs {algebra.dim} entries")
        self.weight = w

    def check(self):
        if self.algebra.kind not in ("torus", "line"):
            raise DomainError(
                f"weight actions need a torus or the line, not {self.algebra.name}"
            )
        if self.algebra.kind == "torus" and not np.all(self.weight == np.round(self.weight)):
            raise DomainError("torus weights must be integers")
        for name in self.blocks:
            b = self.space.block(name)
            if not b.is_complex and b.size % 2:
                raise DomainError(
                    f"weight action needs a complex block or an even real one, {name!r} has {b.size} coordinates"
                )

    def character(self, g):
        """2x2 rotation by which ``g`` multiplies each complex coordinate."""
        if self.algebra.kind == "line":
            return _rotation(self.weight[0] * g[0, 1])
        c = np.eye(2)
        for j, w in enumerate(self.weight.astype(int)):
            c = c @ np.linalg.matrix_power(g[2 * j : 2 * j + 2, 2 * j : 2 * j + 2], w)
        return c

    def _apply(self, rot, a, out):
        for name in self.blocks:
            s = self.space.slice(name)
            out[s] = (a[s].reshape(-1, 2) @ rot.T).ravel()

    def group(self, g, ginv, a, out):
        self._apply(self.character(g), a, out)

    def algebra_(self, y, coords, a, out):
        self._apply(float(self.weight @ coords) * J2, a, out)


class _Adjoint(_Primitive):
    def check(self):
        d = self.algebra.dim
        if len(self.blocks) != d:
            raise DomainError(f"adjoint mixing needs {d} blocks for {self.algebra.name}")
        shapes = {(self.space.block(n).rows, self.space.block(n).cols,
                   self.space.block(n).field) for n in self.blocks}
        if len(shapes) != 1:
            raise DomainError("adjoint mixing needs blocks of identical shape")

    def _mix(self, mat, a, out):
        parts = np.array([a[self.space.slice(n)] for n in self.blocks])
        mixed = mat @ parts
        for n, row in zip(self.blocks, mixed):
            out[self.space.slice(n)] = row

    def group(self, g, ginv, a, out):
        self._mix(adjoint_matrix(self.algebra, g), a, out)

    def algebra_(self, y, coords, a, out):
        self._mix(self.algebra.ad(coords), a, out)


_PRIMITIVES = {
    "conjugate": _Conjugate,
    "left": _Left,
    "right_inverse": _RightInverse,
    "weight": _Weight,
    "adjoint": _Adjoint,
}


def _compile(template, algebra, space, path="template"):
    if not isinstance(template, dict) or "op" not in template:
        raise DomainError(f"{path}: template nodes are dicts with an 'op' key")
    op = template["op"]
    if op == "sum":
        terms = template.get("terms")
        if not isinstance(terms, list) or not terms:
            raise DomainError(f"{path}: 'sum' needs a non-empty 'terms' list")
        out = []
        for i, t in enumerate(terms):
            out += _compile(t, algebra, space, f"{path}.terms[{i}]")
        return out
    if op not in _PRIMITIVES:
        raise DomainError(f"{path}: unknown op {op!r}")
    if "blocks" in template:
        blocks = list(template["blocks"])
    elif "block" in template:
        blocks = [template["block"]]
    else:
        raise DomainError(f"{path}: '{op}' needs 'block' or 'blocks'")
    for name in blocks:
        try:
            space.block(name)
        except DomainError:
            raise DomainError(f"{path}: unknown block {name!r}") from None
    try:
        if op == "weight":
            if "weight" not in template:
                raise DomainError("'weight' needs a 'weight' entry")
            prim = _Weight(algebra, space, blocks, template["weight"])
        else:
            prim = _PRIMITIVES[op](algebra, space, blocks)
        prim.check()
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None
    if op in ("conjugate", "left", "right_inverse"):
        if any(space.block(n).is_complex for n in blocks):
            for e in algebra.basis:
                if not is_complex_linear(e):
                    raise DomainError(
                        f"{path}: {algebra.name} is not complex-linear, cannot act on complex blocks"
                    )
    return [prim]


class LinearAction:
    """A left action of ``exp(algebra)`` on ``space`` given by a template.

    Use :func:`build_action` to construct; construction derives the
    infinitesimal operators ``L(e_i)`` and rejects templates that are not
    representations.

    Attributes
    ----------
    operators : ndarray, shape (d, m, m)
        ``operators[i] @ A`` is ``e_i . A``.
    representation_residual : float
        ``max |L([e_i, e_j]) - [L(e_i), L(e_j)]|`` over basis pairs.
    """

    def __init__(self, algebra: LieAlgebra, space: SpaceX, template, tol: float = REP_TOL):
        self.algebra = algebra
        self.space = space
        self.template = template
        self._prims = _compile(template, algebra, space)
        m, d = space.dim_m, algebra.dim
        ops = np.zeros((d, m, m))
        eye = np.eye(m)
        for i in range(d):
            coords = np.zeros(d)
            coords[i] = 1.0
            for k in range(m):
                ops[i, :, k] = self._algebra_apply(coords, eye[k])
        ops.setflags(write=False)
        self.operators = ops
        c = algebra.structure
        lhs = np.einsum("ijk,kab->ijab", c, ops)
        prod = ops[:, None] @ ops[None, :]
        rhs = prod - prod.transpose(1, 0, 2, 3)
        self.representation_residual = float(np.abs(lhs - rhs).max(initial=0.0))
        if self.representation_residual > tol:
            raise ActionConstructionError(
                f"template is not a representation of {algebra.name}: "
                f"residual {self.representation_residual:.3e}"
            )

    def __repr__(self):
        return f"LinearAction({self.algebra.name}, m={self.space.dim_m})"

    def _algebra_apply(self, coords, a):
        y = self.algebra.matrix(coords)
        total = np.zeros_like(a)
        for p in self._prims:
            out = np.zeros_like(a)
            p.algebra_(y, coords, a, out)
            total += out
        return total

    def _coords(self, y) -> np.ndarray:
        if isinstance(y, AlgebraElement):
            if not y.algebra.same_as(self.algebra):
                raise DomainError(f"element of {y.algebra.name} cannot act through {self.algebra.name}")
            return y.coords
        y = np.asarray(y, dtype=float)
        if y.shape != (self.algebra.dim,):
            raise DomainError(f"expected {self.algebra.dim} coordinates of {self.algebra.name}")
        return y

    def operator(self, y) -> np.ndarray:
        """``L(y) = sum_i y_i L(e_i)`` as an ``m x m`` matrix."""
        return np.tensordot(self._coords(y), self.operators, axes=1)

    def act_alg(self, y, a) -> np.ndarray:
        """Infinitesimal action ``y . A``."""
        return self.operator(y) @ self.space.check_point(a)

    def act_group(self, g, a) -> np.ndarray:
        """Group action ``g . A`` for an invertible ambient matrix ``g``.

        Membership of ``g`` in the group is the caller's responsibility;
        ``g`` only has to be invertible and of the algebra's ambient size.
        """
        a = self.space.check_point(a)
        g = np.asarray(g, dtype=float)
        if g.shape != (self.algebra.ambient_size,) * 2:
            raise DomainError(
                f"group element must be {self.algebra.ambient_size}-square for {self.algebra.name}"
            )
        ginv = _inverse(g)
        cur = a.copy()
        for p in self._prims:
            out = cur.copy()
            p.group(g, ginv, cur, out)
            cur = out
        return cur

    def group_operator(self, g) -> np.ndarray:
        """Matrix of ``A -> g . A``."""
        eye = np.eye(self.space.dim_m)
        return np.column_stack([self.act_group(g, e) for e in eye])

    def exp(self, y) -> np.ndarray:
        """Ambient group element ``exp(y)``."""
        return matrix_exp(self.algebra.matrix(self._coords(y)))


def build_action(algebra: LieAlgebra, space: SpaceX, template, tol: float = REP_TOL) -> LinearAction:
    """Compile ``template`` into a :class:`LinearAction`.

    Raises
    ------
    DomainError
        If the template is ill-shaped for ``space``.
    ActionConstructionError
        If the derived operators violate the representation property by more
        than ``tol``.
    """
    return LinearAction(algebra, space, template, tol=tol)


@dataclass(frozen=True)
class CommutingReport:
    """Residuals of the commuting-actions hypothesis check."""

    group_residual: float
    algebra_residual: float
    trials: int
    group_tol: float = GROUP_COMMUTE_TOL
    algebra_tol: float = ALGEBRA_COMMUTE_TOL

    @property
    def passed(self) -> bool:
        return self.group_residual <= self.group_tol and self.algebra_residual <= self.algebra_tol

    def to_dict(self) -> dict:
        return {
            "group_residual": self.group_residual,
            "algebra_residual": self.algebra_residual,
            "trials": self.trials,
            "group_tol": self.group_tol,
            "algebra_tol": self.algebra_tol,
            "passed": self.passed,
        }


def check_commuting(act_g: LinearAction, act_s: LinearAction, trials: int = 8, rng=None,
                    group_tol: float = GROUP_COMMUTE_TOL,
                    algebra_tol: float = ALGEBRA_COMMUTE_TOL) -> CommutingReport:
    """Check that two actions on the same space commute.

    Infinitesimal operators are compared on all basis pairs; group elements
    ``exp(y)``, ``exp(x)`` are compared on ``trials`` random draws with
    coordinates uniform in ``[-pi, pi]``. Residuals are operator 2-norms.
    A failing report must stop any downstream solve.
    """
    if act_g.space != act_s.space:
        raise DomainError("actions live on different spaces")
    rng = np.random.default_rng(rng)
    alg = 0.0
    for lg in act_g.operators:
        for ls in act_s.operators:
            alg = max(alg, float(np.linalg.norm(lg @ ls - ls @ lg, 2)))
    grp = 0.0
    for _ in range(trials):
        y = rng.uniform(-np.pi, np.pi, act_g.algebra.dim)
        x = rng.uniform(-np.pi, np.pi, act_s.algebra.dim)
        pg = act_g.group_operator(act_g.exp(y))
        ps = act_s.group_operator(act_s.exp(x))
        grp = max(grp, float(np.linalg.norm(pg @ ps - ps @ pg, 2)))
    return CommutingReport(grp, alg, trials, group_tol, algebra_tol)
