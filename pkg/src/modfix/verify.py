"""Group-level checks that are independent of the linear solve.

``verify_exp_path`` follows one-parameter subgroups: if ``A`` is symmetric
for ``rho`` then ``exp(t rho(x)) . exp(t x) . A == A`` for every ``x`` and
``t``. ``orbit_membership`` tests the definition of a fixed class directly,
searching the gauge group for ``g`` with ``g . B = C``. The search is local
with restarts, so a positive answer is a certificate and a negative one is
only evidence. ``check_components`` extends a connected-group verdict to a
disconnected symmetry group by testing one user-supplied representative per
extra component; which representatives to use is the caller's reading of the
group, the tool cannot derive its components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .actions import LinearAction
from .exceptions import DomainError
from .homs import HomCandidate
from .linalg import matrix_exp

EXP_PATH_TOL = 1e-7
ORBIT_TOL = 1e-5
FD_STEP = 1e-5


@dataclass(frozen=True)
class ExpPathReport:
    max_residual: float
    samples: int
    t_range: float
    worst_x: tuple = ()
    worst_t: float = 0.0

    def to_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "samples": self.samples,
            "t_range": self.t_range,
            "worst_x": list(self.worst_x),
            "worst_t": self.worst_t,
        }


def _unit(rng, d):
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


def verify_exp_path(act_s: LinearAction, act_g: LinearAction, rho: HomCandidate, a,
                    samples: int = 50, t_range: float = 10.0, rng=None) -> ExpPathReport:
    """Max of ``||exp(t rho(x)) . (exp(t x) . A) - A||`` over random unit ``x`` and ``t``.

    ``t`` is uniform on ``[-t_range, t_range]``. A large residual is a result,
    not an error.
    """
    rng = np.random.default_rng(rng)
    a = act_s.space.check_point(a)
    worst, wx, wt = 0.0, (), 0.0
    for _ in range(samples):
        x = _unit(rng, act_s.algebra.dim)
        t = float(rng.uniform(-t_range, t_range))
        s = matrix_exp(t * act_s.algebra.matrix(x))
        g = matrix_exp(t * rho.target.matrix(rho.matrix @ x))
        res = float(np.linalg.norm(act_g.act_group(g, act_s.act_group(s, a)) - a))
        if res >= worst:
            worst, wx, wt = res, tuple(x.tolist()), t
    return ExpPathReport(worst, samples, t_range, wx, wt)


@dataclass(frozen=True, eq=False)
class OrbitResult:
    """Outcome of a search for ``g`` with ``g . B = C``.

    ``member`` is a certificate when true; when false it only records that the
    local search found nothing within ``tol``.
    """

    member: bool
    residual: float
    g: np.ndarray
    xi: np.ndarray
    tol: float = ORBIT_TOL

    @property
    def evidence(self) -> str:
        return "certificate" if self.member else "evidence (local search)"

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "residual": self.residual,
            "xi": self.xi.tolist(),
            "evidence": self.evidence,
        }


def _descend(act_g, b, c, xi, max_iter, tol, fd_step):
    alg = act_g.algebra
    d = alg.dim

    def moved(z):
        return act_g.act_group(matrix_exp(alg.matrix(z)), b)

    cur = moved(xi)
    diff = cur - c
    f = float(diff @ diff)
    step = 1.0
    eye = np.eye(d)
    for _ in range(max_iter):
        if np.sqrt(f) <= tol:
            break
        # 2 <d/dxi_i (exp(xi) . B), exp(xi) . B - C>, derivative by central differences
        grad = np.array([
            2.0 * float(((moved(xi + fd_step * eye[i]) - moved(xi - fd_step * eye[i]))
                         / (2 * fd_step)) @ diff)
            for i in range(d)
        ])
        gnorm2 = float(grad @ grad)
        if gnorm2 < 1e-30:
            break
        step = min(step * 2.0, 1e3)
        while step > 1e-12:
            trial = xi - step * grad
            tdiff = moved(trial) - c
            tf = float(tdiff @ tdiff)
            if tf <= f - 0.25 * step * gnorm2:
                break
            step *= 0.5
        else:
            break
        xi, diff, f = trial, tdiff, tf
    return xi, np.sqrt(f)


def orbit_membership(act_g: LinearAction, b, c, restarts: int = 4, rng=None,
                     tol: float = ORBIT_TOL, max_iter: int = 400,
                     fd_step: float = FD_STEP) -> OrbitResult:
    """Search ``exp(xi)`` in the gauge group with ``exp(xi) . B = C``.

    Minimizes ``||exp(xi) . B - C||^2`` by gradient descent with backtracking
    from ``xi = 0`` and ``restarts`` random starts (coordinates uniform in
    ``[-pi, pi]``). For compact connected groups ``exp`` is onto, so this
    single chart covers the group.

    Raises
    ------
    DomainError
        If the gauge algebra is not a compact catalog algebra.
    """
    alg = act_g.algebra
    if alg.kind == "custom" or not alg.compact:
        raise DomainError(f"orbit membership is unsupported for {alg.name}")
    if restarts < 1:
        raise DomainError("restarts must be at least 1")
    rng = np.random.default_rng(rng)
    b = act_g.space.check_point(b)
    c = act_g.space.check_point(c)
    starts = [np.zeros(alg.dim)] + [rng.uniform(-np.pi, np.pi, alg.dim) for _ in range(restarts)]
    best_xi, best = starts[0], np.inf
    for xi0 in starts:
        xi, res = _descend(act_g, b, c, xi0, max_iter, tol / 10, fd_step)
        if res < best:
            best_xi, best = xi, res
        if best <= tol / 10:
            break
    g = matrix_exp(alg.matrix(best_xi))
    return OrbitResult(bool(best <= tol), float(best), g, best_xi, tol)


@dataclass(frozen=True, eq=False)
class ComponentReport:
    """Per-representative orbit checks for the non-identity components of S."""

    results: tuple
    identity_component_only: bool
    tol: float = ORBIT_TOL

    @property
    def passed(self) -> bool:
        return all(r.member for r in self.results)

    def to_dict(self) -> dict:
        return {
            "identity_component_only": self.identity_component_only,
            "passed": self.passed,
            "representatives": [r.to_dict() for r in self.results],
        }


def check_components(act_s: LinearAction, act_g: LinearAction, a, reps, restarts: int = 4,
                     rng=None, tol: float = ORBIT_TOL) -> ComponentReport:
    """Test ``r . A ~ A`` under the gauge group for each representative ``r``.

    Together with the identity-component criterion this decides whether the
    class of ``A`` is fixed by the whole (disconnected) symmetry group. An
    empty ``reps`` gives an identity-component-only report.
    """
    rng = np.random.default_rng(rng)
    a = act_s.space.check_point(a)
    reps = list(reps)
    results = tuple(
        orbit_membership(act_g, act_s.act_group(r, a), a, restarts=restarts, rng=rng, tol=tol)
        for r in reps
    )
    return ComponentReport(results, not reps, tol)


@dataclass(frozen=True, eq=False)
class FixedPointReport:
    """Verification of one symmetric point ``a`` for candidate ``rho``."""

    a: np.ndarray
    rho: HomCandidate
    exp_path: ExpPathReport
    orbit_residuals: tuple = ()
    components: ComponentReport | None = None
    exp_tol: float = EXP_PATH_TOL
    orbit_tol: float = ORBIT_TOL
    notes: tuple = field(default_factory=tuple)

    @property
    def exp_path_residual(self) -> float:
        return self.exp_path.max_residual

    @property
    def passed(self) -> bool:
        ok = self.exp_path_residual <= self.exp_tol
        ok = ok and all(r <= self.orbit_tol for _, r in self.orbit_residuals)
        if self.components is not None:
            ok = ok and self.components.passed
        return ok

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "rho": self.rho.label,
            "exp_path": self.exp_path.to_dict(),
            "orbit_residuals": [{"s_xi": list(s), "residual": r} for s, r in self.orbit_residuals],
            "components": None if self.components is None else self.components.to_dict(),
            "thresholds": {"exp_path": self.exp_tol, "orbit": self.orbit_tol},
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def verify_fixed_point(act_s: LinearAction, act_g: LinearAction, rho: HomCandidate, a,
                       reps=(), samples: int = 50, t_range: float = 10.0,
                       orbit_samples: int = 2, restarts: int = 2, rng=None,
                       exp_tol: float = EXP_PATH_TOL,
                       orbit_tol: float = ORBIT_TOL) -> FixedPointReport:
    """Run every independent check on ``a``.

    Orbit residuals are ``min_g ||s . A - g . A||`` for ``orbit_samples``
    random ``s = exp(t x)``, found without using ``rho``. Component checks
    run only when ``reps`` is non-empty.
    """
    rng = np.random.default_rng(rng)
    a = act_s.space.check_point(a)
    exp_report = verify_exp_path(act_s, act_g, rho, a, samples, t_range, rng)
    orbit = []
    notes = []
    if act_g.algebra.compact and act_g.algebra.kind != "custom":
        for _ in range(orbit_samples):
            sxi = _unit(rng, act_s.algebra.dim) * rng.uniform(-np.pi, np.pi)
            sa = act_s.act_group(matrix_exp(act_s.algebra.matrix(sxi)), a)
            res = orbit_membership(act_g, a, sa, restarts=restarts, rng=rng, tol=orbit_tol)
            orbit.append((tuple(sxi.tolist()), res.residual))
    else:
        notes.append(f"orbit search skipped: {act_g.algebra.name} is not a compact catalog algebra")
    comps = None
    if reps:
        comps = check_components(act_s, act_g, a, reps, restarts=max(restarts, 4), rng=rng,
                                 tol=orbit_tol)
    return FixedPointReport(a, rho, exp_report, tuple(orbit), comps, exp_tol, orbit_tol,
                            tuple(notes))
