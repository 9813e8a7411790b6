"""Acceptance criteria 1-8.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

import conftest
from modfix.actions import Block, SpaceX, build_action, check_commuting
from modfix.catalog import builtin_algebra, catalog_keys
from modfix.homs import HomCandidate, conjugate_candidate, enumerate_su2_to_un, candidates
from modfix.linalg import matrix_exp
from modfix.problem import example_path, parse_problem
from modfix.solver import constraint_operators, solve_symmetric, stabilizer_algebra
from modfix.verify import check_components, verify_exp_path

from oracles import grid_scan_projector, partition_count
from test_homs import brute_partitions

EXAMPLES = ("weighted_circle", "su2_u3_triple")


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print("\n" + line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


@pytest.fixture(scope="module")
def solved():
    out = {}
    for name in EXAMPLES:
        spec = parse_problem(example_path(name))
        cands = list(candidates(spec.algebra_s, spec.algebra_g, spec.strategy))
        subs = [solve_symmetric(spec.action_s, spec.action_g, c) for c in cands]
        out[name] = (spec, cands, subs)
    return out


def test_criterion_1_soundness(solved):
    start = time.perf_counter()
    worst, count = 0.0, 0
    for name, (spec, cands, subs) in solved.items():
        for k, sub in enumerate(subs):
            for j in range(sub.dim):
                rep = verify_exp_path(spec.action_s, spec.action_g, sub.rho, sub.basis[:, j],
                                      samples=50, t_range=10, rng=[k, j])
                worst = max(worst, rep.max_residual)
                count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and elapsed < 10 and count == 8
    assert report(1, ok, f"{count} basis vectors, max residual {worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_necessity(solved):
    details, ok = [], True
    for name, (spec, cands, subs) in solved.items():
        rng = np.random.default_rng(20261015)
        m = spec.space.dim_m
        projectors = [s.projector for s in subs if not s.is_trivial]
        failing, trials = 0, 0
        while trials < 200:
            a = rng.normal(size=m)
            a /= np.linalg.norm(a)
            if min(np.linalg.norm(a - p @ a) for p in projectors) < 0.1:
                continue
            trials += 1
            res = [verify_exp_path(spec.action_s, spec.action_g, c, a, samples=10, t_range=10,
                                   rng=rng).max_residual for c in cands]
            failing += all(r > 1e-3 for r in res)
        frac = failing / trials
        ok = ok and frac >= 0.95
        details.append(f"{name} {failing}/{trials}")
    assert report(2, ok, ", ".join(details))


def test_criterion_3_grid_oracle(solved):
    spec, cands, _ = solved["weighted_circle"]
    assert spec.space.dim_m == 4
    errs = {}
    for w in (-1, -2, 0):
        rho = HomCandidate(spec.algebra_s, spec.algebra_g, [float(w)])
        sub = solve_symmetric(spec.action_s, spec.action_g, rho)
        ref = grid_scan_projector(constraint_operators(spec.action_s, spec.action_g, rho))
        errs[w] = np.linalg.norm(sub.projector - ref, 2)
    ok = max(errs.values()) <= 1e-5
    assert report(3, ok, ", ".join(f"rho={w}: {e:.1e}" for w, e in errs.items()))


def test_criterion_4_partition_counts():
    counts, worst, ok = [], 0.0, True
    for n in range(1, 7):
        cands = enumerate_su2_to_un(n)
        labels = {c.label for c in cands}
        brute = brute_partitions(n)
        ok = ok and len(cands) == len(brute) == partition_count(n)
        ok = ok and labels == {f"partition:{p}" for p in brute}
        worst = max([worst] + [c.residual for c in cands])
        counts.append(len(cands))
    ok = ok and counts == [1, 2, 3, 5, 7, 11] and worst <= 1e-9
    assert report(4, ok, f"counts {counts}, max hom residual {worst:.1e}")


def test_criterion_5_stabilizers(solved):
    worst, ok = 0.0, True
    for name, (spec, cands, subs) in solved.items():
        zero = stabilizer_algebra(spec.action_s, spec.action_g, np.zeros(spec.space.dim_m))
        ok = ok and zero.dim == spec.algebra_s.dim
        for sub in subs:
            for j in range(sub.dim):
                st = stabilizer_algebra(spec.action_s, spec.action_g, sub.basis[:, j])
                worst = max(worst, st.bracket_residual)
    ok = ok and worst <= 1e-7
    assert report(5, ok, f"max bracket residual {worst:.1e}, A=0 gives all of Lie(S)")


def _o2(weight):
    space = SpaceX((Block("a", 2, 1),))
    act_s = build_action(builtin_algebra("circle"), space, {"op": "left", "block": "a"})
    act_g = build_action(builtin_algebra("u(1)"), space, {"op": "weight", "block": "a", "weight": weight})
    return act_s, act_g


def test_criterion_6_components():
    refl = [np.diag([1.0, -1.0])]
    real = check_components(*_o2(0), np.array([1.0, 0.0]), refl, rng=0, tol=1e-5)
    imag = check_components(*_o2(0), np.array([0.0, 1.0]), refl, rng=0, tol=1e-5)
    gauge = check_components(*_o2(1), np.array([0.0, 1.0]), refl, rng=0, tol=1e-5)
    outcomes = (real.passed, imag.passed, gauge.passed)
    ok = outcomes == (True, False, True)
    res = [r.results[0].residual for r in (real, imag, gauge)]
    assert report(6, ok, "pass/fail/pass-via-gauge residuals " + ", ".join(f"{r:.1e}" for r in res))


def test_criterion_7_equivariance(solved):
    spec, cands, subs = solved["su2_u3_triple"]
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        g = matrix_exp(spec.algebra_g.matrix(rng.normal(size=spec.algebra_g.dim)))
        t = spec.action_g.group_operator(g)
        tinv = np.linalg.inv(t)
        for c, sub in zip(cands, subs):
            moved = solve_symmetric(spec.action_s, spec.action_g, conjugate_candidate(c, g))
            worst = max(worst, np.linalg.norm(moved.projector - t @ sub.projector @ tinv, 2))
    assert report(7, worst <= 1e-7, f"20 random g, max projector gap {worst:.1e}")


def test_criterion_8_infrastructure(tmp_path):
    notes, ok = [], True
    rep_worst = 0.0
    for key in catalog_keys():
        alg = builtin_algebra(key)
        ok = ok and alg.residuals["jacobi"] <= 1e-10 and alg.residuals["bracket_consistency"] <= 1e-10
        ok = ok and np.array_equal(alg.structure, -alg.structure.transpose(1, 0, 2))
        space = SpaceX((Block("v", alg.ambient_size, 1),))
        act = build_action(alg, space, {"op": "left", "block": "v"})
        rep_worst = max(rep_worst, act.representation_residual)
    ok = ok and rep_worst <= 1e-9
    notes.append(f"{len(catalog_keys())} algebras, rep residual {rep_worst:.1e}")
    for name in EXAMPLES:
        spec = parse_problem(example_path(name))
        ok = ok and check_commuting(spec.action_g, spec.action_s, rng=0).passed
        outs = []
        for k in range(2):
            out = tmp_path / f"{name}{k}.json"
            subprocess.run([sys.executable, "-m", "modfix", "all", str(example_path(name)),
                            "--out", str(out)], check=True)
            outs.append(out.read_bytes())
        ok = ok and outs[0] == outs[1]
    notes.append("commuting and byte-identical reports on both examples")
    elapsed = time.perf_counter() - conftest.SESSION_START
    ok = ok and elapsed < 60
    notes.append(f"suite time {elapsed:.1f} s")
    assert report(8, ok, "; ".join(notes))
