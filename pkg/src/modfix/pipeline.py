"""End-to-end run: commuting check, candidates, solve, verify, stabilizers."""

from __future__ import annotations

import json

import numpy as np

from . import __version__
from .actions import check_commuting
from .homs import candidates as enumerate_candidates
from .problem import ProblemSpec
from .solver import (
    TRIVIAL_NOTE,
    hypotheses_label,
    solve_symmetric,
    stabilizer_algebra,
    trivial_solution_filter,
)
from .verify import verify_fixed_point

REPORT_SCHEMA_VERSION = "1.0"

COMMANDS = ("check", "homs", "solve", "verify", "stabilizer", "all")

# random streams, one per pipeline stage
_STAGE_COMMUTE = 0
_STAGE_VERIFY = 1


def stage_rng(seed: int, stage: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator keyed on ``(seed, stage, index)``.

    Streams do not depend on how many draws other stages made, so adding or
    skipping a stage leaves every other residual unchanged.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stage, index])))


def _stages(command: str) -> set:
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    return {
        "check": {"check"},
        "homs": {"check", "homs"},
        "solve": {"check", "homs", "solve"},
        "verify": {"check", "homs", "solve", "verify"},
        "stabilizer": {"check", "homs", "solve", "stabilizer"},
        "all": {"check", "homs", "solve", "verify", "stabilizer"},
    }[command]


def run_pipeline(spec: ProblemSpec, command: str = "all") -> dict:
    """Run the pipeline prefix named by ``command`` and return the report dict.

    The commuting check always runs; if it fails the report stops there with
    ``summary.verdict == "aborted"``. Candidates are listed sorted by label.
    """
    stages = _stages(command)
    tol = spec.tolerances
    ver = spec.verification
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": {"name": "modfix", "version": __version__},
        "command": command,
        "problem": spec.echo,
        "problem_sha256": spec.content_hash,
        "hypotheses": hypotheses_label(spec.action_s, spec.action_g),
        "warnings": [],
    }
    commuting = check_commuting(
        spec.action_g, spec.action_s, trials=ver["commute_trials"],
        rng=stage_rng(spec.seed, _STAGE_COMMUTE),
        group_tol=tol["commute_group"], algebra_tol=tol["commute_algebra"],
    )
    report["commuting"] = commuting.to_dict()
    if not commuting.passed:
        report["summary"] = {"verdict": "aborted", "reason": "actions do not commute"}
        return report
    if "homs" not in stages:
        report["summary"] = {"verdict": "pass"}
        return report

    cands = sorted(
        enumerate_candidates(spec.algebra_s, spec.algebra_g, spec.strategy, tol=tol["hom"]),
        key=lambda c: c.label,
    )
    report["candidates"] = [c.to_dict() for c in cands]
    if "solve" not in stages:
        report["summary"] = {"verdict": "pass", "candidates": len(cands)}
        return report

    report["trivial_solution"] = TRIVIAL_NOTE
    results = []
    verdict = "pass"
    for k, (cand, entry) in enumerate(zip(cands, report["candidates"])):
        sub = trivial_solution_filter(
            solve_symmetric(spec.action_s, spec.action_g, cand, tol["nullspace"], tol["gap_ratio"])
        )
        entry["nullspace_dim"] = sub.dim
        entry["rank_gap"] = sub.to_dict(include_basis=False)["rank_gap"]
        report["warnings"].extend(f"{cand.label}: {w}" for w in sub.warnings)
        if sub.is_trivial:
            continue
        res = sub.to_dict()
        res["annotations"] = [a for a in res["annotations"] if a != TRIVIAL_NOTE]
        if "verify" in stages:
            checks = []
            for j in range(sub.dim):
                fp = verify_fixed_point(
                    spec.action_s, spec.action_g, cand, sub.basis[:, j],
                    reps=spec.components, samples=ver["samples"], t_range=ver["t_range"],
                    orbit_samples=ver["orbit_samples"], restarts=ver["restarts"],
                    rng=stage_rng(spec.seed, _STAGE_VERIFY, k * 1000 + j),
                    exp_tol=tol["exp_path"], orbit_tol=tol["orbit"],
                )
                d = fp.to_dict()
                d["basis_index"] = j
                checks.append(d)
                if not fp.passed:
                    verdict = "fail"
            res["verification"] = checks
        if "stabilizer" in stages:
            stabs = []
            for j in range(sub.dim):
                st = stabilizer_algebra(spec.action_s, spec.action_g, sub.basis[:, j],
                                        tol["nullspace"], tol["bracket_closure"])
                d = st.to_dict()
                d["basis_index"] = j
                stabs.append(d)
                if not st.closed:
                    report["warnings"].append(
                        f"{cand.label}: stabilizer of basis vector {j} is not bracket-closed "
                        f"(residual {st.bracket_residual:.3e})"
                    )
            res["stabilizers"] = stabs
        results.append(res)
    report["results"] = results
    report["summary"] = {
        "verdict": verdict,
        "candidates": len(cands),
        "nontrivial": [r["rho"]["label"] for r in results],
    }
    return report


def dumps_report(report: dict) -> str:
    """Canonical JSON text of a report (sorted keys, no NaN or infinity)."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.3e}"


def format_text(report: dict) -> str:
    """Short human-readable rendering of a report."""
    lines = [
        f"modfix {report['tool']['version']}  {report['command']}  {report['problem']['name']}",
        f"problem sha256 {report['problem_sha256']}",
        f"hypotheses: {report['hypotheses']}",
    ]
    c = report["commuting"]
    lines.append(
        f"commuting: group {_fmt(c['group_residual'])} (tol {c['group_tol']:g}), "
        f"algebra {_fmt(c['algebra_residual'])} (tol {c['algebra_tol']:g}) "
        f"-> {'pass' if c['passed'] else 'FAIL'}"
    )
    for cand in report.get("candidates", []):
        dim = cand.get("nullspace_dim")
        extra = "" if dim is None else f"  nullspace dim {dim}  gap {_fmt(cand.get('rank_gap'))}"
        lines.append(f"  candidate {cand['label']}  hom residual {_fmt(cand['homomorphism_residual'])}{extra}")
    for res in report.get("results", []):
        lines.append(f"result {res['rho']['label']}: dim {res['dim']}, residual {_fmt(res['residual'])}")
        for v in res.get("verification", []):
            orbit = max((o["residual"] for o in v["orbit_residuals"]), default=None)
            lines.append(
                f"    basis[{v['basis_index']}] exp-path {_fmt(v['exp_path']['max_residual'])} "
                f"orbit {_fmt(orbit)} -> {v['verdict']}"
            )
        for s in res.get("stabilizers", []):
            lines.append(
                f"    basis[{s['basis_index']}] stabilizer dim {s['dim']} "
                f"closure {_fmt(s['bracket_residual'])}"
            )
    if "trivial_solution" in report:
        lines.append(f"note: {report['trivial_solution']}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    lines.append(f"verdict: {report['summary']['verdict']}")
    return "\n".join(lines) + "\n"
