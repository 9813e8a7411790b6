"""Problem files: loading, schema validation and default materialization."""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .actions import Block, LinearAction, SpaceX, build_action
from .catalog import builtin_algebra
from .exceptions import DomainError, SchemaError, UnsupportedSymmetryError
from .homs import check_source
from .lie import LieAlgebra

DEFAULT_TOLERANCES = {
    "hom": 1e-9,
    "representation": 1e-9,
    "nullspace": 1e-8,
    "gap_ratio": 0.1,
    "commute_group": 1e-8,
    "commute_algebra": 1e-9,
    "exp_path": 1e-7,
    "orbit": 1e-5,
    "bracket_closure": 1e-7,
}

DEFAULT_VERIFICATION = {
    "samples": 50,
    "t_range": 10.0,
    "orbit_samples": 2,
    "restarts": 2,
    "commute_trials": 8,
}

SYMMETRY_KEYS = "circle, line, su(2) or torus(k)"


def load_schema(name: str = "problem") -> dict:
    text = resources.files("modfix").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def example_path(name: str) -> Path:
    """Path of a shipped example problem (``weighted_circle`` or ``su2_u3_triple``)."""
    return Path(str(resources.files("modfix").joinpath(f"problems/{name}.yaml")))


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A validated problem with every default written out.

    ``echo`` is the materialized problem dict; the remaining fields are the
    objects built from it.
    """

    echo: dict
    space: SpaceX
    algebra_g: LieAlgebra
    algebra_s: LieAlgebra
    action_g: LinearAction
    action_s: LinearAction
    components: tuple
    strategy: dict
    tolerances: dict
    verification: dict
    seed: int

    @property
    def content_hash(self) -> str:
        canon = json.dumps(self.echo, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def _load(source) -> dict:
    if isinstance(source, dict):
        return copy.deepcopy(source)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError("", f"cannot read problem file {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError("", f"malformed problem file: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaError("", "problem file must contain a mapping")
    return data


def parse_problem(source, seed: int | None = None, tolerances: dict | None = None) -> ProblemSpec:
    """Load, validate and materialize a problem.

    Parameters
    ----------
    source : path or dict
        YAML (or JSON) problem file, or an already-loaded mapping.
    seed : int, optional
        Overrides the file's seed.
    tolerances : dict, optional
        Named tolerance overrides, applied after the file's own.

    Raises
    ------
    SchemaError
        On any schema violation, with the offending field path.
    UnsupportedSymmetryError
        If the symmetry algebra has no homomorphism enumeration.
    """
    data = _load(source)
    validator = jsonschema.Draft202012Validator(load_schema("problem"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(_path(err.absolute_path) or "<root>", err.message)

    tol = dict(DEFAULT_TOLERANCES)
    tol.update(data.get("tolerances", {}))
    for name, value in (tolerances or {}).items():
        if name not in DEFAULT_TOLERANCES:
            raise SchemaError(f"tolerances.{name}", "unknown tolerance name")
        tol[name] = float(value)
    if not 0 < tol["nullspace"] < 1:
        raise SchemaError("tolerances.nullspace", "must lie in (0, 1)")
    ver = dict(DEFAULT_VERIFICATION)
    ver.update(data.get("verification", {}))
    ver["t_range"] = float(ver["t_range"])

    blocks = []
    for i, b in enumerate(data["space"]["blocks"]):
        try:
            blocks.append(Block(b["name"], b["rows"], b.get("cols", 1), b.get("field", "real")))
        except DomainError as exc:
            raise SchemaError(f"space.blocks[{i}]", str(exc)) from None
    try:
        space = SpaceX(tuple(blocks))
    except DomainError as exc:
        raise SchemaError("space.blocks", str(exc)) from None

    algebras = {}
    for key in ("group_G", "group_S"):
        try:
            algebras[key] = builtin_algebra(data[key]["algebra"])
        except DomainError as exc:
            raise SchemaError(f"{key}.algebra", str(exc)) from None
    alg_s = algebras["group_S"]
    try:
        check_source(alg_s)
    except UnsupportedSymmetryError as exc:
        raise UnsupportedSymmetryError(
            f"group_S.algebra: {exc}; symmetry sources are {SYMMETRY_KEYS}"
        ) from None

    actions = {}
    for key, alg in (("action_G", algebras["group_G"]), ("action_S", alg_s)):
        try:
            actions[key] = build_action(alg, space, data[key], tol=tol["representation"])
        except DomainError as exc:
            raise SchemaError(key, str(exc).replace("template: ", "").replace("template.", "")) from None

    comps = []
    for i, r in enumerate(data["group_S"].get("components", [])):
        r = np.asarray(r, dtype=float)
        if r.shape != (alg_s.ambient_size,) * 2:
            raise SchemaError(
                f"group_S.components[{i}]",
                f"representative must be {alg_s.ambient_size}x{alg_s.ambient_size}",
            )
        comps.append(r)

    echo = {
        "name": data.get("name", ""),
        "seed": int(data.get("seed", 0) if seed is None else seed),
        "space": space.to_dict(),
        "group_G": {"algebra": data["group_G"]["algebra"]},
        "group_S": {
            "algebra": data["group_S"]["algebra"],
            "components": [r.tolist() for r in comps],
        },
        "action_G": data["action_G"],
        "action_S": data["action_S"],
        "rho_strategy": data["rho_strategy"],
        "tolerances": tol,
        "verification": ver,
    }
    return ProblemSpec(
        echo=echo,
        space=space,
        algebra_g=algebras["group_G"],
        algebra_s=alg_s,
        action_g=actions["action_G"],
        action_s=actions["action_S"],
        components=tuple(comps),
        strategy=data["rho_strategy"],
        tolerances=tol,
        verification=ver,
        seed=echo["seed"],
    )
