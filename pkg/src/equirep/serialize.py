"""JSON serialization: group specs, representations, operators, reports.

Complex matrices are nested arrays of [re, im] pairs (never strings).
Floats are emitted with 17 significant digits, which round-trips IEEE
doubles bit-exactly and keeps reports byte-identical across runs.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, ValidationError
from .groups import FiniteGroup, LieAlgebraBasis, group_from_table, make_cyclic, \
    make_dihedral, make_symmetric
from .linalg import DEFAULT_TOL, Tolerance
from .representations import Representation, finite_rep_from_images, verify_homomorphism

__all__ = [
    "mat_to_json", "mat_from_json", "dumps_report",
    "group_to_spec", "group_from_spec", "lie_to_spec", "lie_from_spec",
    "rep_to_spec", "rep_from_spec", "operator_to_spec", "operator_from_spec",
]


def mat_to_json(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def mat_from_json(data) -> np.ndarray:
    try:
        return np.array([[complex(c[0], c[1]) for c in row] for row in data])
    except (TypeError, IndexError) as exc:
        raise ValidationError(f"malformed matrix payload: {exc}") from exc


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if v != v or v in (float("inf"), float("-inf")):
            raise ValidationError("non-finite float in report")
        return format(v, ".17g")
    raise ValidationError(f"unsupported scalar {type(x)}")


def _write(obj, out: list[str], indent: int):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f'{pad}  "{k}": ')
            _write(v, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        simple = all(isinstance(v, (int, float, bool, np.integer, np.floating))
                     for v in seq)
        if simple:
            out.append("[" + ", ".join(_fmt(v) for v in seq) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad + "  ")
            _write(v, out, indent + 1)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'"{escaped}"')
    elif obj is None:
        out.append("null")
    else:
        out.append(_fmt(obj))


def dumps_report(obj) -> str:
    """Deterministic JSON text with fixed 17-significant-digit floats."""
    out: list[str] = []
    _write(obj, out, 0)
    out.append("\n")
    return "".join(out)


# ---------------------------------------------------------------------------
# group specs

def group_to_spec(g: FiniteGroup) -> dict:
    kind = None
    if g.name.startswith("Z_"):
        kind = {"kind": "cyclic", "n": g.order}
    elif g.name.startswith("S_"):
        kind = {"kind": "symmetric", "n": int(g.name[2:])}
    elif g.name.startswith("D_"):
        kind = {"kind": "dihedral", "n": g.order // 2}
    if kind is None:
        return {
            "kind": "table",
            "mul": [[int(x) for x in row] for row in g.mul],
            "generators": list(map(int, g.generators)),
            "labels": list(g.element_labels),
            "name": g.name,
        }
    return kind


def group_from_spec(spec: dict) -> FiniteGroup:
    kind = spec.get("kind")
    if kind == "cyclic":
        return make_cyclic(int(spec["n"]))
    if kind == "symmetric":
        return make_symmetric(int(spec["n"]))
    if kind == "dihedral":
        return make_dihedral(int(spec["n"]))
    if kind == "table":
        g = group_from_table(np.array(spec["mul"], dtype=np.int64),
                             spec.get("generators"),
                             spec.get("labels"),
                             spec.get("name", "group"))
        # explicit tables are verified on load; larger ones (where the cubic
        # associativity scan is off the table) must be declared trusted
        if g.order <= 512:
            from .groups import verify_group_axioms
            if not verify_group_axioms(g).ok:
                raise ValidationError("explicit table fails the group axioms")
        elif not spec.get("trusted", False):
            raise ValidationError(
                "tables above order 512 must carry \"trusted\": true")
        return g
    raise InvalidParameterError(f"unknown group kind {kind!r}")


def lie_to_spec(alg: LieAlgebraBasis) -> dict:
    return {
        "kind": "lie",
        "generators": [mat_to_json(h) for h in alg.generators],
        "name": alg.name,
    }


def lie_from_spec(spec: dict) -> LieAlgebraBasis:
    gens = [mat_from_json(m) for m in spec["generators"]]
    return LieAlgebraBasis(gens, name=spec.get("name", "lie-algebra"))


def source_from_spec(spec: dict):
    """Load either symmetry source: a finite group or a Lie algebra basis."""
    if spec.get("kind") == "lie":
        return lie_from_spec(spec)
    return group_from_spec(spec)


# ---------------------------------------------------------------------------
# representation specs

def rep_to_spec(rep: Representation) -> dict:
    if rep.flavor == "finite":
        return {
            "flavor": "finite",
            "group": group_to_spec(rep.group),
            "dim": rep.dim,
            "name": rep.name,
            "matrices": [mat_to_json(rep.representative(g))
                         for g in rep.group.generators],
        }
    return {
        "flavor": "lie",
        "algebra": lie_to_spec(rep.algebra),
        "dim": rep.dim,
        "name": rep.name,
        "generator_images": [mat_to_json(h) for h in rep.generator_images],
    }


def rep_from_spec(spec: dict, tol: Tolerance = DEFAULT_TOL,
                  max_residual: float = 1e-8) -> Representation:
    """Load a representation and re-verify the homomorphism property."""
    flavor = spec.get("flavor")
    if flavor == "finite":
        group = group_from_spec(spec["group"])
        images = [mat_from_json(m) for m in spec["matrices"]]
        rep = finite_rep_from_images(group, images, spec.get("name", "rep"))
    elif flavor == "lie":
        alg = lie_from_spec(spec["algebra"])
        images = [mat_from_json(m) for m in spec["generator_images"]]
        rep = Representation(alg, "lie", images[0].shape[0],
                             spec.get("name", "rep"), generator_images=images)
    else:
        raise InvalidParameterError(f"unknown representation flavor {flavor!r}")
    residual = verify_homomorphism(rep, tol)
    if residual > max_residual:
        raise ValidationError(
            f"loaded representation fails verification (residual {residual:.3e})")
    return rep


def operator_to_spec(a: np.ndarray, name: str = "operator") -> dict:
    return {"name": name, "matrix": mat_to_json(a)}


def operator_from_spec(spec: dict) -> np.ndarray:
    return mat_from_json(spec["matrix"])


# ---------------------------------------------------------------------------
# datasets

def dataset_to_spec(ds) -> dict:
    return {
        "task": ds.name,
        "params": {k: list(v) if isinstance(v, tuple) else v
                   for k, v in ds.params.items()},
        "rep": rep_to_spec(ds.rep),
        "states": [
            {"rho": mat_to_json(s.rho), "label": float(s.label), "meta": s.meta}
            for s in ds.states
        ],
    }


def dataset_from_spec(spec: dict):
    from .tasks import Dataset, LabeledState
    rep = rep_from_spec(spec["rep"])
    states = [LabeledState(mat_from_json(s["rho"]), float(s["label"]),
                           dict(s.get("meta", {})))
              for s in spec["states"]]
    params = {k: tuple(v) if isinstance(v, list) else v
              for k, v in spec.get("params", {}).items()}
    return Dataset(spec["task"], states, rep, params)
