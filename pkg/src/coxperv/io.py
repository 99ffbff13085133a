"""JSON encoding of systems, facets, modules and reports.

All scalars are exact strings ("p/q" or "a+b√5"); output is deterministic.
"""
from __future__ import annotations

import json
import os

from . import linalg
from .bisheaf import PervModule
from .coxeter import CoxeterError, CoxeterMatrix, CoxeterSystem, bits, build_system, parse_matrix
from .facets import FacetId, facet_complex
from .scalars import Field, field_by_name


class InputError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def resolve_matrix(source) -> CoxeterMatrix:
    """A preset name, inline JSON, a path to a JSON file, or a decoded dict."""
    try:
        if isinstance(source, str) and not source.strip().startswith("{") and os.path.exists(source):
            return parse_matrix(load_json(source))
        return parse_matrix(source)
    except CoxeterError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def system_name(source) -> object:
    return source if isinstance(source, str) and not source.strip().startswith("{") and not os.path.exists(source) else None


def facet_json(sys: CoxeterSystem, f: FacetId) -> dict:
    return {"rep": sys.word_string(f.rep), "type": bits(f.type)}


def parse_facet(sys: CoxeterSystem, data: dict) -> FacetId:
    rep = sys.parse_word(data["rep"])
    mask = sum(1 << i for i in data["type"])
    return facet_complex(sys).facet(rep, mask)


def matrix_json(m, fld: Field) -> list:
    return linalg.to_strings(m, fld)


def module_to_json(m: PervModule, system=None) -> dict:
    sys_field = system if system is not None else m.system
    if isinstance(sys_field, CoxeterMatrix):
        sys_field = sys_field.to_json()
    return {
        "system": sys_field,
        "dim": m.dim,
        "field": m.field.name,
        "e": {str(k): matrix_json(v, m.field) for k, v in sorted(m.e.items())},
        "rho": {str(k): matrix_json(v, m.field) for k, v in sorted(m.rho.items())},
    }


def _parse_matrix_entries(rows, n: int, fld: Field, what: str):
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        from .bisheaf import ShapeMismatch

        raise ShapeMismatch(f"{what} must be a {n}x{n} array")
    try:
        return linalg.matrix([[fld.parse(x) for x in r] for r in rows], fld, shape=(n, n))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad scalar in {what}: {exc}") from exc


def module_from_json(data: dict, system=None) -> PervModule:
    """Decode a module; ``system`` overrides the file's own "system" field."""
    if not isinstance(data, dict):
        raise InputError("module JSON must be an object")
    try:
        n = int(data["dim"])
        fld = field_by_name(data.get("field", "rational"))
        sys_source = system if system is not None else data.get("system")
        if sys_source is None:
            raise InputError("module names no system; pass --type")
        mat = resolve_matrix(sys_source)
        e = {int(k): _parse_matrix_entries(v, n, fld, f"e[{k}]") for k, v in data.get("e", {}).items()}
        rho = {int(k): _parse_matrix_entries(v, n, fld, f"rho[{k}]") for k, v in data["rho"].items()}
    except KeyError as exc:
        raise InputError(f"module JSON missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError) or type(exc).__name__ == "ShapeMismatch":
            raise
        raise InputError(str(exc)) from exc
    if len(rho) != mat.rank:
        from .bisheaf import ShapeMismatch

        raise ShapeMismatch(f"module has {len(rho)} generator matrices, system rank is {mat.rank}")
    return PervModule(mat, n, e, rho, fld)


def load_system(source, cap: int) -> CoxeterSystem:
    return build_system(resolve_matrix(source), cap=cap)
