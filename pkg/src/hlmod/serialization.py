"""JSON wire formats for modules, polytopes, torus data, and tuples.

Scalars use the string encoding from :mod:`hlmod.exact`; matrices are lists
of rows of scalar strings.  Importing a module validates its structure
before accepting it, so externally produced module files (for instance
combinatorial intersection cohomology computed elsewhere) can be checked by
the same machinery that handles the built-in constructions.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Matrix, format_scalar, parse_scalar
from .hodge_lefschetz import (
    BasisVector,
    GradedSpace,
    HLModule,
    OperatorFamily,
    PolarizationForm,
    validate_structure,
)
from .polytopes import SimplePolytope, build_polytope
from .report import CheckReport
from .torus import TorusSpec


class ModuleJSONError(ValueError):
    """Malformed module JSON (missing keys, ragged matrices, bad labels)."""


class ModuleCheckError(ValueError):
    """Structurally well-formed module JSON that fails the axiom checks."""

    def __init__(self, report: CheckReport):
        super().__init__("imported module fails validation: " + report.summary_line())
        self.report = report


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[format_scalar(e) for e in row] for row in m.data]


def matrix_from_json(rows, expected_cols: int | None = None) -> Matrix:
    try:
        data = [[parse_scalar(e) for e in row] for row in rows]
    except (ValueError, TypeError) as exc:
        raise ModuleJSONError(f"bad matrix entry: {exc}") from exc
    if data and any(len(r) != len(data[0]) for r in data):
        raise ModuleJSONError("ragged matrix")
    cols = len(data[0]) if data else (expected_cols or 0)
    return Matrix(data, len(data), cols)


def _rational_from_json(s) -> Fraction:
    value = parse_scalar(str(s))
    if not isinstance(value, Fraction):
        raise ModuleJSONError(f"expected a rational, got {s!r}")
    return value


# -- modules -----------------------------------------------------------------


def module_to_json(module: HLModule) -> dict:
    return {
        "weight": module.weight,
        "basis": [
            {"id": v.ident, "ell": v.grade, "p": v.p, "q": v.q}
            for v in module.space.vectors
        ],
        "conjugation": matrix_to_json(module.space.conjugation),
        "form": matrix_to_json(module.form.matrix),
        "generators": [
            {"name": name, "matrix": matrix_to_json(mat)}
            for name, mat in zip(module.family.names, module.family.matrices)
        ],
        "reference": [format_scalar(c) for c in module.reference],
    }


def module_from_json(data: dict, validate: bool = True) -> HLModule:
    """Parse and, by default, validate a module from its JSON form.

    Raises :class:`ModuleJSONError` for malformed data and
    :class:`ModuleCheckError` (carrying the report) when the parsed module
    fails a structural axiom.
    """
    try:
        weight = int(data["weight"])
        basis_rows = data["basis"]
        vectors = tuple(
            BasisVector(int(b["id"]), int(b["ell"]), int(b["p"]), int(b["q"]))
            for b in basis_rows
        )
        n = len(vectors)
        conjugation = matrix_from_json(data["conjugation"], n)
        form = matrix_from_json(data["form"], n)
        names = tuple(str(g["name"]) for g in data["generators"])
        mats = tuple(matrix_from_json(g["matrix"], n) for g in data["generators"])
        reference = tuple(_rational_from_json(c) for c in data["reference"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleJSONError(f"malformed module JSON: {exc}") from exc
    if [v.ident for v in vectors] != list(range(n)):
        raise ModuleJSONError("basis ids must be 0..n-1 in order")
    if conjugation.rows != n or form.rows != n or any(m.rows != n or m.cols != n for m in mats):
        raise ModuleJSONError("matrix dimensions do not match the basis size")
    if len(reference) != len(names):
        raise ModuleJSONError("reference length does not match the generators")
    module = HLModule(
        space=GradedSpace(weight, vectors, conjugation),
        form=PolarizationForm(form, (-1) ** weight),
        family=OperatorFamily(names, mats),
        reference=reference,
    )
    if validate:
        report = validate_structure(module)
        if report.verdict == "input-error":
            raise ModuleJSONError(report.data.get("error", "invalid module"))
        if not report.passed:
            raise ModuleCheckError(report)
    return module


# -- polytopes ----------------------------------------------------------------


def polytope_to_json(p: SimplePolytope) -> dict:
    return {
        "name": p.name,
        "dim": p.dim,
        "normals": [[format_scalar(c) for c in row] for row in p.normals],
        "support": [format_scalar(c) for c in p.support],
    }


def polytope_from_json(data: dict) -> SimplePolytope:
    try:
        name = str(data.get("name", ""))
        dim = int(data["dim"])
        normals = [[_rational_from_json(c) for c in row] for row in data["normals"]]
        support = [_rational_from_json(c) for c in data["support"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleJSONError(f"malformed polytope JSON: {exc}") from exc
    if any(len(row) != dim for row in normals):
        raise ModuleJSONError("normal vectors do not match the stated dimension")
    return build_polytope(normals, support, name)


# -- torus ---------------------------------------------------------------------


def torus_spec_to_json(spec: TorusSpec) -> dict:
    return {
        "dim": spec.dim,
        "hermitians": [matrix_to_json(h) for h in spec.hermitians],
        "reference": [format_scalar(c) for c in spec.reference],
    }


def torus_spec_from_json(data: dict) -> TorusSpec:
    try:
        dim = int(data["dim"])
        hermitians = tuple(matrix_from_json(h, dim) for h in data["hermitians"])
        reference = tuple(_rational_from_json(c) for c in data["reference"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleJSONError(f"malformed torus JSON: {exc}") from exc
    return TorusSpec(dim, hermitians, reference)


# -- operator tuples -----------------------------------------------------------


def tuple_from_json(data) -> list[dict[str, Fraction]]:
    """Tuples as arrays of coefficient maps over generator names.

    Accepts both ``[{"T": {"d1": "1"}}, ...]`` and bare ``[{"d1": "1"}, ...]``.
    """
    out = []
    if not isinstance(data, list):
        raise ModuleJSONError("tuple JSON must be a list")
    for entry in data:
        if not isinstance(entry, dict):
            raise ModuleJSONError("tuple entries must be objects")
        body = entry.get("T", entry)
        if not isinstance(body, dict):
            raise ModuleJSONError("tuple entry 'T' must be an object")
        out.append({str(k): _rational_from_json(v) for k, v in body.items()})
    return out
