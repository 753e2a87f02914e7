"""Command-line front end.

Subcommands build fixtures, import and export module files, and run the
theorem checks with deterministic seeds.  Exit codes: 0 when every check
passes, 1 when a theorem-style check fails (the report carries a witness),
and 2 for invalid input of any kind.  With ``--json`` the reports are
emitted as canonical JSON lines (sorted keys, no timing) so identical
inputs and seeds give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import mixed as mixed_mod
from .descent import descent as descend_module
from .descent import koszul_complex, purity_check
from .exact import format_scalar
from .hodge_lefschetz import (
    ConstructionError,
    HLModule,
    InvalidModuleError,
    PreconditionError,
    lefschetz_decomposition,
    lefschetz_report,
    polarization_check,
    sample_cone_element,
    sample_cone_tuple,
    sl2_complete,
    validate_structure,
)
from .polytopes import (
    PolytopeError,
    af_check,
    build_pkt_module,
    h_vector,
    mixed_volume,
    volume_polynomial,
)
from .report import FAIL, INPUT_ERROR, CheckReport
from .serialization import (
    ModuleCheckError,
    ModuleJSONError,
    module_from_json,
    module_to_json,
    polytope_from_json,
    torus_spec_from_json,
    tuple_from_json,
)
from .torus import TorusSpecError, build_torus_module

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _as_tuple_json(data):
    return data if isinstance(data, list) else [data]


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(reports: list[CheckReport], as_json: bool) -> int:
    reports = sorted(reports, key=lambda r: (r.check, r.to_json()))
    worst = EXIT_PASS
    for rep in reports:
        if as_json:
            print(rep.to_json())
        else:
            print(rep.summary_line())
            for sub in rep.failures():
                print(f"    failed: {sub.name} witness={sub.witness}")
        if rep.verdict == INPUT_ERROR:
            worst = max(worst, EXIT_INPUT)
        elif rep.verdict == FAIL:
            worst = max(worst, EXIT_FAIL)
    return worst


def _sl2_report(module: HLModule) -> CheckReport:
    rep = CheckReport("sl2-completion", "sl2-completion")
    try:
        sl2_complete(module, module.reference)
        rep.add("commutation-relations", True)
    except (PreconditionError, ConstructionError) as exc:
        rep.add("commutation-relations", False, {"error": str(exc)})
    return rep


def _decomposition_report(module: HLModule) -> CheckReport:
    rep = CheckReport("lefschetz-decomposition", "lefschetz-decomposition")
    try:
        for grade in range(0, module.weight + 1):
            primitive, image = lefschetz_decomposition(module, module.reference, grade)
            rep.add(
                f"direct-sum[grade={grade}]",
                True,
                None,
            )
            rep.data[f"dims[grade={grade}]"] = [len(primitive), len(image)]
    except (PreconditionError, ConstructionError) as exc:
        rep.add("direct-sum", False, {"error": str(exc)})
    return rep


def _descent_report(module: HLModule, coeffs) -> CheckReport:
    rep = CheckReport("descent", "descent")
    try:
        result = descend_module(module, coeffs)
        rep.add("descended-module-valid", True)
        rep.data["dims-by-grade"] = {
            str(l): d for l, d in result.module.space.grade_dims().items()
        }
    except (PreconditionError, ConstructionError) as exc:
        rep.add("descended-module-valid", False, {"error": str(exc)})
    return rep


def _module_suite(module: HLModule, rng, tuples: int, full: bool) -> list[CheckReport]:
    reports = [
        validate_structure(module),
        lefschetz_report(module, module.reference),
        polarization_check(module, module.reference),
    ]
    if not full:
        return reports
    k = module.weight
    reports.append(_decomposition_report(module))
    reports.append(_sl2_report(module))
    reports.append(_descent_report(module, module.reference))
    for t in range(1, k + 1):
        for trial in range(tuples):
            entries = sample_cone_tuple(module, rng, t)
            rep = mixed_mod.mixed_hlt_check(module, entries, require_cone=False)
            rep.check = f"mixed-hard-lefschetz[len={t},trial={trial}]"
            reports.append(rep)
            rep = mixed_mod.kernel_weight_bound(module, entries, require_cone=False)
            rep.check = f"kernel-weight-bound[len={t},trial={trial}]"
            reports.append(rep)
    for t in range(0, max(k - 1, 0)):
        for trial in range(tuples):
            entries = sample_cone_tuple(module, rng, t + 1)
            rep = mixed_mod.mixed_decomposition_check(module, entries, require_cone=False)
            rep.check = f"mixed-decomposition[grade={t},trial={trial}]"
            reports.append(rep)
            rep = mixed_mod.mixed_hrr_check(module, entries, require_cone=False)
            rep.check = f"mixed-hodge-riemann[grade={t},trial={trial}]"
            reports.append(rep)
    for length in range(1, 4):
        for trial in range(max(1, tuples // 5)):
            entries = sample_cone_tuple(module, rng, length)
            kc = koszul_complex(module, entries, require_cone=False)
            rep = purity_check(kc)
            rep.check = f"koszul-purity[len={length},trial={trial}]"
            reports.append(rep)
    return reports


def _h_vector_report(module: HLModule) -> CheckReport:
    rep = CheckReport("h-vector", "graded-dimensions")
    try:
        h = h_vector(module)
        rep.add("symmetry-and-unimodality", True)
        rep.data["h"] = list(h)
    except ConstructionError as exc:
        rep.add("symmetry-and-unimodality", False, {"error": str(exc)})
    return rep


def _cmd_polytope(args) -> int:
    data = _load_json(args.input)
    polytope = polytope_from_json(data)
    if args.action == "build":
        nu = volume_polynomial(polytope)
        module = build_pkt_module(polytope, nu)
        summary = {
            "name": polytope.name,
            "dim": polytope.dim,
            "facets": polytope.facet_count,
            "vertices": len(polytope.vertices),
            "h-vector": list(h_vector(module)),
        }
        if args.module_out:
            with open(args.module_out, "w", encoding="utf-8") as fh:
                json.dump(module_to_json(module), fh, sort_keys=True, indent=1)
        print(json.dumps(summary, sort_keys=True) if args.json else summary)
        return EXIT_PASS
    if args.action == "hvector":
        module = build_pkt_module(polytope)
        h = list(h_vector(module))
        print(json.dumps(h) if args.json else " ".join(map(str, h)))
        return EXIT_PASS
    if args.action == "mixed-volume":
        nu = volume_polynomial(polytope)
        supports = [
            [Fraction(str(c)) for c in json.loads(blob)] for blob in args.supports
        ]
        value = mixed_volume(nu, supports)
        print(format_scalar(value))
        return EXIT_PASS
    # action == "check"
    nu = volume_polynomial(polytope)
    module = build_pkt_module(polytope, nu)
    rng = random.Random(args.seed)
    reports = _module_suite(module, rng, args.tuples, args.all)
    reports.append(_h_vector_report(module))
    if args.all and polytope.dim >= 2:
        for trial in range(max(1, args.tuples // 5)):
            c1 = sample_cone_element(module, rng)
            c2 = sample_cone_element(module, rng)
            rest = [list(module.reference)] * (polytope.dim - 2)
            rep = af_check(nu, list(c1), list(c2), rest)
            rep.check = f"alexandrov-fenchel[trial={trial}]"
            reports.append(rep)
    return _emit(reports, args.json)


def _cmd_torus(args) -> int:
    spec = torus_spec_from_json(_load_json(args.input))
    module = build_torus_module(spec)
    if args.action == "build":
        if args.module_out:
            with open(args.module_out, "w", encoding="utf-8") as fh:
                json.dump(module_to_json(module), fh, sort_keys=True, indent=1)
        summary = {
            "dim": spec.dim,
            "generators": len(spec.hermitians),
            "total-dim": module.dim,
        }
        print(json.dumps(summary, sort_keys=True) if args.json else summary)
        return EXIT_PASS
    rng = random.Random(args.seed)
    reports = _module_suite(module, rng, args.tuples, args.all)
    return _emit(reports, args.json)


def _cmd_module(args) -> int:
    if args.action in {"check", "descent", "purity", "mixed-hlt", "mixed-hrr", "import", "export"}:
        module = module_from_json(_load_json(args.input))
    if args.action == "import":
        print(f"ok: module of weight {module.weight}, dimension {module.dim}")
        return EXIT_PASS
    if args.action == "export":
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(module_to_json(module), fh, sort_keys=True, indent=1)
        print(f"wrote {args.output}")
        return EXIT_PASS
    if args.action == "check":
        reports = [
            validate_structure(module),
            lefschetz_report(module, module.reference),
            polarization_check(module, module.reference),
        ]
        return _emit(reports, args.json)
    if args.action == "descent":
        coeffs = module.reference
        if args.ops:
            parsed = tuple_from_json(_as_tuple_json(json.loads(args.ops)))
            coeffs = module.coefficients(parsed[0])
        rep = _descent_report(module, coeffs)
        if args.output and rep.passed:
            result = descend_module(module, coeffs)
            with open(args.output, "w", encoding="utf-8") as fh:
                json.dump(module_to_json(result.module), fh, sort_keys=True, indent=1)
        return _emit([rep], args.json)
    rng = random.Random(args.seed)
    reports: list[CheckReport] = []
    explicit = tuple_from_json(_as_tuple_json(json.loads(args.ops))) if args.ops else None
    if args.action == "purity":
        if explicit is not None:
            kc = koszul_complex(module, explicit)
            reports.append(purity_check(kc))
        else:
            lengths = [int(x) for x in args.lengths.split(",")] if args.lengths else [1, 2, 3]
            for length in lengths:
                for trial in range(args.tuples):
                    entries = sample_cone_tuple(module, rng, length)
                    kc = koszul_complex(module, entries, require_cone=False)
                    rep = purity_check(kc)
                    rep.check = f"koszul-purity[len={length},trial={trial}]"
                    reports.append(rep)
    elif args.action == "mixed-hlt":
        if explicit is not None:
            reports.append(mixed_mod.mixed_hlt_check(module, explicit))
        else:
            for t in range(1, module.weight + 1):
                for trial in range(args.tuples):
                    entries = sample_cone_tuple(module, rng, t)
                    rep = mixed_mod.mixed_hlt_check(module, entries, require_cone=False)
                    rep.check = f"mixed-hard-lefschetz[len={t},trial={trial}]"
                    reports.append(rep)
    elif args.action == "mixed-hrr":
        if explicit is not None:
            reports.append(mixed_mod.mixed_hrr_check(module, explicit))
        else:
            for t in range(0, max(module.weight - 1, 0)):
                for trial in range(args.tuples):
                    entries = sample_cone_tuple(module, rng, t + 1)
                    rep = mixed_mod.mixed_hrr_check(module, entries, require_cone=False)
                    rep.check = f"mixed-hodge-riemann[grade={t},trial={trial}]"
                    reports.append(rep)
    return _emit(reports, args.json)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hlmod",
        description="Build and verify polarized Hodge-Lefschetz modules exactly.",
    )
    sub = parser.add_subparsers(dest="family", required=True)

    poly = sub.add_parser("polytope", help="polytope volume algebras")
    poly.add_argument("action", choices=["build", "check", "mixed-volume", "hvector"])
    poly.add_argument("input", help="polytope JSON file")
    poly.add_argument("--module-out", default=None)
    poly.add_argument("--supports", nargs="*", default=[], help="JSON support vectors")
    poly.add_argument("--all", action="store_true", help="run the full check suite")
    poly.add_argument("--seed", type=int, default=None)
    poly.add_argument("--tuples", type=int, default=25)
    poly.add_argument("--json", action="store_true")
    poly.set_defaults(func=_cmd_polytope)

    torus = sub.add_parser("torus", help="torus cohomology modules")
    torus.add_argument("action", choices=["build", "check"])
    torus.add_argument("input", help="torus JSON file")
    torus.add_argument("--module-out", default=None)
    torus.add_argument("--all", action="store_true")
    torus.add_argument("--seed", type=int, default=None)
    torus.add_argument("--tuples", type=int, default=25)
    torus.add_argument("--json", action="store_true")
    torus.set_defaults(func=_cmd_torus)

    mod = sub.add_parser("module", help="operate on module JSON files")
    mod.add_argument(
        "action",
        choices=["check", "descent", "purity", "mixed-hlt", "mixed-hrr", "import", "export"],
    )
    mod.add_argument("--in", dest="input", required=True)
    mod.add_argument("--out", dest="output", default=None)
    mod.add_argument("--ops", default=None, help="JSON coefficients for one operator")
    mod.add_argument("--seed", type=int, default=None)
    mod.add_argument("--tuples", type=int, default=25)
    mod.add_argument("--lengths", default=None, help="comma-separated Koszul lengths")
    mod.set_defaults(func=_cmd_module, json=False)
    mod.add_argument("--json", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    needs_seed = (
        getattr(args, "action", "") in {"purity", "mixed-hlt", "mixed-hrr"}
        and not getattr(args, "ops", None)
    ) or (getattr(args, "action", "") == "check" and getattr(args, "all", False))
    if needs_seed and args.seed is None:
        print("error: --seed is required for randomized suites", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "seed", None) is None:
        args.seed = 0
    try:
        return args.func(args)
    except ModuleCheckError as exc:
        print(exc.report.summary_line(), file=sys.stderr)
        for sub_check in exc.report.failures():
            print(f"    failed: {sub_check.name} witness={sub_check.witness}", file=sys.stderr)
        return EXIT_FAIL
    except (
        ModuleJSONError,
        PolytopeError,
        TorusSpecError,
        InvalidModuleError,
        PreconditionError,
        FileNotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
