"""Batch front door: ingest a workspace document, run verification jobs,
emit human-readable lines plus a machine-readable JSON report.

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 parse error,
3 validation error, 4 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import DEFAULT_CAP, algebra_to_doc
from .classify import decomposition_report, search_exchange_counterexample
from .deformation import (
    clean_decompose_def,
    def_mul,
    def_one,
    flatten,
    invert_def,
    lift_idempotent_central,
    lift_idempotent_newton,
    obstruction_probe,
    t_in_radical_check,
)
from .documents import Workspace, builtin_catalog_document, dump_report, key_str
from .errors import (
    AssertionFailure,
    CapExceeded,
    ParseError,
    SelfCheckFailed,
    ValidationFailure,
    ZnAlgError,
)
from .extension import build_extension, verify_extension_theorems
from .hochschild import cohomology_dims, regular_bimodule, zero_cochain
from .poset import build_shriek, classify_shriek, triangular_ideal_facts

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CAP = 4


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_PARSE
    try:
        report = dispatch(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValidationFailure as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (AssertionFailure, SelfCheckFailed) as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except ZnAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION

    emit(report, args)
    failed = [a for a in report.get("assertions", []) if not a["passed"]]
    return EXIT_ASSERTION if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="znalg",
        description="exact verification workbench for finite Z_n-algebras")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="element-enumeration refusal threshold")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker cap (runs are deterministic regardless)")
    parser.add_argument("--report", help="write the JSON report to this path")
    parser.add_argument("--modulus-override", type=int, default=None,
                        help="reinterpret loaded algebras over this modulus "
                             "(rejected if validation fails)")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run a named job from a document")
    run.add_argument("document")
    run.add_argument("job")

    cat = sub.add_parser("catalog", help="emit the built-in examples document")
    cat.add_argument("--out", help="write the document here instead of stdout")

    classify = sub.add_parser("classify", help="full flag report for an algebra")
    classify.add_argument("--doc", required=True)
    classify.add_argument("--algebra", required=True)

    ext = sub.add_parser("extend", help="build an extension carrier")
    ext.add_argument("--doc", required=True)
    ext.add_argument("--algebra", required=True)
    ext.add_argument("--bimodule", required=True)
    ext.add_argument("--cochain")

    extv = sub.add_parser("extend-verify", help="run the transfer suites")
    extv.add_argument("--doc", required=True)
    extv.add_argument("--algebra", required=True)
    extv.add_argument("--bimodule", required=True)
    extv.add_argument("--cochain")

    deform = sub.add_parser("deform", help="deformation operations")
    deform.add_argument("action", choices=[
        "validate", "invert", "lift", "probe", "flatten", "clean-decompose"])
    deform.add_argument("--doc", required=True)
    deform.add_argument("--deformation", required=True)
    deform.add_argument("--element", help="JSON coefficient list")
    deform.add_argument("--idempotent", help="JSON coordinate list")
    deform.add_argument("--depth", type=int, default=None)
    deform.add_argument("--order", type=int, default=None,
                        help="override the truncation order")

    shriek = sub.add_parser("shriek", help="assemble and verify a poset algebra")
    shriek.add_argument("--doc", required=True)
    shriek.add_argument("--presheaf", required=True)

    coh = sub.add_parser("cohomology", help="cocycle/coboundary dimensions")
    coh.add_argument("--doc", required=True)
    coh.add_argument("--algebra")
    coh.add_argument("--presheaf")
    coh.add_argument("--degree", type=int, default=2)
    coh.add_argument("--linalg-cap", type=int, default=None)

    search = sub.add_parser("search-open-question",
                            help="scan exchange rings for one-sided witnesses")
    search.add_argument("--doc", required=True)
    search.add_argument("--algebras", nargs="+", required=True)

    return parser


def dispatch(args):
    if args.command == "catalog":
        doc = builtin_catalog_document()
        text = json.dumps(doc, indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return {"kind": "catalog", "assertions": [],
                "results": {"objects": sorted(doc)}}

    if args.command == "run":
        ws = Workspace.load(args.document)
        spec = ws.job(args.job)
        return execute_job(ws, args.job, spec, args)

    ws = Workspace.load(getattr(args, "doc"))
    spec = command_to_job(args)
    return execute_job(ws, args.command, spec, args)


def command_to_job(args):
    if args.command == "classify":
        return {"kind": "classify", "algebra": args.algebra}
    if args.command == "extend":
        return {"kind": "extend", "algebra": args.algebra,
                "bimodule": args.bimodule, "cochain": args.cochain}
    if args.command == "extend-verify":
        return {"kind": "extend-verify", "algebra": args.algebra,
                "bimodule": args.bimodule, "cochain": args.cochain}
    if args.command == "deform":
        return {"kind": f"deform-{args.action}",
                "deformation": args.deformation,
                "element": args.element, "idempotent": args.idempotent,
                "depth": args.depth, "order": args.order}
    if args.command == "shriek":
        return {"kind": "shriek", "presheaf": args.presheaf}
    if args.command == "cohomology":
        return {"kind": "cohomology", "algebra": args.algebra,
                "presheaf": args.presheaf, "degree": args.degree,
                "linalg_cap": getattr(args, "linalg_cap", None)}
    if args.command == "search-open-question":
        return {"kind": "search-open-question", "algebras": args.algebras}
    raise ParseError(f"unknown command {args.command!r}")


def execute_job(ws, name, spec, args):
    start = time.monotonic()
    kind = spec["kind"]
    handler = JOB_HANDLERS.get(kind)
    if handler is None:
        raise ParseError(f"unknown job kind {kind!r}")
    cap = getattr(args, "cap", DEFAULT_CAP)
    if getattr(args, "threads", 1) < 1:
        raise ParseError("--threads must be at least 1")
    report = {
        "job": name,
        "kind": kind,
        "settings": {"cap": cap, "threads": getattr(args, "threads", 1)},
        "assertions": [],
        "results": {},
    }
    if getattr(args, "modulus_override", None):
        ws = _override_modulus(ws, args.modulus_override)
    handler(ws, spec, cap, report)
    report["timing"] = {"elapsed_s": round(time.monotonic() - start, 3)}
    return report


def _override_modulus(ws, modulus):
    from .algebra import validate_algebra
    doc = dict(ws.doc)
    algebras = {}
    for aname, aspec in doc.get("algebras", {}).items():
        new_spec = dict(aspec)
        new_spec["modulus"] = modulus
        validate_algebra(new_spec, name=aname)  # raises if it breaks laws
        algebras[aname] = new_spec
    doc["algebras"] = algebras
    return Workspace(doc)


def _assert(report, clause, passed, **details):
    entry = {"clause": clause, "passed": bool(passed)}
    if details:
        entry["details"] = details
    report["assertions"].append(entry)


def job_classify(ws, spec, cap, report):
    A = ws.algebra(spec["algebra"])
    rep = decomposition_report(A, cap)
    report["results"]["algebra"] = A.name
    report["results"]["flags"] = rep.flags
    report["results"]["counts"] = {
        "idempotents": len(rep.idempotents),
        "units": len(rep.units),
        "nilpotents": len(rep.nilpotents),
    }
    report["results"]["failures"] = {
        flag: {k: (key_str(v) if isinstance(v, tuple) else v)
               for k, v in info.items() if k in ("element", "count")}
        for flag, info in rep.failures.items()}
    report["results"]["witnesses"] = {
        key_str(a): {
            k: ([key_str(part) for part in v] if isinstance(v, tuple) else v)
            for k, v in rec.items()}
        for a, rec in rep.witnesses.items()}
    _assert(report, "clean-implies-exchange",
            (not rep.flags["clean"]) or rep.flags["exchange"])
    _assert(report, "uniquely-clean-implies-clean",
            (not rep.flags["uniquely_clean"]) or rep.flags["clean"])
    _assert(report, "uniquely-nil-clean-implies-nil-clean",
            (not rep.flags["uniquely_nil_clean"]) or rep.flags["nil_clean"])


def _resolve_extension(ws, spec):
    A = ws.algebra(spec["algebra"])
    M = ws.bimodule(spec["bimodule"])
    if spec.get("cochain"):
        f = ws.cochain(spec["cochain"])
    else:
        f = zero_cochain(M, 2)
    return A, M, f


def job_extend(ws, spec, cap, report):
    A, M, f = _resolve_extension(ws, spec)
    B = build_extension(A, M, f)
    report["results"]["carrier"] = algebra_to_doc(B.carrier)
    _assert(report, "carrier-certified", True, rank=B.carrier.rank)


def job_extend_verify(ws, spec, cap, report):
    A, M, f = _resolve_extension(ws, spec)
    rep = verify_extension_theorems(A, M, f, cap)
    report["results"]["carrier"] = rep.carrier_name
    for clause in rep.clauses:
        _assert(report, clause.tag, clause.passed, **clause.details)


def _resolve_deformation(ws, spec):
    D = ws.deformation(spec["deformation"])
    if spec.get("order") and spec["order"] != D.order:
        from .deformation import TruncatedDeformation, validate_deformation
        cochains = list(D.cochains[:spec["order"] - 1])
        zero_table = [[[0] * D.base.rank for _ in range(D.base.rank)]
                      for _ in range(D.base.rank)]
        while len(cochains) < spec["order"] - 1:
            cochains.append(zero_table)
        D = validate_deformation(TruncatedDeformation(
            D.base, spec["order"], cochains, name=D.name))
    return D


def _parse_def_element(D, text):
    if not text:
        raise ParseError("this action needs --element")
    try:
        coeffs = json.loads(text)
        return tuple(D.base.coerce(c) for c in coeffs)
    except (ValueError, TypeError, ZnAlgError) as exc:
        raise ParseError(f"bad element: {exc}")


def job_deform_validate(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    rc = t_in_radical_check(D, cap)
    report["results"]["deformation"] = D.name
    report["results"]["order"] = D.order
    _assert(report, "deformation-valid", True)
    _assert(report, "t-in-radical-structural", rc.structural_ok)
    _assert(report, "t-in-radical-brute-force", rc.brute_ok)


def job_deform_invert(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    f = _parse_def_element(D, spec.get("element"))
    g = invert_def(D, f)
    report["results"]["inverse"] = [list(c) for c in g]
    certified = (def_mul(D, f, g) == def_one(D)
                 and def_mul(D, g, f) == def_one(D))
    _assert(report, "inverse-two-sided", certified)


def job_deform_lift(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    if not spec.get("idempotent"):
        raise ParseError("lift needs --idempotent")
    try:
        e = D.base.coerce(json.loads(spec["idempotent"]))
    except (ValueError, TypeError, ZnAlgError) as exc:
        raise ParseError(f"bad idempotent: {exc}")
    g, iterations = lift_idempotent_newton(D, e)
    bound = (D.order - 1).bit_length() + 1
    report["results"]["lift"] = [list(c) for c in g]
    report["results"]["iterations"] = iterations
    _assert(report, "newton-within-bound", iterations <= bound,
            iterations=iterations, bound=bound)
    central = all(D.base.mul(e, D.base.basis(i)) == D.base.mul(D.base.basis(i), e)
                  for i in range(D.base.rank))
    if central:
        _assert(report, "central-recursion-matches-newton",
                lift_idempotent_central(D, e) == g)


def job_deform_probe(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    if not spec.get("idempotent"):
        raise ParseError("probe needs --idempotent")
    try:
        e = D.base.coerce(json.loads(spec["idempotent"]))
    except (ValueError, TypeError, ZnAlgError) as exc:
        raise ParseError(f"bad idempotent: {exc}")
    rep = obstruction_probe(D, e, spec.get("depth"))
    report["results"]["orders"] = [
        {"order": k, "commutes": c, "solves": s} for k, c, s in rep.orders]
    report["results"]["first_failure"] = rep.first_failure
    _assert(report, "orders-one-and-two-solvable",
            all(s for k, _c, s in rep.orders if k <= 2))


def job_deform_flatten(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    F = flatten(D, cap)
    report["results"]["carrier"] = algebra_to_doc(F)
    _assert(report, "flattened-model-certified", True, rank=F.rank)


def job_deform_clean_decompose(ws, spec, cap, report):
    D = _resolve_deformation(ws, spec)
    h = _parse_def_element(D, spec.get("element"))
    e_t, u_t = clean_decompose_def(D, h, cap)
    report["results"]["idempotent_part"] = [list(c) for c in e_t]
    report["results"]["unit_part"] = [list(c) for c in u_t]
    _assert(report, "decomposition-certified", True)


def job_shriek(ws, spec, cap, report):
    F = ws.presheaf(spec["presheaf"])
    PA = build_shriek(F, cap)
    report["results"]["carrier"] = algebra_to_doc(PA.carrier)
    facts = triangular_ideal_facts(PA, cap)
    _assert(report, "strict-blocks-form-ideal", facts.is_ideal)
    _assert(report, "ideal-nilpotency-within-chain-bound",
            facts.nilpotency_index <= facts.longest_chain,
            index=facts.nilpotency_index, chain=facts.longest_chain)
    if facts.quotient_matches_product is not None:
        _assert(report, "quotient-is-stalk-product",
                facts.quotient_matches_product)
    if facts.inside_radical is not None:
        _assert(report, "ideal-inside-radical", facts.inside_radical)
    shriek_rep = classify_shriek(PA, cap)
    report["results"]["stalk_flags"] = shriek_rep.stalk_flags
    report["results"]["carrier_flags"] = shriek_rep.carrier_flags
    for key, value in shriek_rep.biconditionals.items():
        if value is not None:
            _assert(report, f"{key.replace('_', '-')}-transfer", value)


def job_cohomology(ws, spec, cap, report):
    degree = int(spec.get("degree", 2))
    linalg_cap = spec.get("linalg_cap")
    if spec.get("presheaf"):
        PA = build_shriek(ws.presheaf(spec["presheaf"]), cap)
        A = PA.carrier
    elif spec.get("algebra"):
        A = ws.algebra(spec["algebra"])
    else:
        raise ParseError("cohomology needs --algebra or --presheaf")
    M = regular_bimodule(A)
    kwargs = {} if linalg_cap is None else {"linalg_cap": linalg_cap}
    dims = cohomology_dims(A, M, degree, **kwargs)
    report["results"]["algebra"] = A.name
    report["results"]["degree"] = dims.degree
    report["results"]["dim_cocycles"] = dims.dim_cocycles
    report["results"]["dim_coboundaries"] = dims.dim_coboundaries
    report["results"]["dim_h"] = dims.dim_h
    _assert(report, "dimension-accounting",
            dims.dim_h == dims.dim_cocycles - dims.dim_coboundaries
            and dims.dim_h >= 0)


def job_search_open_question(ws, spec, cap, report):
    algebras = [ws.algebra(name) for name in spec["algebras"]]
    result = search_exchange_counterexample(algebras, cap)
    entries = []
    for entry in result.entries:
        row = {"algebra": entry["algebra"]}
        if "skipped" in entry:
            row["skipped"] = entry["skipped"]
        else:
            row["exchange"] = entry["exchange"]
            row["hits"] = [[key_str(a), key_str(e)]
                           for a, e in entry.get("hits", [])]
        entries.append(row)
    report["results"]["entries"] = entries
    report["results"]["total_hits"] = result.total_hits
    _assert(report, "scan-completed", True, evidence_only=True)


JOB_HANDLERS = {
    "classify": job_classify,
    "extend": job_extend,
    "extend-verify": job_extend_verify,
    "deform-validate": job_deform_validate,
    "deform-invert": job_deform_invert,
    "deform-lift": job_deform_lift,
    "deform-probe": job_deform_probe,
    "deform-flatten": job_deform_flatten,
    "deform-clean-decompose": job_deform_clean_decompose,
    "shriek": job_shriek,
    "cohomology": job_cohomology,
    "search-open-question": job_search_open_question,
}


def emit(report, args):
    if report.get("kind") == "catalog" and not getattr(args, "out", None):
        return  # document already printed
    for entry in report.get("assertions", []):
        mark = "PASS" if entry["passed"] else "FAIL"
        details = entry.get("details")
        suffix = f"  {details}" if details else ""
        print(f"[{mark}] {entry['clause']}{suffix}")
    results = report.get("results", {})
    for key in sorted(results):
        value = results[key]
        if isinstance(value, (str, int, float, bool)) or value is None:
            print(f"{key}: {value}")
    path = getattr(args, "report", None)
    if path:
        with open(path, "w") as fh:
            fh.write(dump_report(report) + "\n")


if __name__ == "__main__":
    sys.exit(main())
