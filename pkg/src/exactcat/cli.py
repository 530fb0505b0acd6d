"""Command-line front end: parse category specs, run suites, emit reports.

Spec files are JSON documents with schema "exactcat/1"; reports are JSON
with schema "exactcat-report/1".  Reports are byte-deterministic across
runs and across --jobs settings: enumeration orders are canonical and
wall-clock timing goes to stderr only.  Exit codes: 0 all verdicts pass,
1 a verification failed, 2 an enumeration bound was refused.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from . import classes as confclasses
from . import quotient as qt
from .approx import AddSubcat, is_pseudo_cluster_tilting, is_self_orthogonal
from .category import Conflation, EnumerationBound, conflation_split
from .conflcat import (
    ConflCategory,
    SplitConflationSubcat,
    SubstructureTag,
    cluster_quotient_harness,
    factor_split0_conflation,
    nonsplit_with_split_ends,
    substructure_member,
    sweep_hom_exactness_biconditional,
    verify_splitting_pseudo_cluster_tilting,
)
from .fflinalg import SUPPORTED_PRIMES, FpMatrix
from .repcat import Quiver, Arrow, RepCategory, RepMor, RepObj

SPEC_SCHEMA = "exactcat/1"
REPORT_SCHEMA = "exactcat-report/1"


class SpecValidationError(Exception):
    """Carries every validation problem found, not just the first."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class SpecDocument:
    path: str
    cat: RepCategory
    objects: dict[str, RepObj]
    subcategories: dict[str, AddSubcat]
    conflations: dict[str, Conflation]
    tasks: list[dict] = field(default_factory=list)


def parse_spec(path: str) -> SpecDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SpecValidationError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise SpecValidationError([f"malformed JSON in {path}: {exc}"]) from exc
    return build_spec(raw, path)


def build_spec(raw: dict, path: str = "<memory>") -> SpecDocument:
    errors: list[str] = []
    if raw.get("schema") != SPEC_SCHEMA:
        errors.append(f"schema must be {SPEC_SCHEMA!r}, got {raw.get('schema')!r}")
    char = raw.get("field", {}).get("char", 2)
    if char not in SUPPORTED_PRIMES:
        errors.append(f"unsupported characteristic {char}; supported: {list(SUPPORTED_PRIMES)}")
        char = 2
    qspec = raw.get("quiver", {})
    vertices = [str(v) for v in qspec.get("vertices", [])]
    arrows = []
    for a in qspec.get("arrows", []):
        name, src, dst = str(a.get("name")), str(a.get("from")), str(a.get("to"))
        if src not in vertices or dst not in vertices:
            errors.append(f"arrow {name}: endpoint not a declared vertex")
        else:
            arrows.append(Arrow(name, src, dst))
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except ValueError as exc:
        errors.append(str(exc))
        quiver = Quiver(tuple(vertices), ())
    cat = RepCategory(quiver, char)

    objects: dict[str, RepObj] = {}
    for name, spec in sorted(raw.get("objects", {}).items()):
        dims = {str(v): int(d) for v, d in spec.get("dims", {}).items()}
        unknown = [v for v in dims if v not in vertices]
        if unknown:
            errors.append(f"object {name}: unknown vertices {unknown}")
            continue
        maps = {}
        bad = False
        for aname, rows in spec.get("maps", {}).items():
            arrow = next((a for a in arrows if a.name == aname), None)
            if arrow is None:
                errors.append(f"object {name}: unknown arrow {aname}")
                bad = True
                continue
            m = FpMatrix(char, rows)
            want = (dims.get(arrow.dst, 0), dims.get(arrow.src, 0))
            if m.a.shape != want:
                errors.append(
                    f"object {name}, arrow {aname}: matrix shape {m.a.shape} does not match {want}"
                )
                bad = True
                continue
            maps[aname] = m
        if bad:
            continue
        try:
            objects[name] = cat.obj(dims, maps, name=name)
        except ValueError as exc:
            errors.append(f"object {name}: {exc}")

    subcategories: dict[str, AddSubcat] = {}
    for name, gens in sorted(raw.get("subcategories", {}).items()):
        missing = [g for g in gens if g not in objects]
        if missing:
            errors.append(f"subcategory {name}: unknown objects {missing}")
            continue
        subcategories[name] = AddSubcat(cat, [objects[g] for g in gens], label=name)

    def parse_mor(cname: str, part: str, spec: dict) -> Optional[RepMor]:
        src_name, dst_name = spec.get("src"), spec.get("dst")
        if src_name not in objects or dst_name not in objects:
            errors.append(f"conflation {cname}.{part}: unknown src/dst object")
            return None
        src, dst = objects[src_name], objects[dst_name]
        comps = {}
        for v, rows in spec.get("comps", {}).items():
            if v not in vertices:
                errors.append(f"conflation {cname}.{part}: unknown vertex {v}")
                return None
            m = FpMatrix(char, rows)
            want = (dst.dims[v], src.dims[v])
            if m.a.shape != want:
                errors.append(
                    f"conflation {cname}.{part}, vertex {v}: component shape {m.a.shape} does not match {want}"
                )
                return None
            comps[v] = m
        try:
            return RepMor(src, dst, comps)
        except ValueError as exc:
            errors.append(f"conflation {cname}.{part}: {exc}")
            return None

    conflations: dict[str, Conflation] = {}
    for name, spec in sorted(raw.get("conflations", {}).items()):
        incl = parse_mor(name, "incl", spec.get("incl", {}))
        proj = parse_mor(name, "proj", spec.get("proj", {}))
        if incl is None or proj is None:
            continue
        try:
            conflations[name] = cat.conflation(incl, proj)
        except ValueError as exc:
            errors.append(f"conflation {name}: {exc}")

    tasks = list(raw.get("tasks", []))
    if errors:
        raise SpecValidationError(errors)
    return SpecDocument(
        path=path,
        cat=cat,
        objects=objects,
        subcategories=subcategories,
        conflations=conflations,
        tasks=tasks,
    )


def serialize_spec(doc: SpecDocument) -> dict:
    """Canonical JSON form; parse(serialize(parse(x))) is a fixed point."""
    cat = doc.cat
    quiver = cat.quiver
    out: dict[str, Any] = {
        "schema": SPEC_SCHEMA,
        "field": {"char": cat.p},
        "quiver": {
            "vertices": list(quiver.vertices),
            "arrows": [{"name": a.name, "from": a.src, "to": a.dst} for a in quiver.arrows],
        },
        "objects": {},
        "subcategories": {},
        "conflations": {},
        "tasks": doc.tasks,
    }
    for name, obj in sorted(doc.objects.items()):
        out["objects"][name] = {
            "dims": {v: obj.dims[v] for v in quiver.vertices if obj.dims[v]},
            "maps": {
                a.name: obj.maps[a.name].a.tolist()
                for a in quiver.arrows
                if obj.dims[a.src] and obj.dims[a.dst]
            },
        }
    for name, sub in sorted(doc.subcategories.items()):
        out["subcategories"][name] = [g.name for g in sub.generators]
    for name, confl in sorted(doc.conflations.items()):
        out["conflations"][name] = {
            "incl": _mor_json(cat, confl.incl),
            "proj": _mor_json(cat, confl.defl),
        }
    return out


def _mor_json(cat: RepCategory, f: RepMor) -> dict:
    return {
        "src": f.src.name or f.src.label,
        "dst": f.dst.name or f.dst.label,
        "comps": {
            v: f.comps[v].a.tolist()
            for v in cat.quiver.vertices
            if f.src.dims[v] and f.dst.dims[v]
        },
    }


def _confl_json(cat, c: Conflation) -> dict:
    a, b, z = c.terms(cat)
    return {
        "terms": [cat.obj_label(a), cat.obj_label(b), cat.obj_label(z)],
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _resolve_sub(doc: SpecDocument, name: Optional[str], command: str) -> AddSubcat:
    if name is None:
        for t in doc.tasks:
            if t.get("command") == command and "subcategory" in t:
                name = t["subcategory"]
                break
    if name is None and len(doc.subcategories) == 1:
        name = next(iter(doc.subcategories))
    if name is None or name not in doc.subcategories:
        raise SpecValidationError([f"{command}: unknown or missing subcategory {name!r}"])
    return doc.subcategories[name]


def cmd_check_pct(doc: SpecDocument, args) -> dict:
    sub = _resolve_sub(doc, args.subcategory, "check-pct")
    if args.testset:
        testset = [doc.objects[n] for n in args.testset.split(",")]
    else:
        testset = [doc.objects[n] for n in sorted(doc.objects)]
    report = is_pseudo_cluster_tilting(sub, testset)
    confls = list(doc.conflations.values())
    orth = is_self_orthogonal(sub, confls)
    return {
        "name": "check-pct",
        "subcategory": sub.label,
        "verdict": "pass" if report.passed else "fail",
        "testset": report.testset_labels,
        "failures": report.failures,
        "witness_objects": sorted(report.witnesses),
        "self_orthogonal_on_named_conflations": orth.passed,
        "note": report.note,
    }


def cmd_quotient(doc: SpecDocument, args) -> dict:
    sub = _resolve_sub(doc, args.subcategory, "quotient")
    names = sorted(doc.objects)
    table = {
        x: {y: qt.qhom(sub, doc.objects[x], doc.objects[y]).dim for y in names} for x in names
    }
    sample = [doc.objects[n] for n in names]
    semi = qt.verify_semiabelian(sub, sample, cap=args.cap, seed=args.seed)
    ab = qt.verify_abelian(sub, sample, cap=args.cap, seed=args.seed)
    ok = semi.passed and ab.passed
    verdict = "pass" if ok else "fail"
    if ok and (semi.sampled or ab.sampled):
        verdict = "sampled-pass"
    return {
        "name": "quotient",
        "subcategory": sub.label,
        "verdict": verdict,
        "qhom_table": table,
        "semiabelian": {"verdict": semi.verdict, "checked": semi.checked, "failures": semi.failures},
        "abelian": {"verdict": ab.verdict, "checked": ab.checked, "failures": ab.failures},
    }


def cmd_classes(doc: SpecDocument, args) -> dict:
    sub = _resolve_sub(doc, args.subcategory, "classes")
    bound = args.bound if args.bound is not None else _task_default(doc, "classes", "bound", 5)
    names = [args.conflation] if args.conflation else sorted(doc.conflations)
    items = []
    ok = True
    for name in names:
        if name not in doc.conflations:
            raise SpecValidationError([f"classes: unknown conflation {name!r}"])
        c = doc.conflations[name]
        s_res = confclasses.in_class_s(c, sub, args.subobject_bound)
        t_res = confclasses.in_class_t(c, sub, args.subobject_bound)
        cov, contra = confclasses.hom_exactness_sufficient(c, sub)
        confclasses.crosscheck_sufficiency(c, sub, args.subobject_bound)
        split = conflation_split(sub.cat, c) is not None
        items.append(
            {
                "conflation": name,
                "terms": _confl_json(sub.cat, c)["terms"],
                "splits": split,
                "in_class_S": s_res.is_member,
                "in_class_T": t_res.is_member,
                "class_S_search": [
                    {"subobject": lab, "column_exact": colv, "row_exact": rowv}
                    for lab, colv, rowv in s_res.examined
                ],
                "class_T_search": [
                    {"quotient": lab, "column_exact": colv, "row_exact": rowv}
                    for lab, colv, rowv in t_res.examined
                ],
                "hom_exact": {"covariant": cov, "contravariant": contra},
            }
        )
    sample = [doc.objects[n] for n in sorted(doc.objects)]
    cross = confclasses.abelianness_crosscheck(
        sub, sample, bound=bound, subobject_bound=args.subobject_bound, cap=args.cap, seed=args.seed
    )
    ok = ok and cross.passed
    report = {
        "name": "classes",
        "subcategory": sub.label,
        "verdict": "pass" if ok else "fail",
        "bound": bound,
        "memberships": items,
        "crosscheck": {
            "self_orthogonal_wrt_S": cross.self_orthogonal_wrt_s,
            "abelian": cross.abelian.verdict,
            "consistent": cross.consistent,
            "conflations_examined": cross.conflations_examined,
            "nonsplit_class_S_members": cross.nonsplit_members,
            "failures": cross.failures,
        },
    }
    tries = getattr(args, "search_random", 0)
    if tries:
        hunt = confclasses.random_crosscheck_search(
            sub.cat, sample, sample, tries=tries, seed=args.seed, cap=args.cap
        )
        report["random_search"] = {
            "counterexample_found": hunt.counterexample_found,
            "detail": hunt.detail,
        }
        if hunt.counterexample_found:
            report["verdict"] = "fail"
    return report


def _task_default(doc: SpecDocument, command: str, key: str, fallback):
    for t in doc.tasks:
        if t.get("command") == command and key in t:
            return t[key]
    return fallback


def cmd_confl(doc: SpecDocument, args) -> dict:
    ecat = ConflCategory(doc.cat)
    bound = args.bound if args.bound is not None else _task_default(doc, "confl", "bound", 1)
    test_bound = (
        args.test_bound
        if args.test_bound is not None
        else _task_default(doc, "confl", "test_bound", min(bound, 1))
    )
    harness_bound = _task_default(doc, "confl", "harness_bound", min(bound, 1))
    pct = verify_splitting_pseudo_cluster_tilting(ecat, bound=bound, test_bound=test_bound, jobs=args.jobs)
    bic = sweep_hom_exactness_biconditional(ecat, bound=bound, test_bound=test_bound, jobs=args.jobs)
    harness = cluster_quotient_harness(ecat, bound=harness_bound, cap=args.cap, seed=args.seed)
    sub = SplitConflationSubcat(ecat)
    factored = 0
    for x in ecat.enumerate_objects(min(bound, 1)):
        dses = sub._precover_data(x).dses
        factor_split0_conflation(ecat, sub, dses)
        factored += 1
    try:
        obstruction = nonsplit_with_split_ends(ecat)
        obstruction_info = {
            "middle_degree_terms": _confl_json(doc.cat, ecat.degree_component(obstruction, 2)),
            "in_full": substructure_member(ecat, obstruction, SubstructureTag.FULL),
            "in_split0": substructure_member(ecat, obstruction, SubstructureTag.SPLIT0),
        }
    except ValueError:
        obstruction_info = None
    ok = pct.passed and bic.passed and harness.passed and obstruction_info is not None
    return {
        "name": "confl",
        "verdict": "pass" if ok else "fail",
        "bound": bound,
        "test_bound": test_bound,
        "split_pseudo_cluster_tilting": {
            "verdict": "pass" if pct.passed else "fail",
            "objects_checked": pct.objects_checked,
            "lift_tests": pct.lift_tests,
            "failures": pct.failures,
        },
        "hom_exactness_biconditional": {
            "verdict": "pass" if bic.passed else "fail",
            "checked": bic.checked,
            "failures": bic.failures,
        },
        "inflation_factorizations": factored,
        "cluster_quotient": {
            "verdict": "pass" if harness.passed else "fail",
            "abelian": harness.abelian_verdict,
            "split0_sequences_checked": harness.split0_sequences_checked,
            "obstruction_found": harness.obstruction_found,
            "substructures_separated": harness.separated,
            "substructures": [
                {
                    "tag": v.tag,
                    "pseudo_cluster_tilting": v.pseudo_cluster_tilting,
                    "self_orthogonal": v.self_orthogonal,
                    "quotient_abelian": v.quotient_abelian,
                    "cluster_quotient": v.cluster_quotient,
                    "consistent": v.consistent,
                }
                for v in harness.verdicts
            ],
            "failures": harness.failures,
            "note": harness.note,
        },
        "obstruction": obstruction_info,
    }


def cmd_iso_agreement(doc: SpecDocument, args) -> dict:
    sample = [doc.objects[n] for n in sorted(doc.objects)]
    items = []
    ok = True
    for name in sorted(doc.subcategories):
        sub = doc.subcategories[name]
        rep = qt.iso_agreement_sweep(sub, sample, cap=args.cap, seed=args.seed)
        ok = ok and rep.passed
        items.append(
            {
                "subcategory": name,
                "verdict": rep.verdict,
                "checked": rep.checked,
                "failures": rep.failures,
            }
        )
    return {"name": "iso-agreement", "verdict": "pass" if ok else "fail", "subcategories": items}


def _fixture_path(name: str) -> str:
    return str(resources.files("exactcat.fixtures") / name)


def cmd_verify_paper(args) -> dict:
    """Run every suite on the bundled fixtures."""
    t0 = time.monotonic()
    a3 = parse_spec(_fixture_path("a3_projinj.json"))
    a2 = parse_spec(_fixture_path("a2_base.json"))
    tasks = []
    ns = argparse.Namespace(**vars(args))
    ns.subcategory = "P"
    ns.testset = None
    ns.conflation = None
    tasks.append(_tagged("a3", cmd_check_pct(a3, ns)))
    tasks.append(_tagged("a3", cmd_quotient(a3, ns)))
    ns.bound = 5
    tasks.append(_tagged("a3", cmd_classes(a3, ns)))
    tasks.append(_tagged("a3", cmd_iso_agreement(a3, ns)))
    ns2 = argparse.Namespace(**vars(args))
    ns2.subcategory = "all"
    ns2.testset = None
    ns2.conflation = None
    ns2.bound = 2 if args.bound is None else args.bound
    ns2.test_bound = args.test_bound
    tasks.append(_tagged("a2", cmd_confl(a2, ns2)))
    ns2.bound = 4
    tasks.append(_tagged("a2", cmd_classes(a2, ns2)))
    tasks.append(_tagged("a2", cmd_iso_agreement(a2, ns2)))
    verdicts = {t["verdict"] for t in tasks}
    ok = verdicts <= {"pass", "sampled-pass"}
    print(f"verify-paper wall time: {time.monotonic() - t0:.1f}s", file=sys.stderr)
    return {
        "name": "verify-paper",
        "verdict": "pass" if ok else "fail",
        "fixtures": ["a2_base.json", "a3_projinj.json"],
        "tasks": tasks,
    }


def _tagged(fixture: str, report: dict) -> dict:
    report["fixture"] = fixture
    return report


# ---------------------------------------------------------------------------
# rendering and entry point
# ---------------------------------------------------------------------------

def render_text(report: dict, out) -> None:
    def walk(node, indent=0):
        pad = "  " * indent
        if isinstance(node, dict):
            for k, v in node.items():
                if isinstance(v, (dict, list)) and v:
                    print(f"{pad}{k}:", file=out)
                    walk(v, indent + 1)
                else:
                    print(f"{pad}{k}: {v}", file=out)
        elif isinstance(node, list):
            for item in node:
                if isinstance(item, (dict, list)):
                    walk(item, indent)
                    print(f"{pad}-", file=out)
                else:
                    print(f"{pad}- {item}", file=out)

    walk(report)


EXIT_BY_VERDICT = {"pass": 0, "sampled-pass": 0, "fail": 1, "refused-bound": 2}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="exactcat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_spec=True):
        if with_spec:
            p.add_argument("spec", help="JSON spec file (schema exactcat/1)")
        p.add_argument("--bound", type=int, default=None, help="enumeration bound")
        p.add_argument("--test-bound", dest="test_bound", type=int, default=None)
        p.add_argument("--subobject-bound", dest="subobject_bound", type=int, default=8)
        p.add_argument("--cap", type=int, default=4096, help="hom-space enumeration cap")
        p.add_argument("--seed", type=int, default=0, help="sampling seed")
        p.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--out", default=None, help="write the report to a file")

    p = sub.add_parser("check-pct", help="precover/preenvelope conflation conditions")
    common(p)
    p.add_argument("--subcategory", default=None)
    p.add_argument("--testset", default=None, help="comma-separated object names")

    p = sub.add_parser("quotient", help="qhom table and semi-abelian/abelian certificates")
    common(p)
    p.add_argument("--subcategory", default=None)

    p = sub.add_parser("classes", help="conflation class memberships and crosscheck")
    common(p)
    p.add_argument("--subcategory", default=None)
    p.add_argument("--conflation", default=None)
    p.add_argument(
        "--search-random",
        dest="search_random",
        type=int,
        default=0,
        help="also hunt for a non-abelian counterexample among N random subcategories",
    )

    p = sub.add_parser("confl", help="conflation-category harnesses")
    common(p)

    p = sub.add_parser("iso-agreement", help="two independent iso tests must agree")
    common(p)

    p = sub.add_parser("verify-paper", help="run all suites on the bundled fixtures")
    common(p, with_spec=False)

    args = parser.parse_args(argv)
    try:
        if args.command == "verify-paper":
            report = cmd_verify_paper(args)
        else:
            doc = parse_spec(args.spec)
            handler = {
                "check-pct": cmd_check_pct,
                "quotient": cmd_quotient,
                "classes": cmd_classes,
                "confl": cmd_confl,
                "iso-agreement": cmd_iso_agreement,
            }[args.command]
            report = handler(doc, args)
    except SpecValidationError as exc:
        report = {"name": args.command, "verdict": "fail", "errors": exc.errors}
    except EnumerationBound as exc:
        report = {
            "name": args.command,
            "verdict": "refused-bound",
            "error": str(exc),
            "required": exc.required,
        }
    payload = {"schema": REPORT_SCHEMA, "command": args.command, "report": report}
    payload["verdict"] = report["verdict"]
    payload["exit_code"] = EXIT_BY_VERDICT[report["verdict"]]
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            if args.format == "json":
                fh.write(text)
            else:
                render_text(payload, fh)
    else:
        if args.format == "json":
            sys.stdout.write(text)
        else:
            render_text(payload, sys.stdout)
    return payload["exit_code"]


if __name__ == "__main__":
    raise SystemExit(main())
