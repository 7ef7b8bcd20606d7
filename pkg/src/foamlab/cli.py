"""Command line entry point: ``foamlab validate|family|enumerate``.

Exit codes: 0 ok, 1 validation or mathematical failure, 2 parse or schema
error, 3 guardrail exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import Limits, load_limits
from .docio import AUTO, InputDocument, dumps, expansion_from_dict, load_document
from .errors import ExpansionError, FoamlabError, LimitError, ParseError
from .famforge import build_family, family_invariants, quotient_checks, verify_axioms
from .foamkit import assemble_compressed, expand
from .permcore import Permutation
from .realcover import (admissibility_diagnosis, choose_lift, count_ovals, genus_rh,
                        involution_lifts, is_lift, validate_monodromy)
from .survey import check_corollaries, enumerate_families, extremal_report, family_key

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3


class CommandFailure(Exception):
    """Raised after a report was produced to request exit code 1."""


def _limits_for(doc: InputDocument) -> Limits:
    limits = load_limits()
    if doc.limits:
        limits = limits.updated(doc.limits)
    worst = max(c.degree for c in doc.components)
    if worst > limits.document_degree:
        raise LimitError(f"degree {worst} exceeds the document limit {limits.document_degree}")
    if len(doc.components) > limits.document_components:
        raise LimitError(f"{len(doc.components)} components exceed the document limit "
                         f"{limits.document_components}")
    return limits


def _images(p: Permutation | None):
    return None if p is None else list(p.images)


def _emit(report: dict, lines: list[str], fmt: str, out) -> None:
    if fmt == "json":
        out.write(dumps(report))
    else:
        out.write("\n".join(lines) + "\n")


# -- validate ---------------------------------------------------------------

def run_validate(doc: InputDocument) -> tuple[dict, list[str], bool]:
    limits = _limits_for(doc)
    ok = True
    comps_out, lines = [], [f"base: n = {doc.n}"]
    covers = []
    for spec in doc.components:
        c = spec.cover()
        mono = validate_monodromy(c)
        entry = {"name": spec.name, "degree": spec.degree, "product_identity": mono.product_identity,
                 "transitive": mono.transitive}
        if not mono.ok:
            ok = False
            entry["problems"] = mono.problems()
            lines.append(f"{spec.name}: FAIL " + "; ".join(mono.problems()))
            comps_out.append(entry)
            continue
        lifts = involution_lifts(c)
        entry["lift_count"] = len(lifts)
        if spec.lift == AUTO:
            t = choose_lift(c)
            entry["lift_source"] = "auto"
        else:
            t = spec.lift if is_lift(c, spec.lift) else None
            entry["lift_source"] = "given"
        entry["lift"] = _images(t)
        if t is None:
            ok = False
            why = "the real structure does not lift" if not lifts else "the given lift is invalid"
            entry["problems"] = [why]
            lines.append(f"{spec.name}: FAIL {why}")
            comps_out.append(entry)
            continue
        c = c.with_lift(t)
        why = admissibility_diagnosis(c)
        entry.update({"genus": genus_rh(c), "ovals": count_ovals(c).k, "admissible": why is None})
        status = "ok" if why is None else "FAIL"
        lines.append(f"{spec.name}: {status} degree {spec.degree}, genus {entry['genus']}, "
                     f"lift {t.cycle_string()} ({entry['lift_source']}), {entry['ovals']} oval(s)"
                     + ("" if why is None else f"; inadmissible (family axiom 5): {why}"))
        if why is not None:
            ok = False
            entry["problems"] = [f"inadmissible (family axiom 5): {why}"]
        comps_out.append(entry)
        covers.append(c)

    report: dict = {"foamlab_version": __version__, "command": "validate", "components": comps_out}
    if ok:
        foam = assemble_compressed(doc.base, covers)
        report["foam"] = foam.report.as_dict()
        lines.append(_foam_line("foam", foam.report))
        ok = foam.report.classification == "foam"
        if doc.expansion is not None:
            try:
                expanded = expand(foam, expansion_from_dict(doc.expansion))
            except ExpansionError as exc:
                report["expanded_foam"] = {"error": str(exc)}
                lines.append(f"expanded foam: FAIL {exc}")
                ok = False
            else:
                report["expanded_foam"] = expanded.report.as_dict()
                lines.append(_foam_line("expanded foam", expanded.report))
                ok = ok and expanded.report.classification == "foam"
    else:
        report["foam"] = None
        lines.append("foam: not assembled, component checks failed")
    report["all_pass"] = ok
    lines.append("result: " + ("all checks pass" if ok else "validation failed"))
    return report, lines, ok


def _foam_line(label: str, rep) -> str:
    if rep.classification == "foam":
        return f"{label}: conditions (a)-(d) pass, connected"
    return f"{label}: {rep.classification}; " + "; ".join(rep.messages)


# -- family -----------------------------------------------------------------

def run_family(doc: InputDocument) -> tuple[dict, list[str]]:
    limits = _limits_for(doc)
    comps = [spec.cover() for spec in doc.components]
    F = build_family(doc.base, comps, cap=limits.group_order)
    inv = family_invariants(F)
    axioms = verify_axioms(F)
    quot = quotient_checks(F)
    bounds = check_corollaries(F)
    components = []
    for i, c in enumerate(F.components):
        components.append({
            "name": c.name, "degree": c.degree, "lift": _images(c.lift), "lift_source": F.lift_sources[i],
            "genus": F.genera[i], "ovals": F.ovals[i], "G_i_order": F.subgroup_orders[i],
            "hat_ovals": F.hat_ovals[i], "real_form": _images(F.real_form(i)),
        })
    report = {
        "foamlab_version": __version__, "command": "family", "base": {"n": doc.n},
        "invariants": inv, "components": components, "axioms": axioms.as_dict(),
        "quotient_checks": quot.as_dict(), "bounds": bounds.as_dict(),
    }
    lines = [f"|G| = {F.order}", f"hat genus = {F.hat_genus}", f"r = {F.r}"]
    for i, row in enumerate(components):
        lines.append(f"{row['name']}: |G_{i + 1}| = {row['G_i_order']}, g_{i + 1} = {row['genus']}, "
                     f"k_{i + 1} = {row['ovals']}, hat k_{i + 1} = {row['hat_ovals']}, "
                     f"lift {F.components[i].lift.cycle_string()} ({row['lift_source']})")
    ax = axioms.as_dict()
    lines.append("axioms:")
    for key in ("real_forms_normalize_G", "real_forms_preserve_G_i", "G_generated_by_G_i",
                "ovals_map_homeomorphically", "real_forms_involutive"):
        val = ax[key]
        passed = all(val) if isinstance(val, list) else val
        lines.append(f"  {key}: {'pass' if passed else 'FAIL'}")
    for d in axioms.diagnostics:
        lines.append(f"  note: {d}")
    lines.append(f"quotient checks ({quot.reason}):")
    for row in quot.genus_rows:
        rel = "=" if row["equality"] else "<="
        lines.append(f"  genus bound component {row['component']}: {row['lhs']} {rel} {row['rhs']}"
                     + (" (equality)" if row["equality"] else ""))
    for row in quot.oval_rows:
        lines.append(f"  oval bound component {row['component']}: {row['lhs']} <= {row['rhs']}")
    lines.append("bounds:")
    for rec in bounds.records:
        if rec.rhs is None:
            lines.append(f"  {rec.name}: {rec.reason}")
            continue
        margin = rec.rhs - rec.lhs
        state = ("holds" if rec.holds else "VIOLATED") if rec.applicable else rec.reason
        lines.append(f"  {rec.name}: {rec.lhs} vs rhs {rec.rhs}, margin {margin}; {state}")
    return report, lines


# -- enumerate --------------------------------------------------------------

def _catalog_record(F) -> dict:
    bounds = check_corollaries(F)
    quot = quotient_checks(F)
    margins = {r.name: (r.rhs - r.lhs if r.rhs is not None else None) for r in bounds.records}
    return {
        "family": family_key(F),
        "invariants": family_invariants(F),
        "quotient_checks": quot.as_dict(),
        "bounds": [r.as_dict() for r in bounds.records],
        "margins": margins,
        "violations": [r.name for r in bounds.violations],
    }


def run_enumerate(degree: int, points: int, components: int, jobs: int = 1) -> dict:
    limits = load_limits()
    families = list(enumerate_families(degree, points, components, jobs=jobs,
                                       guardrails=limits.enumeration_guardrails()))
    records = [_catalog_record(F) for F in families]
    catalog = {
        "foamlab_version": __version__, "command": "enumerate",
        "limits": {"max_degree": degree, "n": points, "max_components": components},
        "count": len(records), "records": records,
        "violation_count": sum(len(r["violations"]) for r in records),
    }
    if families:
        catalog["extremal"] = extremal_report(families, top=10).as_dict()
    return catalog


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foamlab", description="Klein foams and equipped families.")
    parser.add_argument("--version", action="version", version=f"foamlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", help="check an input document and its compressed foam")
    p.add_argument("file")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p = sub.add_parser("family", help="build and report the equipped family of a document")
    p.add_argument("file")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p = sub.add_parser("enumerate", help="catalog all small admissible families")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--components", type=int, required=True)
    p.add_argument("--out", help="write the JSON catalog here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            report, lines, ok = run_validate(load_document(args.file))
            _emit(report, lines, args.report, out)
            return EXIT_OK if ok else EXIT_FAIL
        if args.command == "family":
            report, lines = run_family(load_document(args.file))
            _emit(report, lines, args.report, out)
            return EXIT_OK
        catalog = run_enumerate(args.degree, args.points, args.components, args.jobs)
        if args.out:
            Path(args.out).write_text(dumps(catalog), encoding="utf-8")
            out.write(f"wrote {catalog['count']} records to {args.out}, "
                      f"{catalog['violation_count']} bound violations\n")
        else:
            out.write(dumps(catalog))
        return EXIT_OK
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (FoamlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
