"""``recon`` command line: validate, reconstruct, pipeline, suite.

Exit codes: 0 ok, 1 schema or JSON error, 2 axiom violation, 3 budget
exceeded or not verified, 4 hypothesis unmet, 5 conclusion failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from .coefficients import CoefficientError
from .config import budget as _budget
from .corpus import canonical_size
from .functions import BudgetExceeded, ClosureError, FnFamily, canonical_bumpy, steinberg_family
from .groupoid import FiniteGroupoid, GroupoidError
from .io import (
    SchemaError,
    dumps,
    load_coefficients,
    load_document,
    load_map,
    pipeline_doc,
    read_json,
    reconstruction_doc,
)
from .pipeline import SEARCH_MAX, search_diagonal_iso, steinberg_pipeline
from .report import SCHEMA_TOOL_VERSION, Report, Status
from .suite import run_suite
from .ultrafilters import verify_recovery

EXIT_OK, EXIT_SCHEMA, EXIT_AXIOM, EXIT_BUDGET, EXIT_UNMET, EXIT_FAIL = range(6)
_STATUS_EXIT = {"pass": EXIT_OK, "not-verified": EXIT_BUDGET, "hypothesis-unmet": EXIT_UNMET, "fail": EXIT_FAIL}
RECONSTRUCT_CAP = 4000  # |S| beyond which reconstruction is never attempted


def _error_doc(kind: str, message: str, **extra: Any) -> dict:
    doc = {"schema": "error/v1", "tool_version": SCHEMA_TOOL_VERSION, "status": kind, "message": message}
    doc.update(extra)
    return doc


def _emit(doc: dict, out: str | None, summary: str = "") -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if summary:
        print(summary, file=sys.stderr)


def _groupoid_or_family(path: str, coefficients: str, graded: bool, steinberg: bool) -> FnFamily:
    """A family from an ``fnfamily/v1`` file, or the canonical (or Steinberg) family of a groupoid file."""
    kind, obj = load_document(path)
    if kind == "fnfamily/v1":
        obj.graded = obj.graded or graded
        return obj
    if kind != "groupoid/v1":
        raise SchemaError(f"{path}: expected groupoid/v1 or fnfamily/v1, got {kind}")
    Y, R = load_coefficients(_coefficient_ref(coefficients))
    if steinberg:
        if R is None:
            raise SchemaError("Steinberg families need ring coefficients")
        return steinberg_family(obj, R, graded=graded)
    return canonical_bumpy(obj, Y, graded=graded)


def _coefficient_ref(ref: str) -> Any:
    return read_json(ref) if ref.endswith(".json") else ref


def cmd_validate(args: argparse.Namespace) -> tuple[int, dict, str]:
    results, lines, code = [], [], EXIT_OK
    for path in args.files:
        try:
            kind, obj = load_document(path)
        except SchemaError as e:
            results.append({"file": path, "status": "schema-error", "message": str(e)})
            lines.append(f"{path}: schema error: {e}")
            code = max(code, EXIT_SCHEMA)
            continue
        except (GroupoidError, CoefficientError) as e:
            results.append({"file": path, "status": "axiom-violation", "axiom": e.axiom, "witness": list(e.witness)})
            lines.append(f"{path}: {e.axiom} violated at {list(e.witness)}")
            code = max(code, EXIT_AXIOM)
            continue
        except ClosureError as e:
            results.append({"file": path, "status": "axiom-violation", "axiom": "closure", "witness": list(e.witness)})
            lines.append(f"{path}: not closed under products")
            code = max(code, EXIT_AXIOM)
            continue
        entry = {"file": path, "status": "pass", "kind": kind}
        if isinstance(obj, FiniteGroupoid):
            entry.update(arrows=obj.n, units=len(obj.units))
        elif isinstance(obj, FnFamily):
            entry.update(size=obj.k, size_S=len(obj.S))
        results.append(entry)
        lines.append(f"{path}: {kind} ok")
    doc = {"schema": "validation-report/v1", "tool_version": SCHEMA_TOOL_VERSION, "files": results,
           "status": "pass" if code == EXIT_OK else "fail"}
    return code, doc, "\n".join(lines)


def cmd_reconstruct(args: argparse.Namespace) -> tuple[int, dict, str]:
    if len(args.files) not in (1, 2):
        raise SchemaError("reconstruct takes a groupoid (or family) file and an optional coefficient file")
    coeff = args.files[1] if len(args.files) == 2 else args.coefficients
    b = _budget(args.budget)
    cap = min(RECONSTRUCT_CAP, 10 * b)
    kind, obj = load_document(args.files[0])
    if kind == "groupoid/v1":
        Y, _ = load_coefficients(_coefficient_ref(coeff))
        size = canonical_size(obj, Y)
        if size > cap:
            raise BudgetExceeded(f"canonical family has |S| = {size} > {cap}")
        F = canonical_bumpy(obj, Y, graded=args.graded)
    elif kind == "fnfamily/v1":
        F = obj
        F.graded = F.graded or args.graded
        if len(F.S) > cap:
            raise BudgetExceeded(f"|S| = {len(F.S)} > {cap}")
    else:
        raise SchemaError(f"expected groupoid/v1 or fnfamily/v1, got {kind}")
    if args.graded and F.G.grading is None:
        raise SchemaError("--graded needs a groupoid with a grading")
    rep = verify_recovery(F, graded=args.graded)
    doc = reconstruction_doc(F, rep)
    return _STATUS_EXIT[doc["status"]], doc, rep.summary()


def cmd_pipeline(args: argparse.Namespace) -> tuple[int, dict, str]:
    if len(args.files) not in (2, 3):
        raise SchemaError("pipeline takes A and A' documents and an optional fnmap/v1 file")
    F1 = _groupoid_or_family(args.files[0], args.coefficients, args.graded, steinberg=True)
    F2 = _groupoid_or_family(args.files[1], args.coefficients, args.graded, steinberg=True)
    if len(args.files) == 3:
        phi = load_map(read_json(args.files[2]), F1, F2)
    else:
        if max(F1.k, F2.k) > SEARCH_MAX:
            raise SchemaError(f"no map given and the families exceed {SEARCH_MAX} elements; supply an fnmap/v1 file")
        phi = search_diagonal_iso(F1, F2)
        if phi is None:
            rep = Report(f"pipeline {F1.name} -> {F2.name}")
            rep.add_status("(6) diagonally isomorphic", Status.UNMET, "search found no diagonal isomorphism")
            rep.data["halted_at"] = "(6) diagonally isomorphic"
            return EXIT_UNMET, pipeline_doc(rep), rep.summary()
    rep = steinberg_pipeline(F1, F2, phi, graded=args.graded, relax_one_side=args.relax_one_side,
                             budget=_budget(args.budget))
    doc = pipeline_doc(rep)
    if doc["status"] == "pass" and doc.get("isomorphism") is None:
        doc["status"] = "fail"
    summary = rep.summary()
    if rep.data.get("halted_at"):
        summary += f"\nhalted at {rep.data['halted_at']}"
    return _STATUS_EXIT[doc["status"]], doc, summary


def cmd_suite(args: argparse.Namespace) -> tuple[int, dict, str]:
    config: dict = {}
    for path in args.files:
        cfg = read_json(path)
        if not isinstance(cfg, dict):
            raise SchemaError(f"{path}: suite configuration must be an object")
        config.update(cfg)
    coeffs = args.coefficients_list or config.get("coefficients")
    res = run_suite(seed=args.seed if args.seed is not None else int(config.get("seed", 0)),
                    extra=int(config.get("extra", 4)), budget=args.budget or config.get("budget"),
                    max_s=int(config.get("max_s", 1500)), coefficients=coeffs,
                    mutate=args.mutate or bool(config.get("mutate", False)),
                    suites=config.get("suites", ("recovery", "domination", "normalisers", "regularity", "pipeline")))
    doc = {"schema": "suite-report/v1", "tool_version": SCHEMA_TOOL_VERSION, **res,
           "status": "pass" if res["ok"] else "fail"}
    lines = [f"suite seed={res['seed']} budget={res['budget']}"]
    for r in res["results"]:
        lines.append(f"  {r['theorem']:<26} pass {r['pass']:>4}  unmet {r['hypothesis-unmet']:>3}  "
                     f"not-verified {r['not-verified']:>3}  fail {r['fail']:>3}")
    return (EXIT_OK if res["ok"] else EXIT_FAIL), doc, "\n".join(lines)


COMMANDS = {"validate": cmd_validate, "reconstruct": cmd_reconstruct, "pipeline": cmd_pipeline, "suite": cmd_suite}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recon", description="Finite groupoid reconstruction from bumpy semigroups.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("files", nargs="*", metavar="FILES")
    p.add_argument("--graded", action="store_true", help="check gradings as well")
    p.add_argument("--budget", type=int, default=None, help="size budget (default: RECON_BUDGET or 400)")
    p.add_argument("--seed", type=int, default=None, help="corpus seed for suite")
    p.add_argument("--out", default=None, metavar="PATH", help="write the JSON report here instead of stdout")
    p.add_argument("--coefficients", default="{1}",
                   help="coefficient name (F2, F3, F4, F5, Z/4, {1}) or ring/semigroupoid file")
    p.add_argument("--relax-one-side", action="store_true",
                   help="pipeline: require condition (5) on one side only (experimental, unproven)")
    p.add_argument("--mutate", action="store_true", help="suite: add the corrupted-table probe")
    p.add_argument("--suite-coefficients", dest="coefficients_list", nargs="+", default=None,
                   help="suite: restrict the coefficient systems")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.budget is not None and args.budget <= 0:
            raise SchemaError("--budget must be positive")
        code, doc, summary = COMMANDS[args.command](args)
    except SchemaError as e:
        code, doc, summary = EXIT_SCHEMA, _error_doc("schema-error", str(e)), f"schema error: {e}"
    except (GroupoidError, CoefficientError) as e:
        code, doc = EXIT_AXIOM, _error_doc("axiom-violation", str(e), axiom=e.axiom, witness=list(e.witness))
        summary = f"axiom violation: {e}"
    except ClosureError as e:
        code, doc = EXIT_AXIOM, _error_doc("axiom-violation", str(e), axiom="closure", witness=list(e.witness))
        summary = f"axiom violation: {e}"
    except BudgetExceeded as e:
        code, doc, summary = EXIT_BUDGET, _error_doc("budget-exceeded", str(e)), f"budget exceeded: {e}"
    _emit(doc, args.out, summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
