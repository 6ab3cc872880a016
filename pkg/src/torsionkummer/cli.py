"""Command-line entry point: ``torsionkummer {bound,verify,pipeline,oracle-suite}``.

Exit codes: 0 success, 1 validation error, 2 verification violation,
3 internal error. Every JSON document embeds the tool version and the
resolved input so ``verify`` can regenerate it without external state.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bounds import bound_for, ratio_divisor_table
from .errors import ParseError, SchemaError, TorsionKummerError
from .lattice import entanglement_pipeline, subgroup_closure
from .oracle import OracleConfig, run_battery
from .records import ingest_pipeline_instance, ingest_record
from .report import SCHEMA_VERSION, bound_report_json, bound_report_text, diff_paths, dumps, factored_json
from .sext import DEFAULT_ELEMENT_CAP, DEFAULT_SEED, ExtensionShape

EXIT_OK, EXIT_VALIDATION, EXIT_VIOLATION, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("bound", "verify", "pipeline", "oracle-suite")
TOOL = "torsionkummer"


@dataclass(frozen=True)
class RunRequest:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    format: str = "json"
    levels: tuple[int, ...] = ()
    seed: int = DEFAULT_SEED
    trials: int = 100
    cap: int = DEFAULT_ELEMENT_CAP
    expand_decimals: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError("command", f"must be one of {', '.join(COMMANDS)}")
        if self.command in ("bound", "verify", "pipeline") and not self.input_path:
            raise SchemaError("input", f"--input is required for {self.command}")
        if self.format not in ("json", "text"):
            raise SchemaError("format", "must be json or text")
        if any(n < 1 for n in self.levels):
            raise SchemaError("levels", "levels must be positive integers")
        if not 0 <= self.seed < 2**64:
            raise SchemaError("seed", "must be an unsigned 64-bit integer")
        if self.trials < 0:
            raise SchemaError("trials", "must be non-negative")
        if self.cap < 1:
            raise SchemaError("cap", "must be positive")


@dataclass
class RunResult:
    status: int
    document: dict[str, Any]
    text: str


def _envelope(command: str, options: dict, input_doc: Any) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL, "version": __version__},
        "command": command,
        "options": options,
        "input": input_doc,
    }


def _error_entry(exc: Exception) -> dict[str, Any]:
    entry = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SchemaError):
        entry["field"] = exc.field
    return entry


def _status_name(code: int) -> str:
    return {EXIT_OK: "ok", EXIT_VALIDATION: "error", EXIT_VIOLATION: "violation"}[code]


# ------------------------------------------------------------- commands


def run_bound(input_doc: Any, levels: Sequence[int], expand: bool) -> RunResult:
    records = ingest_record(input_doc)
    batch = isinstance(records, list)
    records = records if batch else [records]
    results, texts, code = [], [], EXIT_OK
    for i, rec in enumerate(records):
        try:
            rep = bound_for(rec)
            if levels:
                rep.ratio_table = ratio_divisor_table(rep.final_bound, rep.rank, rep.torsion_dim, list(levels))
            mism = rep.mismatches()
        except TorsionKummerError as exc:
            results.append({"index": i, "label": rec.label, "status": "error", "error": _error_entry(exc)})
            texts.append(f"{rec.label}: error: {exc}")
            code = max(code, EXIT_VALIDATION)
            continue
        entry = {"index": i, "label": rec.label, "status": "ok", "report": bound_report_json(rep, expand)}
        if mism:
            entry.update(status="violation", mismatches=mism)
            code = EXIT_VIOLATION
        results.append(entry)
        texts.append(bound_report_text(rep))
    doc = _envelope("bound", {"levels": list(levels), "expand_decimals": expand}, [r.to_json() for r in records] if batch else records[0].to_json())
    doc["results"] = results
    doc["status"] = _status_name(code)
    return RunResult(code, doc, "\n\n".join(texts))


def run_pipeline(input_doc: Any, expand: bool) -> RunResult:
    instances = ingest_pipeline_instance(input_doc)
    batch = isinstance(instances, list)
    instances = instances if batch else [instances]
    results, texts, code = [], [], EXIT_OK
    for i, inst in enumerate(instances):
        try:
            shape = ExtensionShape(inst.r, inst.s, inst.N)
            V = subgroup_closure(inst.generators, inst.action_generators, shape)
            rep = entanglement_pipeline(V, inst.action_generators, inst.d_A, inst.m_cohomology)
        except TorsionKummerError as exc:
            results.append({"index": i, "label": inst.label, "status": "error", "error": _error_entry(exc)})
            texts.append(f"[{i}] {inst.label}: error: {exc}")
            code = max(code, EXIT_VALIDATION)
            continue
        body = rep.to_json()
        body["index"] = factored_json(rep.index, expand)
        body["bound"] = factored_json(rep.bound, expand)
        ok = rep.divides and rep.crt_consistent and rep.descent_holds and rep.r_closure_contains
        results.append({"index": i, "label": inst.label, "status": "ok" if ok else "violation", "report": body})
        if not ok:
            code = EXIT_VIOLATION
        texts.append(
            f"[{i}] {inst.label or shape}: kernel exponent {rep.kernel_exponent}, algebra n = {rep.algebra_n}, "
            f"index {rep.index} {'divides' if rep.divides else 'DOES NOT divide'} bound {rep.bound}"
            f"{'' if rep.crt_consistent else '  (CRT INCONSISTENT)'}"
        )
    doc = _envelope("pipeline", {"expand_decimals": expand}, [x.to_json() for x in instances] if batch else instances[0].to_json())
    doc["results"] = results
    doc["status"] = _status_name(code)
    return RunResult(code, doc, "\n".join(texts))


def run_oracle_suite(seed: int, trials: int, cap: int) -> RunResult:
    config = OracleConfig(element_cap=cap, trial_count=trials, seed=seed)
    reports = run_battery(config)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION
    doc = _envelope("oracle-suite", {"seed": seed, "trials": trials, "cap": cap}, None)
    doc["results"] = [r.to_json() for r in reports]
    doc["violations"] = sum(len(r.violations) for r in reports)
    doc["status"] = _status_name(code)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name} {json.dumps(r.params, sort_keys=True)}  checked={r.checked}  violations={len(r.violations)}" for r in reports]
    return RunResult(code, doc, "\n".join(lines))


def _regenerate(doc: dict[str, Any]) -> RunResult:
    opts = doc.get("options") or {}
    cmd = doc.get("command")
    if cmd == "bound":
        return run_bound(doc["input"], opts.get("levels", []), bool(opts.get("expand_decimals", False)))
    if cmd == "pipeline":
        return run_pipeline(doc["input"], bool(opts.get("expand_decimals", False)))
    if cmd == "oracle-suite":
        return run_oracle_suite(int(opts["seed"]), int(opts["trials"]), int(opts["cap"]))
    raise SchemaError("command", f"cannot verify a document produced by {cmd!r}")


def run_verify(report_doc: Any) -> RunResult:
    if not isinstance(report_doc, dict):
        raise SchemaError("<root>", "report must be an object")
    for key in ("schema_version", "tool", "command", "input", "results"):
        if key not in report_doc:
            raise SchemaError(key, "missing from report")
    if report_doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {report_doc['schema_version']}")
    try:
        fresh = _regenerate(report_doc).document
    except (SchemaError, ParseError) as exc:
        raise SchemaError("input", f"embedded input no longer validates: {exc}") from None
    stored = dict(report_doc)
    notes = []
    if stored.get("tool", {}).get("version") != __version__:
        notes.append(f"report written by version {stored.get('tool', {}).get('version')}, verified with {__version__}")
    stored.pop("tool", None)
    fresh.pop("tool", None)
    mismatches = diff_paths(stored, fresh)
    code = EXIT_VIOLATION if mismatches else EXIT_OK
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL, "version": __version__},
        "command": "verify",
        "verified_command": report_doc["command"],
        "mismatches": mismatches,
        "notes": notes,
        "status": "ok" if not mismatches else "violation",
    }
    text = "verified: report regenerates exactly" if not mismatches else "MISMATCH at " + ", ".join(mismatches)
    return RunResult(code, doc, text)


def _read_input(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def run(req: RunRequest) -> RunResult:
    if req.command == "oracle-suite":
        return run_oracle_suite(req.seed, req.trials, req.cap)
    raw = _read_input(req.input_path)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{req.input_path}: invalid JSON: {exc}") from None
    if req.command == "bound":
        return run_bound(data, req.levels, req.expand_decimals)
    if req.command == "pipeline":
        return run_pipeline(data, req.expand_decimals)
    return run_verify(data)


# ------------------------------------------------------------------ argv


def _levels(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=TOOL, description="Entanglement bounds for Kummer extensions and finite-level verifiers.")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input: bool):
        if needs_input:
            sp.add_argument("--input", required=True, metavar="PATH")
        sp.add_argument("--output", metavar="PATH", help="write here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("bound", help="entanglement bound for curve records")
    common(sp, True)
    sp.add_argument("--levels", type=_levels, default=(), metavar="n1,n2,...", help="levels for the Kummer degree ratio table")
    sp.add_argument("--expand-decimals", action="store_true", help="add decimal expansions (capped at 10^4 digits)")

    sp = sub.add_parser("verify", help="regenerate a previously emitted report and compare")
    common(sp, True)

    sp = sub.add_parser("pipeline", help="run the finite-level pipeline on synthetic instances")
    common(sp, True)
    sp.add_argument("--expand-decimals", action="store_true")

    sp = sub.add_parser("oracle-suite", help="run the brute-force oracle battery")
    common(sp, False)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="U64")
    sp.add_argument("--trials", type=int, default=100, metavar="N")
    sp.add_argument("--cap", type=int, default=DEFAULT_ELEMENT_CAP, metavar="N")
    return p


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        req = RunRequest(
            command=args.command,
            input_path=getattr(args, "input", None),
            output_path=args.output,
            format=args.format,
            levels=getattr(args, "levels", ()),
            seed=getattr(args, "seed", DEFAULT_SEED),
            trials=getattr(args, "trials", 100),
            cap=getattr(args, "cap", DEFAULT_ELEMENT_CAP),
            expand_decimals=getattr(args, "expand_decimals", False),
        )
        result = run(req)
    except (ParseError, SchemaError, TorsionKummerError) as exc:
        err = {"schema_version": SCHEMA_VERSION, "tool": {"name": TOOL, "version": __version__}, "status": "error", "error": _error_entry(exc)}
        sys.stderr.write(f"{TOOL}: error: {exc}\n")
        if args.format == "json":
            _emit(dumps(err), args.output)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"{TOOL}: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    _emit(dumps(result.document) if req.format == "json" else result.text + "\n", req.output_path)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
