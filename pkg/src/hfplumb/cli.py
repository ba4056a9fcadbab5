"""Command-line front end: ``hfplumb {check,basics,hf,path,family}``.

Exit codes: 0 success, 1 hypothesis/precondition failure, 2 parse error,
3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .charvec import (
    cond13_count,
    format_vector,
    parse_vector,
    require_characteristic,
    satisfies_cond13,
)
from .errors import HFError, MalformedInput
from .families import certificate_bundle, sigma_2_3, verify_family
from .fullpath import Verdict, basic_vectors, classify, replay_certificate
from .kplus import ExplorationParams, hf_decomposition
from .plumbing import (
    PlumbingGraph,
    bad_vertices,
    bareiss_det,
    check_hypotheses,
    is_negative_definite,
    parse_graph_text,
    form_matrix,
)

SCHEMA = 1
ENV_PREFIX = "HFPLUMB_"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {ENV_PREFIX}{name} must be an integer, got {raw!r}")


def read_graph(path: str) -> PlumbingGraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph_text(text)


def graph_summary(G: PlumbingGraph) -> dict:
    definite = is_negative_definite(G)
    return {
        "s": G.s,
        "vertices": list(G.weights),
        "edges": [list(e) for e in G.edges],
        "det": bareiss_det(form_matrix(G)),
        "negative_definite": definite.negative_definite,
        "bad_vertices": bad_vertices(G),
    }


def _num(x):
    return x if isinstance(x, int) else str(x)


def _check_or_force(G: PlumbingGraph, args, require_unimodular: bool) -> list[str]:
    warnings = []
    try:
        check_hypotheses(G, require_unimodular=require_unimodular)
    except HFError as exc:
        if not args.force:
            raise
        warnings.append(f"--force: {exc}; results carry no correctness guarantee")
    return warnings


def cmd_check(args) -> tuple[dict, int]:
    G = read_graph(args.graph)
    summary = graph_summary(G)
    problems = []
    if not summary["negative_definite"]:
        k = is_negative_definite(G).first_violation
        problems.append(f"not negative definite (leading minor {k} has the wrong sign)")
    if len(summary["bad_vertices"]) > 1:
        problems.append(f"{len(summary['bad_vertices'])} bad vertices; at most one allowed")
    if abs(summary["det"]) != 1:
        problems.append(f"determinant {summary['det']}: not an integral homology sphere (hf unavailable)")
    hyp_ok = summary["negative_definite"] and len(summary["bad_vertices"]) <= 1
    result = {"hypotheses_hold": hyp_ok, "problems": problems}
    status = 0 if hyp_ok or args.force else 1
    return {"graph": summary, "result": result}, status


def cmd_basics(args) -> tuple[dict, int]:
    G = read_graph(args.graph)
    warnings = _check_or_force(G, args, require_unimodular=False)
    basics = basic_vectors(G, jobs=args.jobs, step_limit=args.step_limit, force=True)
    result = {
        "candidates": cond13_count(G),
        "count": len(basics),
        "basics": [{"vector": list(b.vector), "length": _num(b.length)} for b in basics],
    }
    return {"graph": graph_summary(G), "result": result, "warnings": warnings}, 0


def _params(args) -> ExplorationParams:
    return ExplorationParams(slack=args.slack, level_cap=args.max_level, state_cap=args.state_cap)


def cmd_hf(args) -> tuple[dict, int]:
    G = read_graph(args.graph)
    warnings = _check_or_force(G, args, require_unimodular=False)
    # single Spin^c structure: |det| = 1 is required even under --force
    if abs(G.form.det) != 1:
        raise HFError(
            f"determinant is {G.form.det}; hf needs an integral homology sphere (|det| = 1)"
        )
    p = _params(args)
    basics = basic_vectors(G, jobs=args.jobs, step_limit=args.step_limit, force=True)
    dec = hf_decomposition(G, p, stability_check=args.stability_check, basics=basics, force=True)
    result = dec.to_dict()
    result["text"] = dec.render()
    result["basics"] = [list(b.vector) for b in basics]
    return {"graph": graph_summary(G), "result": result, "warnings": warnings}, 0


def read_certificate(path: str) -> tuple[tuple[int, ...] | None, list[int]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    start = None
    pushes: list[int] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("start", "pushes"):
            raise MalformedInput(f"{path}: line {lineno}: expected 'start:' or 'pushes:'")
        if key == "start":
            try:
                start = parse_vector(rest)
            except MalformedInput as exc:
                raise MalformedInput(f"{path}: line {lineno}: {exc}") from None
        else:
            try:
                pushes = [int(t) for t in rest.replace(",", " ").split()]
            except ValueError:
                raise MalformedInput(f"{path}: line {lineno}: pushes must be integers") from None
    if pushes is None:
        raise MalformedInput(f"{path}: missing 'pushes:' line")
    return start, pushes


def cmd_path(args) -> tuple[dict, int]:
    G = read_graph(args.graph)
    start = parse_vector(args.vector) if args.vector else None
    pushes = None
    if args.certificate:
        cert_start, pushes = read_certificate(args.certificate)
        if start is None:
            start = cert_start
        elif cert_start is not None and cert_start != start:
            raise HFError(
                f"--vector {format_vector(start)} disagrees with certificate start "
                f"{format_vector(cert_start)}"
            )
    if start is None:
        raise MalformedInput("no start vector: pass --vector or a certificate with 'start:'")
    xi = require_characteristic(G, start)
    if pushes is not None:
        out = replay_certificate(G, xi, pushes)
    elif satisfies_cond13(G, xi):
        out = classify(G, xi, step_limit=args.step_limit)
    else:
        out = replay_certificate(G, xi, [])
        if out.verdict is not Verdict.GOOD:
            raise HFError(
                f"{format_vector(xi)} violates the box condition; supply --certificate to replay pushes"
            )
    result = out.to_dict()
    result["trace"] = [
        {"vertex": st.vertex, "delta": st.delta, "vector": list(st.vector)} for st in out.trace
    ]
    return {"graph": graph_summary(G), "result": result}, 0


def cmd_family(args) -> tuple[dict, int]:
    fam = sigma_2_3(args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"sigma_2_3_n{args.n}"
    graph_path = out / f"{stem}.graph"
    cert_path = out / f"{stem}.certs"
    if args.json:
        graph_path = out / f"{stem}.json"
        graph_path.write_text(json.dumps(fam.graph.to_dict()) + "\n")
    else:
        graph_path.write_text(fam.graph.to_text())
    cert_path.write_text(certificate_bundle(args.n))
    result: dict = {
        "n": args.n,
        "graph_file": graph_path.name,
        "certificate_file": cert_path.name,
        "basics": [list(k) for k in fam.basics],
        "L": list(fam.L),
    }
    status = 0
    if args.verify:
        checks = verify_family(args.n)
        passed = sum(c.passed for c in checks)
        result["verify"] = {
            "passed": passed,
            "failed": len(checks) - passed,
            "checks": [
                {"kind": c.kind, "i": c.i, "passed": c.passed, "detail": c.detail} for c in checks
            ],
        }
        status = 0 if passed == len(checks) else 1
    return {"graph": graph_summary(fam.graph), "result": result}, status


# ---------------------------------------------------------------- rendering


def _render_graph(g: dict) -> list[str]:
    return [
        f"graph: s={g['s']} det={g['det']} "
        f"{'negative definite' if g['negative_definite'] else 'NOT negative definite'} "
        f"bad vertices={g['bad_vertices']}"
    ]


def render_text(command: str, report: dict) -> str:
    lines = _render_graph(report["graph"])
    r = report["result"]
    for w in report.get("warnings", []):
        lines.append(f"warning: {w}")
    if command == "check":
        if r["problems"]:
            lines += [f"problem: {p}" for p in r["problems"]]
        lines.append("hypotheses hold" if r["hypotheses_hold"] else "hypotheses FAIL")
    elif command == "basics":
        lines.append(f"basic vectors: {r['count']} of {r['candidates']} candidates")
        for b in r["basics"]:
            lines.append(f"  {format_vector(b['vector'])}  length {b['length']}")
    elif command == "hf":
        lines.append("basic vectors: " + ", ".join(format_vector(b) for b in r["basics"]))
        lines.append("class counts: " + " ".join(f"c({m})={c}" for m, c in r["class_counts"]))
        lines.append(f"stability: {r['stability']}")
        lines.append(r["text"])
    elif command == "path":
        lines.append(f"start {format_vector(r['start'])}")
        for k, st in enumerate(r["trace"], 1):
            lines.append(
                f"  {k:3d}: push v{st['vertex']} (level {st['delta']:+d}) -> {format_vector(st['vector'])}"
            )
        if r["verdict"] == "good":
            lines.append(f"GOOD after {len(r['pushes'])} pushes, terminal {format_vector(r['terminal'])}")
        elif r["verdict"] == "bad":
            v = r["violation"]
            lines.append(f"BAD at step {v['step']}: overshoot at v{v['vertex']} in {format_vector(r['final'])}")
        else:
            lines.append(f"INCOMPLETE after {len(r['pushes'])} pushes at {format_vector(r['final'])}")
    elif command == "family":
        lines.append(f"wrote {r['graph_file']} and {r['certificate_file']}")
        if "verify" in r:
            v = r["verify"]
            for c in v["checks"]:
                lines.append(f"  {'pass' if c['passed'] else 'FAIL'} {c['kind']} i={c['i']}: {c['detail']}")
            lines.append(f"verify: {v['passed']} passed, {v['failed']} failed")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--force", action="store_true", help="proceed when hypotheses fail")
    common.add_argument("--jobs", type=int, default=_env_int("JOBS", 1))
    common.add_argument("--step-limit", type=int, default=_env_int("STEP_LIMIT", 0) or None)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    ap = argparse.ArgumentParser(prog="hfplumb", description="HF+ of negative definite plumbings")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test the algorithm's hypotheses")
    p.add_argument("graph")

    p = sub.add_parser("basics", parents=[common], help="list basic vectors")
    p.add_argument("graph")

    p = sub.add_parser("hf", parents=[common], help="compute HF+(-Y(G))")
    p.add_argument("graph")
    p.add_argument("--slack", type=int, default=_env_int("SLACK", 4))
    p.add_argument("--max-level", type=int, default=_env_int("MAX_LEVEL", 32))
    p.add_argument("--state-cap", type=int, default=_env_int("STATE_CAP", 10**7))
    p.add_argument(
        "--stability-check",
        action=argparse.BooleanOptionalAction,
        default=bool(_env_int("STABILITY_CHECK", 1)),
    )

    p = sub.add_parser("path", parents=[common], help="trace or replay a full path")
    p.add_argument("graph")
    p.add_argument("--vector", help="start vector, e.g. (1,0,-1,-5)")
    p.add_argument("--certificate", help="file with 'start:' and 'pushes:' lines")

    p = sub.add_parser("family", parents=[common], help="emit Sigma(2,3,6n+1) files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=".")
    p.add_argument("--verify", action="store_true", help="replay every certificate")
    return ap


COMMANDS = {
    "check": cmd_check,
    "basics": cmd_basics,
    "hf": cmd_hf,
    "path": cmd_path,
    "family": cmd_family,
}


def run(argv: list[str] | None = None) -> tuple[int, str, bool]:
    """Run a command; return ``(exit status, output text, is_error)``."""
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        report, status = COMMANDS[args.command](args)
    except HFError as exc:
        if args.json:
            body = {
                "schema": SCHEMA,
                "command": args.command,
                "error": type(exc).__name__,
                "message": str(exc),
            }
            return exc.exit_code, json.dumps(body, indent=2) + "\n", False
        return exc.exit_code, f"error: {exc}\n", True
    report = {"schema": SCHEMA, "command": args.command, **report}
    report.setdefault("warnings", [])
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - started, 3)
    if args.json:
        return status, json.dumps(report, indent=2) + "\n", False
    text = render_text(args.command, report)
    if args.timing:
        text += f"time: {report['timing_s']} s\n"
    return status, text, False


def main(argv: list[str] | None = None) -> int:
    status, text, is_error = run(argv)
    (sys.stderr if is_error else sys.stdout).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
