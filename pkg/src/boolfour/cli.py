"""Command-line front-end: ``analyze``, ``verify``, ``conjecture`` and ``sweep``.

Exit codes: 0 success, 1 a check failed (or output could not be written),
2 usage error.  Printed-formula discrepancy flags are reported, never fatal.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from typing import Optional, Sequence

from . import verify as vf
from .fourier import classical_bounds, influences, noise_sensitivity, stability, total_influence, transform
from .gate import (
    MAX_EXHAUSTIVE_ARITY,
    UNIFORM,
    GateError,
    InputMeasure,
    classify,
    enumerate_gates,
    make_gate,
    parse_p_list,
)
from .info import info_report, joint_from_gate
from .pid import pid_bivariate, pid_json, pid_trivariate, psi_sums

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
STAB_RHOS = (-1.0, -0.5, 0.0, 0.5, 1.0)
NS_DELTAS = (0.0, 0.1, 0.25, 0.5)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolfour", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="json"):
        p.add_argument("--format", choices=("json", "csv", "pretty"), default=fmt)
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument("--tol", type=float, default=vf.EQ_TOL, help="equality tolerance")

    p = sub.add_parser("analyze", help="full report for one gate")
    p.add_argument("--gate", required=True, help="name (AND, MAJ3, DICT_1, ...) or n:bits")
    p.add_argument("--p", type=float, help="p-biased measure P(x_i = +1) = p")
    p.add_argument("--info", action="store_true", help="emit only the information report")
    common(p)

    p = sub.add_parser("verify", help="run the exhaustive verification suites")
    p.add_argument("--arity", type=int, help="2 or 3 (default: both plus identities)")
    p.add_argument("--p", help="comma-separated p values")
    p.add_argument("--p-grid", help="lo:hi:step (inclusive)")
    p.add_argument("--records", action="store_true", help="include every record in JSON output")
    common(p)

    p = sub.add_parser("conjecture", help="injectivity scan of PID atoms over trivariate gates")
    p.add_argument("--eps", type=float, default=1e-9, help="matching tolerance")
    common(p)

    p = sub.add_parser("sweep", help="per-p residual maxima and bound tightness")
    p.add_argument("--gate", help="single gate (default: every gate of --arity)")
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--p", help="comma-separated p values")
    p.add_argument("--p-grid", default="0.1:0.9:0.1", help="lo:hi:step (inclusive)")
    common(p, fmt="csv")
    return parser


def _grid(args, default) -> list[float]:
    try:
        if getattr(args, "p", None):
            return parse_p_list(args.p)
        if getattr(args, "p_grid", None):
            return parse_p_list(args.p_grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return list(default)


def _gate(spec: str):
    try:
        return make_gate(spec)
    except GateError as exc:
        raise UsageError(str(exc)) from exc


def _measure(p: Optional[float]) -> InputMeasure:
    if p is None:
        return UNIFORM
    try:
        return InputMeasure.pbiased(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def analyze(tt, m: InputMeasure, tol: float = vf.EQ_TOL) -> dict:
    sp = transform(tt, m)
    jd = joint_from_gate(tt, m)
    out = {
        "schema": vf.SCHEMA,
        "gate": str(tt),
        "name": tt.name,
        "n": tt.n,
        "measure": m.to_json(),
        "class": classify(tt).to_json(),
        "spectrum": sp.to_json(),
        "squared": {str(s): float(v) for s, v in enumerate(sp.squared())},
        "influences": influences(sp),
        "total_influence": total_influence(sp),
        "bounds": {k: v.to_json() for k, v in classical_bounds(sp, tt).items()},
        "stability": None,
        "noise_sensitivity": None,
        "info": info_report(jd, sp).to_json(),
        "pid": None,
        "mapping": [r.to_json() for r in vf.mapping_reports(tt, m, tol)],
    }
    if m.is_uniform_equivalent:
        out["stability"] = {str(r): stability(sp, r) for r in STAB_RHOS}
        out["noise_sensitivity"] = {str(d): noise_sensitivity(sp, d) for d in NS_DELTAS}
    if tt.n == 2:
        out["pid"] = pid_bivariate(jd).to_json()
    elif tt.n == 3:
        out["pid"] = pid_json(pid_trivariate(jd), psi_sums(jd))
    return out


def _csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})
    return buf.getvalue()


def _pretty_analyze(rep: dict) -> str:
    lines = [f"gate {rep['gate']} ({rep['name'] or 'unnamed'}), measure {rep['measure']}"]
    for s, c in rep["spectrum"]["coeffs"].items():
        lines.append(f"  f^({int(s):0{rep['n']}b}) = {c:+.6f}")
    lines.append("  influences: " + ", ".join(f"{v:.6f}" for v in rep["influences"]))
    if rep["pid"]:
        lines.append(f"  pid ({rep['pid']['measure']}):")
        items = rep["pid"].get("atoms", {k: v for k, v in rep["pid"].items() if k != "measure"})
        labels = rep["pid"].get("labels", {})
        for k, v in items.items():
            lines.append(f"    {labels.get(k, k)}: {v:.6f}")
    for r in rep["mapping"]:
        worst = max(r["residual"].values(), default=0.0)
        flag = " [printed formula differs]" if r["flags"].get("printed_formula_discrepancy") else ""
        lines.append(f"  {r['theorem']}: {'pass' if r['pass'] else 'FAIL'} (max residual {worst:.3g}){flag}")
    return "\n".join(lines) + "\n"


def _pretty_report(rep: vf.VerificationReport) -> str:
    lines = [f"suite {rep.suite}: {'ok' if rep.ok else 'FAILED'} ({rep.gate_count} gates, pid measure {vf.MEASURE})"]
    for name, s in sorted(rep.checks.items()):
        lines.append(f"  {name}: {s.passed}/{s.evaluated} pass, worst {s.worst_residual:.3g} at {s.worst_gate} {s.worst_measure}")
    if rep.flags:
        lines.append("  printed-formula discrepancies (informational):")
        for name, s in sorted(rep.flags.items()):
            lines.append(f"    {name}: {s.failed}/{s.evaluated} flagged, worst {s.worst_residual:.3g}")
    return "\n".join(lines) + "\n"


def _render(fmt: str, obj, csv_text=None, pretty=None) -> str:
    if fmt == "csv" and csv_text is not None:
        return csv_text()
    if fmt == "pretty" and pretty is not None:
        return pretty()
    return vf.dumps(obj) + "\n"


def write_output(text: str, path: Optional[str]) -> None:
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if not path:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".boolfour-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_analyze(args) -> tuple[str, int]:
    tt = _gate(args.gate)
    m = _measure(args.p)
    if args.info:
        info = info_report(joint_from_gate(tt, m), transform(tt, m)).to_json()
        rows = [{"A": a, "H_T_given_A": info["H_T_given"][a], "I_T_A": info["I_T"][a]} for a in info["I_T"]]
        return _render(args.format, info, lambda: _csv(rows, ("A", "H_T_given_A", "I_T_A"))), EXIT_OK
    rep = analyze(tt, m, args.tol)

    def table():
        rows = [{"S": s, "coeff": c, "squared": c * c} for s, c in rep["spectrum"]["coeffs"].items()]
        return _csv(rows, ("S", "coeff", "squared"))

    ok = all(r["pass"] for r in rep["mapping"])
    return _render(args.format, rep, table, lambda: _pretty_analyze(rep)), EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> tuple[str, int]:
    if args.arity is not None and args.arity not in (2, 3):
        raise UsageError(f"arity {args.arity} unsupported: the mapping suites cover 2 or 3 inputs")
    grid = _grid(args, vf.DEFAULT_P_GRID)
    rep = vf.run_all(grid, args.arity, args.tol)
    text = _render(args.format, rep.to_json(include_records=args.records), rep.to_csv,
                   lambda: _pretty_report(rep))
    return text, EXIT_OK if rep.ok else EXIT_FAIL


def cmd_conjecture(args) -> tuple[str, int]:
    if args.eps < 0:
        raise UsageError("--eps must be nonnegative")
    res = vf.conjecture_scan(args.eps)

    def table():
        rows = [{"group": k, "gate": g, "collision": grp in res.collisions}
                for k, grp in enumerate(res.groups) for g in grp]
        return _csv(rows, ("group", "gate", "collision"))

    def pretty():
        return (f"conjecture scan ({res.measure}, eps={res.eps:g}): {res.gate_count} gates, "
                f"{len(res.groups)} matched groups, {len(res.collisions)} collisions\n{vf.SCAN_NOTE}\n")

    return _render(args.format, res.to_json(), table, pretty), EXIT_OK if res.passed else EXIT_FAIL


def cmd_sweep(args) -> tuple[str, int]:
    grid = _grid(args, ())
    if args.gate:
        gates = [_gate(args.gate)]
    else:
        if not 1 <= args.arity <= MAX_EXHAUSTIVE_ARITY:
            raise UsageError(f"arity {args.arity} unsupported for exhaustive sweeps")
        gates = list(enumerate_gates(args.arity))
    rows = vf.p_sweep(gates, grid, args.tol)
    text = _render(args.format, {"schema": vf.SCHEMA, "rows": rows},
                   lambda: _csv(rows, vf.SWEEP_COLUMNS), lambda: _csv(rows, vf.SWEEP_COLUMNS))
    ok = all(r["max_exact_residual"] <= args.tol and (r["contained"] in (None, r["gates"])) for r in rows)
    return text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "verify": cmd_verify, "conjecture": cmd_conjecture, "sweep": cmd_sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"boolfour: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_output(text, args.out)
    except OSError as exc:
        print(f"boolfour: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return code


if __name__ == "__main__":
    sys.exit(main())
