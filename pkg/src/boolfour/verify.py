"""Exhaustive checks of the PID-to-Fourier mappings over whole gate spaces.

Each suite walks every gate of a given arity under every requested measure
and emits one :class:`CheckRecord` per (gate, measure, check).  Records of
kind ``"check"`` are pass/fail; records of kind ``"flag"`` report how far a
printed closed form sits from the derived value and never fail a run.

Set ``BOOLFOUR_THREADS`` to evaluate gates on a thread pool; results are
merged in gate order, so output does not depend on the thread count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import mapping as mp
from .fourier import (
    all_tables,
    influence,
    noise_sensitivity,
    popcount,
    stability,
    total_influence,
    transform,
    transform_batch,
    transform_integer,
)
from .gate import (
    UNIFORM,
    InputMeasure,
    TruthTable,
    classify,
    enumerate_gates,
    measures_for,
)
from .info import (
    cond_entropy_direct,
    cond_entropy_fourier,
    conditional_mi,
    co_information,
    joint_from_gate,
    mi_direct,
    mi_fourier,
)
from .pid import (
    MEASURE,
    lattice,
    node_leq,
    pid_bivariate,
    pid_lattice,
    pid_trivariate,
    psi_sums,
)


SCHEMA = 1
DEFAULT_P_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
EQ_TOL = mp.EQ_TOL
FLAG_TOL = mp.FLAG_TOL
ID_TOL = 1e-12
RHO_SAMPLES = (-1.0, -0.5, 0.0, 0.3, 0.5, 1.0)
DELTA_SAMPLES = (0.0, 0.1, 0.25, 0.5, 1.0)
EXPECTED_MONOTONE_3 = 20
SCAN_NOTE = ("PID atoms use the I_min redundancy measure; an empty collision list "
             "is evidence for, not a proof of, injectivity of the PID-to-spectrum map.")


@dataclass(frozen=True)
class CheckRecord:
    gate: str
    measure: str
    check: str
    residual: float
    passed: bool
    kind: str = "check"

    def to_json(self) -> dict:
        return {"gate": self.gate, "measure": self.measure, "check": self.check,
                "residual": _finite(self.residual), "pass": self.passed, "kind": self.kind}


@dataclass
class CheckSummary:
    passed: int = 0
    failed: int = 0
    worst_residual: float = 0.0
    worst_gate: Optional[str] = None
    worst_measure: Optional[str] = None

    @property
    def evaluated(self) -> int:
        return self.passed + self.failed

    def add(self, rec: CheckRecord) -> None:
        if rec.passed:
            self.passed += 1
        else:
            self.failed += 1
        if rec.residual > self.worst_residual or self.worst_gate is None:
            self.worst_residual = max(rec.residual, self.worst_residual)
            self.worst_gate, self.worst_measure = rec.gate, rec.measure

    def to_json(self, flag: bool = False) -> dict:
        out = {"evaluated": self.evaluated, "worst_residual": _finite(self.worst_residual),
               "worst_gate": self.worst_gate, "worst_measure": self.worst_measure}
        if flag:
            out["flagged"] = self.failed
        else:
            out.update({"pass": self.passed, "fail": self.failed})
        return out


@dataclass
class VerificationReport:
    suite: str
    gate_count: int
    records: list[CheckRecord]
    duration: float = 0.0
    extras: dict = field(default_factory=dict)

    def _summaries(self, kind: str) -> dict[str, CheckSummary]:
        out: dict[str, CheckSummary] = {}
        for rec in self.records:
            if rec.kind == kind:
                out.setdefault(rec.check, CheckSummary()).add(rec)
        return out

    @property
    def checks(self) -> dict[str, CheckSummary]:
        return self._summaries("check")

    @property
    def flags(self) -> dict[str, CheckSummary]:
        return self._summaries("flag")

    @property
    def ok(self) -> bool:
        return all(s.failed == 0 for s in self.checks.values()) and self.extras.get("self_checks_ok", True)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.kind == "check" and not r.passed]

    def to_json(self, include_records: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "suite": self.suite,
            "gate_count": self.gate_count,
            "pid_measure": MEASURE,
            "ok": self.ok,
            "checks": {k: v.to_json() for k, v in sorted(self.checks.items())},
            "printed_formula_discrepancies": {k: v.to_json(flag=True) for k, v in sorted(self.flags.items())},
            "extras": self.extras,
            "duration_s": round(self.duration, 3),
        }
        if include_records:
            out["records"] = [r.to_json() for r in self.records]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["gate", "measure", "check", "residual", "pass"])
        for r in self.records:
            w.writerow([r.gate, r.measure, r.check, repr(r.residual), r.passed])
        return buf.getvalue()


def merge_reports(suite: str, reports: Sequence[VerificationReport]) -> VerificationReport:
    records = [r for rep in reports for r in rep.records]
    extras = {rep.suite: rep.extras for rep in reports if rep.extras}
    extras["self_checks_ok"] = all(rep.extras.get("self_checks_ok", True) for rep in reports)
    extras["gate_counts"] = {rep.suite: rep.gate_count for rep in reports}
    return VerificationReport(suite, sum(rep.gate_count for rep in reports), records,
                              sum(rep.duration for rep in reports), extras)


def _finite(v: float) -> Optional[float]:
    # JSON has no infinity; an unsolvable system is reported as null
    return v if math.isfinite(v) else None


def thread_count() -> int:
    raw = os.environ.get("BOOLFOUR_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_gates(fn: Callable[[TruthTable], list], gates: Sequence[TruthTable]) -> list:
    threads = thread_count()
    if threads == 1:
        return [fn(g) for g in gates]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, gates))


def _rec(tt: TruthTable, m: InputMeasure, check: str, residual: float, tol: float,
         kind: str = "check") -> CheckRecord:
    residual = float(abs(residual))
    ok = residual <= tol
    return CheckRecord(str(tt), str(m), check, residual, ok, kind)


def _measures(p_grid: Optional[Iterable[float]]) -> list[InputMeasure]:
    return measures_for(list(p_grid or ()), include_uniform=True)


# Bivariate suite

def _bivariate_gate(tt: TruthTable, measures: Sequence[InputMeasure], tol: float) -> list[CheckRecord]:
    out: list[CheckRecord] = []
    cls = classify(tt)
    const = len(set(tt.outputs)) == 1
    for m in measures:
        sp = transform(tt, m)
        sq = sp.squared()
        jd = joint_from_gate(tt, m)
        pid = pid_bivariate(jd)
        ef2 = sp[0] ** 2
        ss = mp.phi_bivariate(pid, ef2) if not m.biased else mp.p_biased_bivariate(pid, ef2, m)
        out.append(_rec(tt, m, "bivariate_exact", ss.residual(sq), tol))
        if m.biased:
            printed = mp.printed_p_biased_bivariate(pid, ef2, m)
            out.append(_rec(tt, m, "printed_pbiased_bivariate_scale", printed.residual(sq), FLAG_TOL, "flag"))
        out.append(_rec(tt, m, "pid_identities", _bivariate_identity_residual(jd, pid), ID_TOL))
        if cls.is_unate:
            sb = mp.p_biased_bivariate_unate(pid, m, cls.unate_parameters)
            sign_err = max(abs(sb.first_order[1] - sp[1]), abs(sb.first_order[2] - sp[2]))
            out.append(_rec(tt, m, "unate_sign_recovery", sign_err, tol))
            pair_err = max(abs(sb.pair_from_x - sq[3]), abs(sb.pair_from_y - sq[3]))
            out.append(_rec(tt, m, "unate_pair_relation", pair_err, tol))
            printed_pair = max(abs(sb.printed_pair_from_x - sq[3]), abs(sb.printed_pair_from_y - sq[3]))
            out.append(_rec(tt, m, "printed_pair_relation", printed_pair, FLAG_TOL, "flag"))
            if cls.is_monotone or cls.is_antitone:
                out.append(_rec(tt, m, "monotone_consistency", sb.consistency_residual, tol))
        if m.is_uniform_equivalent:
            stab_m1 = stability(sp, -1.0)
            out.append(_rec(tt, m, "bivariate_stab_variant",
                            mp.phi_bivariate_stab(pid, stab_m1).residual(sq), tol))
            out.extend(_functional_records(tt, m, sp, pid, ef2, const, tol))
    return out


def _bivariate_identity_residual(jd, pid) -> float:
    ix, iy, ixy = mi_direct(jd, 0b01), mi_direct(jd, 0b10), mi_direct(jd, 0b11)
    errs = [ix - (pid.SI + pid.UI_X), iy - (pid.SI + pid.UI_Y), ixy - pid.total,
            co_information(jd) - (pid.SI - pid.CI)]
    return max(abs(e) for e in errs)


def _functional_records(tt, m, sp, pid, ef2, const, tol) -> list[CheckRecord]:
    out = []
    fn = mp.functionals_from_pid(pid, ef2)
    out.append(_rec(tt, m, "influence_from_pid", fn.influence - total_influence(sp), ID_TOL))
    if not const:
        violation = max(0.0, fn.edge_bound - fn.influence, fn.influence - (fn.mi_joint - fn.co_information))
        out.append(_rec(tt, m, "poincare_pid_chain", violation, ID_TOL))
    stab_err = stab_printed = 0.0
    for rho in RHO_SAMPLES:
        f = mp.functionals_from_pid(pid, ef2, rho=rho)
        stab_err = max(stab_err, abs(f.stability - stability(sp, rho)))
        stab_printed = max(stab_printed, abs(f.printed_stability - f.stability))
    ns_err = ns_printed = 0.0
    for delta in DELTA_SAMPLES:
        f = mp.functionals_from_pid(pid, ef2, delta=delta)
        ns_err = max(ns_err, abs(f.noise_sensitivity - noise_sensitivity(sp, delta)))
        ns_printed = max(ns_printed, abs(f.printed_noise_sensitivity - f.noise_sensitivity))
    out.append(_rec(tt, m, "stability_from_pid", stab_err, tol))
    out.append(_rec(tt, m, "noise_sensitivity_from_pid", ns_err, tol))
    out.append(_rec(tt, m, "printed_stability", stab_printed, FLAG_TOL, "flag"))
    out.append(_rec(tt, m, "printed_noise_sensitivity", ns_printed, FLAG_TOL, "flag"))
    return out


def verify_bivariate(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID, tol: float = EQ_TOL) -> VerificationReport:
    start = time.perf_counter()
    measures = _measures(p_grid)
    gates = list(enumerate_gates(2))
    chunks = _map_gates(lambda g: _bivariate_gate(g, measures, tol), gates)
    records = [r for chunk in chunks for r in chunk]
    return VerificationReport("bivariate", len(gates), records, time.perf_counter() - start,
                              {"measures": [str(m) for m in measures]})


# Trivariate suite

def _trivariate_gate(tt: TruthTable, measures: Sequence[InputMeasure], tol: float) -> tuple[list, list]:
    out: list[CheckRecord] = []
    slacks = []
    cls = classify(tt)
    for m in measures:
        sp = transform(tt, m)
        sq = sp.squared()
        jd = joint_from_gate(tt, m)
        pid3 = pid_trivariate(jd)
        psi = psi_sums(jd)
        bounds = mp.phi_trivariate_bounds(pid3, m)
        lo, hi = bounds.slack(sq)
        out.append(_rec(tt, m, "bounds_containment", max(0.0, -lo.min(), -hi.min()), tol))
        diff = np.array([sq[s] for s in mp.TRI_ORDER]) - np.array(bounds.centers)
        slacks.append((str(m), diff))
        if m.biased:
            printed = mp.phi_trivariate_bounds(pid3, m, scale_rule="printed")
            plo, phi_ = printed.slack(sq)
            out.append(_rec(tt, m, "printed_pbiased_bounds_containment",
                            max(0.0, -plo.min(), -phi_.min()), FLAG_TOL, "flag"))
            centers = np.abs(np.array(printed.centers) - np.array(bounds.centers)).max()
            out.append(_rec(tt, m, "printed_pbiased_phi_scale", centers, FLAG_TOL, "flag"))
        out.extend(_pid3_identity_records(tt, m, jd, pid3, psi))
        if cls.is_unate:
            try:
                sol = mp.phi_trivariate_unate(psi, cls.unate_parameters, sp[0], m, tol=tol)
                res = sol.signed_residual(sp.coeffs)
            except mp.MappingError:
                res = math.inf
            name = "monotone_solver" if (cls.is_monotone or cls.is_antitone) else "unate_solver"
            out.append(_rec(tt, m, name, res, tol))
            if cls.is_monotone or cls.is_antitone:
                rep = mp.check_printed_trivariate_formulas(psi, abs(sp[0]), sq, m)
                out.append(_rec(tt, m, "printed_trivariate_monotone", rep.max_residual, FLAG_TOL, "flag"))
    return out, slacks


def _pid3_identity_records(tt, m, jd, pid3, psi) -> list[CheckRecord]:
    raw = pid_lattice(jd)
    neg = max(0.0, -min(raw.values()))
    total_err = abs(sum(pid3.atoms.values()) - mi_direct(jd, 0b111))
    single_err = 0.0
    for i in range(3):
        below = sum(v for node, v in pid3.atoms.items() if node_leq(node, (1 << i,)))
        single_err = max(single_err, abs(below - mi_direct(jd, 1 << i)))
    cmi_err = max(abs(psi[i] - pid3.above_complement(i)) for i in range(3))
    d_err = float(np.max(np.abs(mp.A_D @ np.array(pid3.d_vector) - np.array(psi.values))))
    return [
        _rec(tt, m, "atom_nonnegativity", neg, ID_TOL),
        _rec(tt, m, "pid_identities", max(total_err, single_err), ID_TOL),
        _rec(tt, m, "conditional_mi_atom_sums", max(cmi_err, d_err), EQ_TOL),
    ]


def _tightest_constants(slacks: list[tuple[str, np.ndarray]]) -> dict:
    by_measure: dict[str, list[np.ndarray]] = {}
    for name, diff in slacks:
        by_measure.setdefault(name, []).append(diff)
    out = {}
    for name, diffs in by_measure.items():
        arr = np.array(diffs)
        out[name] = {lab: {"lower": float(arr[:, k].min()), "upper": float(arr[:, k].max())}
                     for k, lab in enumerate(mp.TRI_LABELS)}
    return out


def verify_trivariate(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID, tol: float = EQ_TOL) -> VerificationReport:
    start = time.perf_counter()
    measures = _measures(p_grid)
    gates = list(enumerate_gates(3))
    results = _map_gates(lambda g: _trivariate_gate(g, measures, tol), gates)
    records = [r for chunk, _ in results for r in chunk]
    slacks = [s for _, chunk in results for s in chunk]
    classes = [classify(g) for g in gates]
    monotone = sum(c.is_monotone for c in classes)
    extras = {
        "measures": [str(m) for m in measures],
        "monotone_increasing": monotone,
        "monotone_decreasing": sum(c.is_antitone for c in classes),
        "unate": sum(c.is_unate for c in classes),
        "monotone_count_expected": EXPECTED_MONOTONE_3,
        "self_checks_ok": monotone == EXPECTED_MONOTONE_3,
        "stated_constants": {"lower": -2 / 8, "upper_singletons_and_xyz": 5 / 8, "upper_pairs": 4 / 8},
        "tightest_constants": _tightest_constants(slacks),
    }
    return VerificationReport("trivariate", len(gates), records, time.perf_counter() - start, extras)


# Conjecture scan

@dataclass(frozen=True)
class ConjectureScanResult:
    measure: str
    eps: float
    gate_count: int
    groups: list[list[str]]
    collisions: list[list[str]]
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.collisions

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "measure": self.measure,
            "eps": self.eps,
            "gate_count": self.gate_count,
            "matched_groups": len(self.groups),
            "collisions": self.collisions,
            "pass": self.passed,
            "note": SCAN_NOTE,
            "duration_s": round(self.duration, 3),
        }


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def scan_vectors(n: int = 3) -> tuple[list[TruthTable], np.ndarray, np.ndarray]:
    gates = list(enumerate_gates(n))
    nodes = lattice(n)

    def one(g):
        atoms = pid_lattice(joint_from_gate(g, UNIFORM))
        return [atoms[node] for node in nodes], transform(g).squared()

    rows = _map_gates(one, gates)
    return gates, np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def conjecture_scan(eps: float = 1e-9, measure: str = MEASURE, n: int = 3,
                    spectrum_tol: float = EQ_TOL) -> ConjectureScanResult:
    """Group gates whose PID atoms agree within ``eps`` and flag groups with differing spectra.

    Grouping is the transitive closure of pairwise matches.  A group collides
    when its squared spectra spread by more than ``spectrum_tol``.
    """
    if measure != MEASURE:
        raise ValueError(f"only the {MEASURE!r} measure is available")
    start = time.perf_counter()
    gates, atoms, spectra = scan_vectors(n)
    size = len(gates)
    uf = _UnionFind(size)
    for a in range(size):
        close = np.max(np.abs(atoms[a + 1:] - atoms[a]), axis=1) <= eps
        for b in np.nonzero(close)[0]:
            uf.union(a, a + 1 + int(b))
    members: dict[int, list[int]] = {}
    for a in range(size):
        members.setdefault(uf.find(a), []).append(a)
    groups, collisions = [], []
    for idx in sorted(members.values()):
        if len(idx) < 2:
            continue
        names = [str(gates[i]) for i in idx]
        groups.append(names)
        spread = np.max(spectra[idx], axis=0) - np.min(spectra[idx], axis=0)
        if spread.max() > spectrum_tol:
            collisions.append(names)
    return ConjectureScanResult(measure, eps, size, groups, collisions, time.perf_counter() - start)


# Influence / information identities

def influence_identity_sweep(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID,
                             arities: Sequence[int] = (2, 3)) -> VerificationReport:
    """h(p) Inf_i = I(T; X_i | rest) for every gate, input and measure."""
    start = time.perf_counter()
    measures = _measures(p_grid)
    records = []
    count = 0
    for n in arities:
        for tt in enumerate_gates(n):
            count += 1
            for m in measures:
                sp = transform(tt, m)
                jd = joint_from_gate(tt, m)
                tol = ID_TOL if m.is_uniform_equivalent else EQ_TOL
                for i in range(n):
                    res = m.hp * influence(sp, i) - conditional_mi(jd, i)
                    records.append(_rec(tt, m, f"influence_cmi_n{n}", res, tol))
    return VerificationReport("influence_identity", count, records, time.perf_counter() - start)


def fourier_entropy_sweep(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID,
                 arities: Sequence[int] = (1, 2, 3), tol: float = EQ_TOL) -> VerificationReport:
    """Fourier-side H(T | X_A) and I(T; X_A) against direct enumeration for every subset A."""
    start = time.perf_counter()
    measures = _measures(p_grid)
    records = []
    count = 0
    for n in arities:
        for tt in enumerate_gates(n):
            count += 1
            for m in measures:
                sp = transform(tt, m)
                jd = joint_from_gate(tt, m)
                h_err = i_err = 0.0
                for a in range(1 << n):
                    h_err = max(h_err, abs(cond_entropy_fourier(sp, a) - cond_entropy_direct(jd, a)))
                    i_err = max(i_err, abs(mi_fourier(sp, a) - mi_direct(jd, a)))
                records.append(_rec(tt, m, "fourier_cond_entropy", h_err, tol))
                records.append(_rec(tt, m, "fourier_mutual_information", i_err, tol))
    return VerificationReport("fourier_entropy", count, records, time.perf_counter() - start)


def parseval_sweep(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID, max_n: int = 4,
                   tol: float = ID_TOL) -> VerificationReport:
    """sum_S f^(S)^2 = 1 for every gate of arity <= max_n (batched; one record per arity and measure)."""
    start = time.perf_counter()
    records = []
    count = 0
    for n in range(1, max_n + 1):
        tables = all_tables(n)
        count += len(tables)
        for m in _measures(p_grid):
            err = np.abs((transform_batch(tables, m) ** 2).sum(axis=1) - 1.0)
            worst = int(np.argmax(err))
            gate = TruthTable(n, tuple(int(v) for v in tables[worst]))
            records.append(_rec(gate, m, f"parseval_n{n}", err[worst], tol))
    return VerificationReport("parseval", count, records, time.perf_counter() - start)


def exact_influence_sweep(max_n: int = 4) -> VerificationReport:
    """Integer-exact influence identities under the uniform measure.

    With c(S) = 2^n f^(S) integral, Inf_i = sum_{S contains i} c(S)^2 / 4^n and the
    flip probability is hits_i / 2^n, so both sides are compared in integers.
    Total influence is compared with the average sensitivity the same way.
    """
    start = time.perf_counter()
    records = []
    count = 0
    for n in range(1, max_n + 1):
        tables = all_tables(n).astype(np.int64)
        count += len(tables)
        size = 1 << n
        c2 = transform_integer(tables) ** 2
        idx = np.arange(size)
        weights = np.array([popcount(s) for s in range(size)])
        total_hits = np.zeros(len(tables), dtype=np.int64)
        for i in range(n):
            bit = 1 << i
            hits = (tables != tables[:, idx ^ bit]).sum(axis=1)
            total_hits += hits
            spectral = c2[:, (idx & bit) != 0].sum(axis=1)
            bad = np.nonzero(spectral != hits * size)[0]
            records.append(CheckRecord(f"arity {n}", "uniform", f"influence_exact_n{n}_x{i}",
                                       float(len(bad)), len(bad) == 0))
        avg_sens_scaled = total_hits * size  # 4^n * average sensitivity
        bad = np.nonzero((c2 * weights).sum(axis=1) != avg_sens_scaled)[0]
        records.append(CheckRecord(f"arity {n}", "uniform", f"total_influence_exact_n{n}",
                                   float(len(bad)), len(bad) == 0))
    return VerificationReport("exact_influence", count, records, time.perf_counter() - start)


def _sq_labels(n: int, values) -> dict[str, float]:
    return {str(s): float(values[s]) for s in range(1, 1 << n)}


def mapping_reports(tt: TruthTable, m: InputMeasure = UNIFORM, tol: float = EQ_TOL) -> list[mp.MappingReport]:
    """Every mapping that applies to one gate, with residuals against its true spectrum."""
    if tt.n not in (2, 3):
        return []
    sp = transform(tt, m)
    sq = sp.squared()
    jd = joint_from_gate(tt, m)
    cls = classify(tt)
    gate, meas = str(tt), str(m)
    out: list[mp.MappingReport] = []

    def report(theorem, predicted, residuals, flags=None, reference=None, actual=None):
        passed = all(v <= tol for k, v in residuals.items() if not k.startswith("printed"))
        out.append(mp.MappingReport(theorem, predicted, reference or {}, actual, residuals,
                                    passed, flags or {}, gate, meas))

    if tt.n == 2:
        pid = pid_bivariate(jd)
        ef2 = sp[0] ** 2
        ss = mp.p_biased_bivariate(pid, ef2, m) if m.biased else mp.phi_bivariate(pid, ef2)
        res = {"squared": ss.residual(sq)}
        flags = {}
        if m.biased:
            res["printed_scale"] = mp.printed_p_biased_bivariate(pid, ef2, m).residual(sq)
            flags["printed_formula_discrepancy"] = res["printed_scale"] > FLAG_TOL
        report("bivariate-exact", _sq_labels(2, ss.vector()), res, flags, actual=_sq_labels(2, sq))
        if cls.is_unate:
            sb = mp.p_biased_bivariate_unate(pid, m, cls.unate_parameters)
            res = {
                "first_order": max(abs(sb.first_order[1] - sp[1]), abs(sb.first_order[2] - sp[2])),
                "pair": abs(sb.pair_squared - sq[3]),
                "printed_pair": max(abs(sb.printed_pair_from_x - sq[3]), abs(sb.printed_pair_from_y - sq[3])),
            }
            if cls.is_monotone or cls.is_antitone:
                res["consistency"] = sb.consistency_residual
            report("bivariate-unate", sb.to_json(), res,
                   {"printed_formula_discrepancy": sb.printed_formula_discrepancy},
                   actual={"1": sp[1], "2": sp[2], "3": float(sq[3])})
        if m.is_uniform_equivalent:
            fn = mp.functionals_from_pid(pid, ef2, rho=0.5, delta=0.1)
            res = {
                "influence": abs(fn.influence - total_influence(sp)),
                "stability": abs(fn.stability - stability(sp, 0.5)),
                "noise_sensitivity": abs(fn.noise_sensitivity - noise_sensitivity(sp, 0.1)),
                "printed_stability": abs(fn.printed_stability - fn.stability),
                "printed_noise_sensitivity": abs(fn.printed_noise_sensitivity - fn.noise_sensitivity),
            }
            report("pid-functionals", fn.to_json(), res,
                   {"printed_formula_discrepancy": fn.printed_formula_discrepancy})
        return out

    pid3 = pid_trivariate(jd)
    psi = psi_sums(jd)
    bounds = mp.phi_trivariate_bounds(pid3, m)
    lo, hi = bounds.slack(sq)
    out.append(mp.MappingReport(
        "trivariate-bounds", bounds.to_json(), {}, _sq_labels(3, sq),
        {"min_slack": float(min(lo.min(), hi.min()))}, bounds.contains(sq), {}, gate, meas))
    if cls.is_unate:
        sol = mp.phi_trivariate_unate(psi, cls.unate_parameters, sp[0], m, tol=tol)
        report("trivariate-unate", sol.to_json(), {"spectrum": sol.signed_residual(sp.coeffs)},
               actual={str(s): sp[s] for s in range(8)})
        if cls.is_monotone or cls.is_antitone:
            rep = mp.check_printed_trivariate_formulas(psi, sp[0], sq, m)
            rep.gate, rep.measure = gate, meas
            out.append(rep)
    return out


SWEEP_COLUMNS = ("p", "gates", "max_exact_residual", "contained", "min_bound_slack",
                 "max_influence_identity_residual", "max_printed_residual")


def p_sweep(gates: Sequence[TruthTable], grid: Sequence[float], tol: float = EQ_TOL) -> list[dict]:
    """One row per p: residual maxima and bound tightness over ``gates``."""
    rows = []
    for p in grid:
        m = InputMeasure.pbiased(p)
        exact = printed = ident = 0.0
        contained = 0
        slack = math.inf
        has_bounds = False
        for tt in gates:
            sp = transform(tt, m)
            jd = joint_from_gate(tt, m)
            for i in range(tt.n):
                ident = max(ident, abs(m.hp * influence(sp, i) - conditional_mi(jd, i)))
            for rep in mapping_reports(tt, m, tol):
                for k, v in rep.residuals.items():
                    if k.startswith("printed") or rep.theorem.endswith("printed"):
                        printed = max(printed, v)
                    elif k != "min_slack":
                        exact = max(exact, v)
                if rep.theorem == "trivariate-bounds":
                    has_bounds = True
                    contained += rep.passed
                    slack = min(slack, rep.residuals["min_slack"])
        rows.append({
            "p": p,
            "gates": len(gates),
            "max_exact_residual": exact,
            "contained": contained if has_bounds else None,
            "min_bound_slack": slack if has_bounds else None,
            "max_influence_identity_residual": ident,
            "max_printed_residual": printed,
        })
    return rows


def run_all(p_grid: Optional[Iterable[float]] = DEFAULT_P_GRID, arity: Optional[int] = None,
            tol: float = EQ_TOL) -> VerificationReport:
    grid = list(p_grid or ())
    suites = []
    if arity in (None, 2):
        suites.append(verify_bivariate(grid, tol))
    if arity in (None, 3):
        suites.append(verify_trivariate(grid, tol))
    if arity is None:
        suites.append(influence_identity_sweep(grid))
    name = f"arity{arity}" if arity else "all"
    return merge_reports(name, suites)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, default=_json_default)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
