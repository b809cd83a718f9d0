"""Command-line entry point: analyze, evolve, linegraph, census, verify-paper."""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import reduce
from pathlib import Path

import numpy as np

from .families import family_factors
from .graph import Graph, GraphError, cartesian_product
from .io import parse_edge_list, parse_graph6
from .linegraph import LineGraphError, line_correspondence, line_pst_scan, vpst_scan
from .report import ReportDocument, graph_summary, state_label, transfer_record
from .reproduction import run_suite
from .search import DEFAULT_CAP, SOLVED, CapExceeded, pst_search
from .spectra import HamiltonianKind, SpectralDecomposition, classify, decompose_graph
from .states import SPairState, StateError, parse_state
from .tolerances import Tolerances, from_profile
from .transfer import FIXED, PERIODIC, TransferError, evolve, fidelity, is_periodic, oracle_scan

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# --- argument helpers ------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt}


def real_expr(text: str) -> float:
    """A real number such as ``1.5``, ``-1/2``, ``pi/2`` or ``pi/sqrt(2)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS \
                and len(node.args) == 1 and not node.keywords:
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError

    try:
        val = float(ev(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError):
        raise argparse.ArgumentTypeError(f"cannot read number {text!r}") from None
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return val


def s_list(text: str) -> tuple:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        v = real_expr(tok)
        if v == 0:
            raise argparse.ArgumentTypeError("s = 0 is not allowed")
        if not any(abs(v - w) <= 1e-12 for w in vals):
            vals.append(v)
    if not vals:
        raise argparse.ArgumentTypeError("empty s list")
    return tuple(vals)


def _add_graph_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph6", help="graph in graph6 format")
    g.add_argument("--edges", metavar="FILE", help="edge list file ('u v [w]' per line, '-' for stdin)")
    g.add_argument("--family", metavar="SPEC", help="named family, e.g. 'cycle(8)', 'K2,4', 'Q3', 'P3 x K2'")


def _add_common(p, hamiltonian=True, svals=True):
    if hamiltonian:
        p.add_argument("--hamiltonian", default="a", choices=["a", "l", "q", "A", "L", "Q"],
                       help="walk matrix: adjacency, Laplacian or signless Laplacian (default a)")
    if svals:
        p.add_argument("--s", type=s_list, default=(1.0, -1.0), help="comma-separated s values (default 1,-1)")
    p.add_argument("--tol-group", type=float, help="eigenvalue grouping tolerance")
    p.add_argument("--tol-support", type=float, help="support threshold on ||E u||")
    p.add_argument("--tol-sc", type=float, help="strong cospectrality tolerance")
    p.add_argument("--tol-fid", type=float, help="oracle fidelity tolerance")
    p.add_argument("--tol-int", type=float, help="integrality tolerance for exact classification")
    p.add_argument("--max-den", type=int, help="denominator bound for rational reconstruction")
    p.add_argument("--t-max", type=real_expr, help="scan horizon (default 4*pi/g estimated from the spectrum)")
    p.add_argument("--json", action="store_true", help="emit a JSON report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pairwalk", description="Perfect s-pair state transfer in continuous-time quantum walks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="fixed and periodic s-pair states and perfect state transfer")
    _add_graph_args(p)
    _add_common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"vertex cap for the transfer search (default {DEFAULT_CAP})")

    p = sub.add_parser("evolve", help="evolve a state and print amplitudes")
    _add_graph_args(p)
    _add_common(p, svals=False)
    p.add_argument("--state", required=True, help="'a', 'a+s*b', 'a-b' or '[x0, x1, ...]'")
    p.add_argument("--t", type=real_expr, help="time, e.g. 'pi/2'; with --target and no --t, scan up to --t-max")
    p.add_argument("--target", help="target state for the fidelity")

    p = sub.add_parser("linegraph", help="vertex transfer in the line graph via the signless Laplacian")
    _add_graph_args(p)
    _add_common(p, hamiltonian=False, svals=False)
    p.add_argument("--no-screen", action="store_true", help="do not apply the edge-cut screen")

    p = sub.add_parser("census", help="JSON-lines catalog over a graph6 stream")
    p.add_argument("input", nargs="?", default="-", help="graph6 file, one graph per line ('-' for stdin)")
    p.add_argument("--hamiltonians", default="a", help="comma-separated subset of a,l,q (default a)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output order is input order)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_common(p, hamiltonian=False)

    p = sub.add_parser("verify-paper", help="run the built-in reproduction suite")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    _add_common(p, hamiltonian=False, svals=False)
    return ap


def tolerances_from(args) -> Tolerances:
    base = from_profile()
    return base.with_(group_tol=args.tol_group, support_tol=args.tol_support, sc_tol=args.tol_sc,
                      fid_tol=args.tol_fid, int_tol=args.tol_int, max_den=args.max_den)


def graph_from(args) -> tuple[Graph, list[Graph]]:
    """The input graph and, for a product spec, its factors."""
    if args.graph6 is not None:
        return parse_graph6(args.graph6), []
    if args.edges is not None:
        text = sys.stdin.read() if args.edges == "-" else Path(args.edges).read_text()
        return parse_edge_list(text), []
    factors = family_factors(args.family)
    X = reduce(cartesian_product, factors)
    return X, factors if len(factors) > 1 else []


def _config(args, tol: Tolerances) -> dict:
    cfg = {"tolerances": tol.as_dict()}
    for key in ("hamiltonian", "s", "t_max", "cap", "hamiltonians"):
        if hasattr(args, key) and getattr(args, key) is not None:
            cfg[key] = getattr(args, key)
    return cfg


def default_t_max(dec: SpectralDecomposition, tol: Tolerances) -> float:
    """4*pi/g for the whole spectrum, falling back to the smallest eigenvalue gap."""
    vals = dec.eigenvalues
    if len(vals) < 2:
        return 4 * math.pi
    cls = classify(vals, tol, dec)
    if cls.exact:
        return 4 * math.pi / (float(cls.g) * cls.sqrt_delta)
    return 4 * math.pi / float(np.min(np.diff(vals)))


def _print_doc(doc: ReportDocument, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(doc.to_json())
    else:
        print("\n".join(lines))


def _time_text(rec: dict) -> str:
    t = rec.get("time")
    if t is None:
        return "-"
    sym = rec.get("time_symbolic")
    return f"{t:.12g}" + (f" = {sym}" if sym else "") + f" [{rec.get('certification')}]"


# --- subcommands ---------------------------------------------------------------------

def spair_states(n: int, svals) -> list[SPairState]:
    """Distinct rays e_a + s e_b for the given s values (one orientation when |s| = 1)."""
    out, seen = [], set()
    for s in svals:
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                p = SPairState(a, b, s)
                key = (a, b, round(s, 12)) if a < b else (b, a, round(1 / s, 12))
                if key not in seen:
                    seen.add(key)
                    out.append(p)
    return out


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    tol = tolerances_from(args)
    X, _ = graph_from(args)
    kind = HamiltonianKind.parse(args.hamiltonian)
    if X.n > args.cap:
        raise CapExceeded(f"graph has {X.n} vertices, search cap is {args.cap}")
    dec = decompose_graph(X, kind, tol)
    doc = ReportDocument("analyze", graph_summary(X), _config(args, tol))
    lines = [f"graph: n={X.n}, m={X.m}, Hamiltonian {kind.value}, s in {list(args.s)}"]
    for p in spair_states(X.n, args.s):
        rep = is_periodic(dec, p.state(X.n), tol)
        if rep.verdict == FIXED:
            doc.add("fixed", transfer_record(rep))
            lines.append(f"fixed     {p}  eigenvalue {rep.eigenvalue:.12g}")
        elif rep.verdict == PERIODIC:
            rec = transfer_record(rep)
            doc.add("periodic", rec)
            lines.append(f"periodic  {p}  min period {_time_text(rec)}")
    hits = pst_search(dec, s_policy=tuple(args.s) + (SOLVED,), tol=tol, cap=args.cap)
    for h in hits:
        rec = transfer_record(h.report, s=h.source.s)
        doc.add("pst", rec)
        lines.append(f"PST       {h.source} -> {h.target}  at {_time_text(rec)}")
    if not hits:
        lines.append("no perfect state transfer found")
    doc.timing["seconds"] = round(time.perf_counter() - t0, 6)
    _print_doc(doc, args.json, lines)
    return EXIT_OK


def cmd_evolve(args) -> int:
    tol = tolerances_from(args)
    X, _ = graph_from(args)
    kind = HamiltonianKind.parse(args.hamiltonian)
    dec = decompose_graph(X, kind, tol)
    u = parse_state(args.state, X.n)
    mu = parse_state(args.target, X.n) if args.target else None
    if args.t is None:
        if mu is None:
            raise UsageError("evolve needs --t, or --target to scan for the best time")
        horizon = args.t_max if args.t_max is not None else default_t_max(dec, tol)
        t = oracle_scan(dec, u, mu, horizon).t
    else:
        t = args.t
    w = evolve(dec, t, u)
    doc = ReportDocument("evolve", graph_summary(X), _config(args, tol))
    rec = {"state": state_label(u), "t": t, "amplitudes": [complex(round(z.real, 12), round(z.imag, 12)) for z in w]}
    lines = [f"t = {t:.12g}"]
    lines += [f"  {v}: {_complex_text(z)}" for v, z in enumerate(w)]
    if mu is not None:
        f = fidelity(dec, t, u, mu)
        rec["target"] = state_label(mu)
        rec["fidelity"] = f
        lines.append(f"fidelity to {state_label(mu)}: {f:.12f}")
    doc.add("evolution", rec)
    _print_doc(doc, args.json, lines)
    return EXIT_OK


def _complex_text(z: complex) -> str:
    re_, im = round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0
    return f"{re_:+.12f} {'+' if im >= 0 else '-'} {abs(im):.12f}i"


def _edge_text(X: Graph, k: int) -> str:
    u, v = X.endpoints(k)
    return f"{X.label(u)}-{X.label(v)}" if X.labels else f"{u}-{v}"


def cmd_linegraph(args) -> int:
    t0 = time.perf_counter()
    tol = tolerances_from(args)
    X, factors = graph_from(args)
    X.require_unweighted("line-graph analysis")
    for F in factors:
        F.require_unweighted("line-graph analysis")
    doc = ReportDocument("linegraph", graph_summary(X), _config(args, tol))
    lines = [f"host: n={X.n}, m={X.m}; line graph on {X.m} vertices"]
    if len(factors) > 1:
        X1, X2 = reduce(cartesian_product, factors[:-1]), factors[-1]
        lines[0] += f" (product mode, factors with {X1.n} and {X2.n} vertices)"
        for d in vpst_scan(X1, X2, tol):
            if not (d.direct_pst or d.case or d.discrepancies):
                continue
            rec = transfer_record(d.report, edges=[_edge_text(X, k) for k in d.edges], case=d.case,
                                  lambda_fab=list(d.lam), gap_ok=d.gap_ok, predicted_sc=d.predicted_sc,
                                  structural_pst=d.structural_pst, alternative_pst=d.alternative_pst,
                                  minus_two=d.minus_two, discrepancies=list(d.discrepancies))
            doc.add("pairs", rec)
            e1, e2 = rec["edges"]
            lines.append(f"f[{e1}] -> f[{e2}]: direct {d.report.verdict}"
                         + (f" at {_time_text(rec)}" if d.direct_pst else "")
                         + (f", case ({d.case})" if d.case else ""))
            for msg in d.discrepancies:
                doc.diagnostics.append(f"f[{e1}], f[{e2}]: {msg}")
                lines.append(f"    discrepancy: {msg}")
    else:
        corr = line_correspondence(X, tol)
        n_pst = 0
        for d in line_pst_scan(corr, tol, screen=not args.no_screen):
            if not (d.is_pst or d.discrepancies):
                continue
            rec = transfer_record(d.report, edges=[_edge_text(X, k) for k in d.edges],
                                  structural_verdict=d.structural.verdict, q_verdict=d.q_report.verdict,
                                  minus_two=d.minus_two, discrepancies=list(d.discrepancies))
            doc.add("pairs", rec)
            e1, e2 = rec["edges"]
            if d.is_pst:
                n_pst += 1
                lines.append(f"PST f[{e1}] -> f[{e2}] at {_time_text(rec)}")
            for msg in d.discrepancies:
                doc.diagnostics.append(f"f[{e1}], f[{e2}]: {msg}")
                lines.append(f"    discrepancy: {msg}")
        if n_pst == 0:
            lines.append("no line-graph perfect state transfer")
    doc.timing["seconds"] = round(time.perf_counter() - t0, 6)
    _print_doc(doc, args.json, lines)
    return EXIT_OK


def census_record(index: int, g6: str, kinds: tuple, svals: tuple, tol_fields: dict, cap: int) -> dict:
    """One catalog record; runs in a worker process."""
    tol = Tolerances(**tol_fields)
    X = parse_graph6(g6)
    rec = {"index": index, "graph6": g6, "n": X.n, "m": X.m, "connected": X.is_connected(), "hamiltonians": {}}
    if X.n > cap:
        rec["error"] = f"graph has {X.n} vertices, search cap is {cap}"
        return rec
    for k in kinds:
        dec = decompose_graph(X, k, tol)
        fixed = periodic = 0
        for p in spair_states(X.n, svals):
            v = is_periodic(dec, p.state(X.n), tol).verdict
            fixed += v == FIXED
            periodic += v == PERIODIC
        hits = pst_search(dec, s_policy=svals, tol=tol, cap=cap)
        rec["hamiltonians"][k.value] = {
            "fixed": fixed,
            "periodic": periodic,
            "pst": len(hits),
            "transfers": [{"source": str(h.source), "target": str(h.target), "s": h.source.s,
                           "time": h.time, "time_symbolic": h.report.symbolic,
                           "certification": h.report.certification,
                           "oracle_fidelity": h.report.oracle_fidelity} for h in hits],
        }
    return rec


def _census_job(job):
    try:
        return census_record(*job)
    except (GraphError, StateError, TransferError, ArithmeticError) as exc:
        return {"index": job[0], "graph6": job[1], "error": f"{type(exc).__name__}: {exc}"}


def cmd_census(args) -> int:
    tol = tolerances_from(args)
    kinds = tuple(HamiltonianKind.parse(k) for k in args.hamiltonians.split(",") if k.strip())
    if not kinds:
        raise UsageError("no Hamiltonian selected")
    stream = sys.stdin if args.input == "-" else open(args.input)
    bad = 0
    jobs = []
    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                parse_graph6(line)
            except GraphError as exc:
                print(f"warning: line {lineno}: {exc}", file=sys.stderr)
                bad += 1
                continue
            jobs.append((lineno, line, kinds, tuple(args.s), tol.as_dict(), args.cap))
    finally:
        if stream is not sys.stdin:
            stream.close()
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_census_job, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        records = [_census_job(j) for j in jobs]
    for rec in records:
        if "error" in rec:
            print(f"warning: line {rec['index']}: {rec['error']}", file=sys.stderr)
            bad += 1
        print(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args) -> int:
    tol = tolerances_from(args)
    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad criterion list {args.criteria!r}") from None
    t0 = time.perf_counter()
    results = run_suite(tol, numbers)
    total = time.perf_counter() - t0
    if args.json:
        doc = ReportDocument("verify-paper", None, {"tolerances": tol.as_dict()})
        for r in results:
            doc.add("criteria", {"number": r.number, "title": r.title, "passed": r.passed,
                                 "details": list(r.details), "seconds": round(r.seconds, 6)})
        doc.timing["seconds"] = round(total, 6)
        print(doc.to_json())
    else:
        for r in results:
            print(r.line())
        n_pass = sum(r.passed for r in results)
        print(f"{n_pass}/{len(results)} criteria passed in {total:.1f}s")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {"analyze": cmd_analyze, "evolve": cmd_evolve, "linegraph": cmd_linegraph,
            "census": cmd_census, "verify-paper": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GraphError, StateError, UsageError, LineGraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
