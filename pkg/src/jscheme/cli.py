"""Command line entry point: ``jscheme <subcommand> ...``.

Exit codes: 0 success, 1 resource or internal error, 2 undecided
classification or failed check, 64 usage error.  Rationals are printed as
"p/q" strings; JSON output never contains floats except timings.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .bounds import (
    UnsupportedParametersError,
    equality_filter,
    ratio_bound_of,
)
from .classify import (
    classify_separation,
    projective_plane_conjecture_check,
    reproduce_k4_tables,
)
from .combinat import SchemeParams
from .config import Config
from .designs import (
    BlockFamily,
    WITNESS_CASES,
    read_blocks,
    small_witness,
    verify_steiner,
    write_blocks,
)
from .graphs import ClassSet, ResourceError, VertexSet, build_graph, spectrum
from .scheme import InternalConsistencyError, eigen_matrices
from .search.clique import scheme_clique
from .search.cover import Partition, verify_colouring

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    return x


def _emit(args, payload: dict, text: str) -> None:
    """Write JSON to --json PATH (or stdout with bare --json), else print text."""
    if args.json is None and args.config.output_format != "json":
        print(text)
        return
    data = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    if args.json in (None, "-"):
        print(data)
    else:
        Path(args.json).write_text(data + "\n")
        print(text)


def _classes(params: SchemeParams, raw: str) -> ClassSet:
    try:
        members = [int(c) for c in raw.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"--classes expects comma-separated integers, got {raw!r}")
    try:
        return ClassSet.of(params.d, members)
    except ValueError as e:
        raise UsageError(str(e))


def _params(args) -> SchemeParams:
    try:
        return SchemeParams(args.n, args.k)
    except ValueError as e:
        raise UsageError(str(e))


def _fmt(x) -> str:
    return _jsonable(x) if isinstance(x, Fraction) else str(x)


def _matrix_text(name: str, M) -> str:
    rows = [[_fmt(e) for e in row] for row in M]
    width = max(len(e) for row in rows for e in row)
    return "\n".join([name] + ["  " + " ".join(e.rjust(width) for e in row) for row in rows])


# -- subcommands ---------------------------------------------------------------


def cmd_pq(args) -> int:
    params = _params(args)
    em = eigen_matrices(params)
    payload = {"n": params.n, "k": params.k, "v": params.v, "P": em.P, "Q": em.Q,
               "valencies": em.valencies, "multiplicities": em.multiplicities}
    text = _matrix_text("P", em.P) + "\n" + _matrix_text("Q", em.Q)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_graph(args) -> int:
    params = _params(args)
    cs = _classes(params, args.classes)
    eig = spectrum(params, cs)
    payload = {"n": params.n, "k": params.k, "v": params.v, "classes": sorted(cs.members),
               "degree": eig[0], "eigenvalues": eig, "tau": min(eig[1:])}
    if args.stats:
        g = build_graph(params, cs, memory_budget=args.config.memory_budget_bytes)
        payload["edges"] = g.v * g.degree // 2
        payload["adjacency_bytes"] = int(g.adjacency.nbytes)
    lines = [f"Gamma_{cs}({params.n},{params.k})", f"v = {params.v}", f"degree = {eig[0]}",
             "eigenvalues = " + " ".join(map(str, eig)), f"tau = {min(eig[1:])}"]
    if args.stats:
        lines.append(f"edges = {payload['edges']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _clique_cmd(args, coclique: bool) -> int:
    params = _params(args)
    cs = _classes(params, args.classes)
    if cs.trivial:
        raise UsageError(f"class set {cs} gives a trivial graph")
    target = cs.complement() if coclique else cs
    # omega(Gamma_T) <= alpha bound of its complement
    cap = int(ratio_bound_of(params, target.complement()).alpha_bound)
    budget = args.budget if args.budget is not None else args.config.default_time_budget
    res = scheme_clique(params, target.members, upper_bound_hint=cap, time_budget=budget,
                        backend=args.backend)
    what = "coclique" if coclique else "clique"
    payload = {"n": params.n, "k": params.k, "classes": sorted(cs.members), "kind": what,
               "size": res.size, "proved_optimal": res.proved_optimal, "upper_bound": res.upper_bound,
               "nodes": res.nodes_explored, "elapsed": round(res.elapsed, 3)}
    if args.witness:
        payload["witness"] = res.witness.blocks
    lines = [f"{what} number of Gamma_{cs}({params.n},{params.k}): {res.size}"
             + ("" if res.proved_optimal else f" (not proved; upper bound {res.upper_bound})")]
    if args.witness:
        lines.append(f"{params.n} {params.k} {what} of Gamma_{cs}")
        lines.extend(" ".join(map(str, b)) for b in res.witness.blocks)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if res.proved_optimal else EXIT_UNDECIDED


def cmd_clique(args) -> int:
    return _clique_cmd(args, False)


def cmd_coclique(args) -> int:
    return _clique_cmd(args, True)


def cmd_bounds(args) -> int:
    params = _params(args)
    cs = _classes(params, args.classes)
    if cs.trivial:
        raise UsageError(f"class set {cs} gives a trivial graph")
    rb = ratio_bound_of(params, cs)
    payload = {"n": params.n, "k": params.k, "v": params.v, "classes": sorted(cs.members),
               "degree": rb.degree, "tau": rb.tau, "alpha_bound": rb.alpha_bound,
               "omega_if_equality": rb.omega_if_equality, "divisibility_ok": rb.divisibility_ok}
    text = "\n".join([
        f"Gamma_{cs}({params.n},{params.k})", f"degree = {rb.degree}", f"tau = {rb.tau}",
        f"alpha <= {_fmt(rb.alpha_bound)}", f"1 - deg/tau = {_fmt(rb.omega_if_equality)}",
        f"divides v: {'yes' if rb.divisibility_ok else 'no'}",
    ])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_filter(args) -> int:
    params = _params(args)
    cs = _classes(params, args.classes)
    try:
        tuples = equality_filter(params.n, params.k, cs.members)
    except UnsupportedParametersError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    payload = {"n": params.n, "k": params.k, "v": params.v, "classes": sorted(cs.members),
               "feasible": [{"x": t.x, "y": t.y, "pattern": "".join(t.pattern),
                             "a_values": t.u_vertices, "b_values": t.v_vertices} for t in tuples]}
    # filter output is JSON by definition
    print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
    if args.json not in (None, "-"):
        Path(args.json).write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _read(path: str) -> BlockFamily:
    try:
        return read_blocks(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")


def cmd_verify(args) -> int:
    if args.dir is not None:
        return _verify_witness_dir(args)
    if args.file is None or args.t is None:
        raise UsageError("verify needs --file and --t, or --dir")
    fam = _read(args.file)
    try:
        verdict = verify_steiner(fam, args.t)
    except ValueError as e:
        raise UsageError(str(e))
    payload = {"file": args.file, "n": fam.n, "k": fam.k, "t": args.t, "blocks": len(fam),
               "steiner": verdict.ok, "failure": verdict.failure}
    text = "Steiner: yes" if verdict else f"Steiner: no ({verdict.failure})"
    _emit(args, payload, text)
    return EXIT_OK if verdict else EXIT_UNDECIDED


def _verify_witness_dir(args) -> int:
    d = Path(args.dir)
    meta_path = d / "case.json"
    if not meta_path.exists():
        raise UsageError(f"{d} has no case.json")
    meta = json.loads(meta_path.read_text())
    params = SchemeParams(meta["n"], meta["k"])
    cs = ClassSet.of(params.d, meta["classes"])
    clique = _read(str(d / "clique.blocks")).vertex_set(params.n)
    parts = [_read(str(p)).vertex_set(params.n) for p in sorted(d.glob("colour_*.blocks"))]
    g = build_graph(params, cs, memory_budget=args.config.memory_budget_bytes)
    is_clique = g.is_clique(clique)
    try:
        proper = verify_colouring(g, Partition(parts))
        problem = None
    except ValueError as e:
        proper, problem = False, str(e)
    ok = is_clique and proper and len(clique) == len(parts)
    payload = {"dir": str(d), "n": params.n, "k": params.k, "classes": sorted(cs.members),
               "clique_size": len(clique), "colours": len(parts), "clique_ok": is_clique,
               "colouring_ok": proper, "problem": problem, "verified": ok}
    text = (f"clique {len(clique)} ({'ok' if is_clique else 'bad'}), "
            f"colouring {len(parts)} ({'ok' if proper else 'bad'}): "
            + ("verified" if ok else "NOT verified"))
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_UNDECIDED


def cmd_witness(args) -> int:
    if args.case not in WITNESS_CASES:
        raise UsageError(f"unknown case {args.case!r}; choose from {', '.join(WITNESS_CASES)}")
    w = small_witness(args.case)
    ok = w.verify()
    n, k = w.params.n, w.params.k
    payload = {"case": w.case_id, "n": n, "k": k, "classes": sorted(w.classes.members),
               "clique_size": len(w.clique), "colours": len(w.colouring), "verified": ok,
               "clique": w.clique.blocks}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        label = f"{w.case_id} Gamma_{w.classes}"
        write_blocks(BlockFamily.of(n, w.clique.blocks, label + " clique"), out / "clique.blocks")
        width = len(str(len(w.colouring)))
        for i, part in enumerate(w.colouring.parts, 1):
            write_blocks(BlockFamily.of(n, part.blocks, f"{label} colour {i}"),
                         out / f"colour_{i:0{width}d}.blocks")
        (out / "case.json").write_text(json.dumps(
            {"case": w.case_id, "n": n, "k": k, "classes": sorted(w.classes.members)}, indent=2) + "\n")
    text = (f"{w.case_id}: Gamma_{w.classes}({n},{k}) clique {len(w.clique)} = "
            f"{len(w.colouring)} colours, {'verified' if ok else 'NOT verified'}")
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_ERROR


def cmd_classify(args) -> int:
    params = _params(args)
    budget = args.budget if args.budget is not None else (600.0 if args.config.extended else 60.0)
    rep = classify_separation(params.n, params.k, budget=budget)
    lines = [f"J({rep.n},{rep.k}), v = {rep.v}: {rep.verdict}"]
    if rep.witness_classes:
        lines.append(f"witness: Gamma_{{{','.join(map(str, rep.witness_classes))}}}")
    for r in rep.per_class:
        cl = "{" + ",".join(map(str, r.classes)) + "}"
        om = "?" if r.omega.value is None else f"{r.omega.value}{'' if r.omega.proved else '+'}"
        al = "?" if r.alpha.value is None else f"{r.alpha.value}{'' if r.alpha.proved else '+'}"
        lines.append(f"  {cl:<10} omega {om:>5}  alpha {al:>5}  {r.status:<9} {r.certificate}")
    lines.append(f"synchronization: {rep.sync_evidence['status']} ({rep.sync_evidence['reason']})")
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK if rep.decided else EXIT_UNDECIDED


def cmd_tables(args) -> int:
    budget = args.budget if args.budget is not None else 60.0
    cells = reproduce_k4_tables(budget=budget, extended=args.config.extended)
    if args.config.output_format == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(["table", "quantity", "n", "reference", "value", "proved", "status"])
        for c in cells:
            ref = "|".join(map(str, c.reference)) if isinstance(c.reference, tuple) else c.reference
            w.writerow([c.table, c.quantity, c.n, ref, c.value, c.proved, c.status])
    else:
        lines = []
        for c in cells:
            ref = "/".join(map(str, c.reference)) if isinstance(c.reference, tuple) else str(c.reference)
            val = "-" if c.value is None else str(c.value)
            lines.append(f"{c.table:<10} {c.quantity:<6} n={c.n:<3} ref {ref:>6}  got {val:>4}  {c.status}")
        _emit(args, {"cells": [c.to_json() for c in cells]}, "\n".join(lines))
    ok = all(c.status in ("match", "skipped") for c in cells)
    return EXIT_OK if ok else EXIT_UNDECIDED


def cmd_plane(args) -> int:
    budget = args.budget if args.budget is not None else 600.0
    if args.q >= 4 and not args.config.extended:
        raise UsageError("q >= 4 needs --extended")
    r = projective_plane_conjecture_check(args.q, budget=budget)
    verdict = {True: "holds", False: "fails", None: "undecided"}[r.conjecture_holds]
    text = (f"q={r.q}: alpha(Gamma_{{{r.q}}}({r.n},{r.k})) = {r.max_coclique_size}"
            f"{'' if r.proved else ' (not proved)'}, pair-kernel size {r.pair_kernel_size}; "
            f"{r.count} maximum cocliques, {r.pair_kernel_count} pair-kernel; conjecture {verdict}")
    _emit(args, r.to_json(), text)
    return EXIT_UNDECIDED if r.conjecture_holds is None else EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jscheme", description="Separation and synchronization in Johnson schemes.")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--memory-budget", type=int, default=None, help="bytes for one adjacency matrix")
    p.add_argument("--extended", action="store_true", help="allow the expensive cases")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, nk=True, classes=False):
        if nk:
            sp.add_argument("--n", type=int, required=True)
            sp.add_argument("--k", type=int, required=True)
        if classes:
            sp.add_argument("--classes", required=True, help="comma-separated classes, e.g. 1,3")
        sp.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="JSON output, to PATH or stdout")
        sp.add_argument("--extended", action="store_true", default=argparse.SUPPRESS)
        return sp

    common(sub.add_parser("pq", help="eigenmatrices P and Q")).set_defaults(func=cmd_pq)
    sp = common(sub.add_parser("graph", help="degree and spectrum of Gamma_I"), classes=True)
    sp.add_argument("--stats", action="store_true", help="also build the adjacency")
    sp.set_defaults(func=cmd_graph)
    for name, func in (("clique", cmd_clique), ("coclique", cmd_coclique)):
        sp = common(sub.add_parser(name, help=f"exact {name} number of Gamma_I"), classes=True)
        sp.add_argument("--budget", type=float, default=None, help="seconds")
        sp.add_argument("--witness", action="store_true")
        sp.add_argument("--backend", choices=("compiled", "python"), default=None)
        sp.set_defaults(func=func)
    common(sub.add_parser("bounds", help="ratio bound"), classes=True).set_defaults(func=cmd_bounds)
    common(sub.add_parser("filter", help="equality filter"), classes=True).set_defaults(func=cmd_filter)
    sp = common(sub.add_parser("verify", help="check a Steiner system or a witness directory"), nk=False)
    sp.add_argument("--file")
    sp.add_argument("--t", type=int)
    sp.add_argument("--dir", help="directory written by 'witness --out'")
    sp.set_defaults(func=cmd_verify)
    sp = common(sub.add_parser("witness", help="clique and colouring certificates"), nk=False)
    sp.add_argument("--case", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_witness)
    sp = common(sub.add_parser("classify", help="separation verdict for J(n,k)"))
    sp.add_argument("--budget", type=float, default=None, help="seconds per complementary pair")
    sp.set_defaults(func=cmd_classify)
    sp = common(sub.add_parser("tables", help="recompute the k = 4 tables"), nk=False)
    sp.add_argument("--budget", type=float, default=None, help="seconds per cell")
    sp.set_defaults(func=cmd_tables)
    sp = common(sub.add_parser("plane", help="maximum cocliques of Gamma_q(q^2+q+1, q+1)"), nk=False)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--budget", type=float, default=None)
    sp.set_defaults(func=cmd_plane)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = Config(output_format=args.format, extended=args.extended)
        if args.memory_budget is not None:
            cfg = replace(cfg, memory_budget_bytes=args.memory_budget)
        args.config = cfg
        return args.func(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, MemoryError, TimeoutError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except InternalConsistencyError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        print(f"{parser.prog}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
