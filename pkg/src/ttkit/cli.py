"""Command-line interface: ``ttkit <command> [options] FILE.gm``.

Exit status 0 on success, 1 on domain errors (an error JSON object is
printed), 2 on usage errors.  Set TTKIT_THREADS to cap internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import ct as ctmod
from . import growth, maps, outer_space
from .errors import TtkitError
from .gm import load_gm
from .graph import Circuit, Turn, format_word

SCHEMA = 1


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=False)


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _load(path):
    doc = load_gm(path)
    if doc.map is None:
        raise UsageError(f"{path}: this command needs a map block")
    return doc


def _ct(doc, args):
    return ctmod.build_ct_data(doc.map, doc.filtration, inp_budget=getattr(args, "L", ctmod.DEFAULT_INP_BUDGET))


def _word(doc, text):
    return doc.graph.parse_word(text)


# ---------------------------------------------------------------------------
# commands: each returns (json payload, text lines)
# ---------------------------------------------------------------------------

def cmd_parse(args):
    doc = load_gm(args.file)
    g = doc.graph
    payload = {
        "graph": {
            "vertices": list(g.vertices),
            "edges": {e: [g.origin(e), g.terminus(e)] for e in g.edges},
            "rank": g.rank,
        }
    }
    lines = [f"vertices: {' '.join(g.vertices)}", f"edges: {' '.join(g.edges)}", f"rank: {g.rank}"]
    if doc.map is not None:
        payload["map"] = {e: list(doc.map.image(e)) for e in g.edges}
        lines += [f"{e} -> {format_word(doc.map.image(e))}" for e in g.edges]
    if doc.filtration is not None:
        payload["filtration"] = [
            {"name": s.name, "edges": list(s.edges), "declared": s.declared} for s in doc.filtration.strata
        ]
        payload["filtration_declared"] = doc.filtration_declared
    if doc.metric is not None:
        payload["metric"] = doc.metric
    return payload, lines


def cmd_strata(args):
    doc = _load(args.file)
    td = maps.transition_data(doc.map, doc.filtration)
    lines = []
    for s in td.strata:
        extra = f" lambda={s.eigenvalue:.10f}" if s.kind == maps.EG else ""
        lines.append(f"{s.name} [{s.kind}] {' '.join(s.edges)} M={s.matrix.tolist()}{extra}")
    return {"strata": [s.to_json() for s in td.strata]}, lines


def cmd_gates(args):
    doc = _load(args.file)
    gp = maps.gates(doc.map)
    payload = {"gates": gp.as_lists()}
    lines = ["gates: " + " ".join("{" + ",".join(g) + "}" for g in gp.as_lists())]
    if args.turn:
        e1, e2 = [x.strip() for x in args.turn.split(",")]
        legal = maps.is_legal(gp, Turn.of(e1, e2))
        payload["turn"] = {"turn": str(Turn.of(e1, e2)), "legal": legal}
        lines.append(f"turn {Turn.of(e1, e2)}: {'legal' if legal else 'illegal'}")
    if args.path:
        word = _word(doc, args.path)
        ok, verdicts = maps.is_legal(gp, doc.graph.path(word))
        payload["path"] = {
            "path": format_word(word),
            "legal": ok,
            "turns": [{"turn": str(t), "legal": v} for t, v in verdicts],
        }
        lines.append(f"path {format_word(word)}: {'legal' if ok else 'illegal'}")
        lines += [f"  {t}: {'legal' if v else 'illegal'}" for t, v in verdicts]
    return payload, lines


def cmd_rtt(args):
    doc = _load(args.file)
    rep = maps.check_rtt(doc.map, doc.filtration, depth=args.depth)
    lines = [f"{'pass' if rep.passed else 'FAIL'}" + (f" ({rep.note})" if rep.note else "")]
    for v in rep.verdicts:
        lines.append(f"{v.stratum} {v.axiom}: {v.status} - {v.note} {_compact(v.witness)}")
    return {"rtt": rep.to_json()}, lines


def cmd_tau(args):
    doc = _load(args.file)
    td = maps.transition_data(doc.map, doc.filtration)
    tau = outer_space.translation_length_formula(doc.map, doc.filtration, td)
    payload = {
        "lambda_per_stratum": {s.name: s.eigenvalue for s in td.eg_strata()},
        "tau_formula": tau,
    }
    if args.mode == "formula":
        return payload, [f"{tau:.10f}"]
    rows = outer_space.translation_length_empirical(doc.map, doc.filtration, args.n, args.eps, td, cap=args.cap)
    payload["empirical"] = rows
    lines = [f"formula {tau:.10f}"]
    lines += [f"n={r['n']} lower/n={r['lower_over_n']:.10f} upper_step={r['upper_step']:.10f}" for r in rows]
    return payload, lines


def _metric_for(doc, kind):
    if kind == "unit":
        return outer_space.unit_metric(doc.graph)
    if kind == "pf":
        return outer_space.basepoint_metric(doc.map, doc.filtration)
    if kind == "gm":
        if doc.metric is None:
            raise UsageError("input has no metric block")
        return outer_space.MetricGraph(doc.graph, doc.metric)
    raise UsageError(f"unknown metric {kind!r}")


def cmd_dist(args):
    doc = _load(args.file)
    m1 = _metric_for(doc, args.source)
    m2 = _metric_for(doc, args.target)
    li = outer_space.lipschitz_interval(m1, m2, doc.map, normalize=args.normalize)
    payload = {
        "lower": li.lower,
        "upper": li.upper,
        "lower_witness": str(li.lower_witness),
        "upper_witness": li.upper_witness,
        "candidates": li.candidate_table,
        "edges": li.edge_table,
    }
    text = f"{li.lower:.10f}" if li.exact else f"[{li.lower:.10f}, {li.upper:.10f}]"
    return payload, [text]


def cmd_inp(args):
    doc = _load(args.file)
    if args.strategy == "bounded":
        found = ctmod.inp_search_bounded(doc.map, args.L)
    else:
        found = ctmod.inp_search_arrival_tree(doc.map, doc.filtration, args.h)
    return {"strategy": args.strategy, "inps": [list(w) for w in found]}, [format_word(w) for w in found]


def cmd_split(args):
    doc = _load(args.file)
    ct = _ct(doc, args)
    word = _word(doc, args.path)
    target = Circuit(word) if args.circuit else doc.graph.path(word)
    sp = ctmod.complete_split(ct, target, qe=args.qe)
    lines = [" . ".join(format_word(t.edges) for t in sp.terms), " ".join(str(t) for t in sp.terms)]
    return {"path": format_word(word), "circuit": args.circuit, "terms": sp.to_json()}, lines


def cmd_csp(args):
    doc = _load(args.file)
    ct = _ct(doc, args)
    g = ctmod.csp_graph(ct, "qe" if args.qe else "full")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(ctmod.export_dot(g))
    lines = [f"{u} -> {', '.join(g.succ[u])}" for u in g.vertices]
    return {"csp": g.to_json()}, lines


def cmd_scc(args):
    doc = _load(args.file)
    ct = _ct(doc, args)
    g = ctmod.csp_graph(ct, "qe" if args.qe else "full")
    res = ctmod.scc(g)
    lines = [f"{i}: {' '.join(c)}" for i, c in enumerate(res.components)]
    return {"components": res.components, "condensation": [list(e) for e in res.condensation]}, lines


def _covering(doc, args, qe=None):
    ct = _ct(doc, args)
    g = ctmod.csp_graph(ct, "qe" if (args.qe if qe is None else qe) else "full")
    return ct, ctmod.covering_circuit(ct, g, exponent=getattr(args, "exponent", 1))


def cmd_circuit(args):
    doc = _load(args.file)
    _, cc = _covering(doc, args)
    lines = [format_word(cc.circuit.edges), " . ".join(str(t) for t in cc.terms)]
    return {"covering_circuit": cc.to_json()}, lines


def cmd_omega(args):
    doc = _load(args.file)
    ct = ctmod.build_ct_data(doc.map, doc.filtration, inverse=args.inverse)
    vec = growth.omega_vector(ct)
    verdict = growth.genericity_check([vec])[0]
    return {"omega": vec.flat(), "genericity": verdict.to_json()}, [_compact(vec.flat())]


def cmd_twist(args):
    doc = _load(args.file)
    if args.tau:
        tau = Circuit(_word(doc, args.tau))
    else:
        tau = _covering(doc, args, qe=False)[1].circuit
    if args.sigma:
        rep = growth.tw_about(tau, Circuit(_word(doc, args.sigma)))
    else:
        rep = growth.tw_max(tau)
    payload = {"tau": format_word(tau.edges), "twist": rep.to_json()}
    wit = "" if rep.sigma is None else f" (sigma={format_word(rep.sigma)}, position={rep.position}, k={rep.k})"
    return payload, [f"{rep.value}{wit}"]


def cmd_twist_growth(args):
    doc = _load(args.file)
    ct, cc = _covering(doc, args, qe=False)
    tg = growth.twist_growth(ct, cc.circuit, args.t)
    lines = [f"t={r['t']} tw={r['tw']} sigma={r['sigma']} length={r['length']}" for r in tg.rows]
    lines.append(f"t0={tg.t0}" if tg.t0 is not None else ("degenerate" if tg.degenerate else f"t0 not found <= {args.t}"))
    return {"sigma0": format_word(cc.circuit.edges), "twist_growth": tg.to_json()}, lines


def cmd_bcc(args):
    doc = _load(args.file)
    value, note = growth.bcc_estimate(doc.map, args.depth)
    return {"bcc_lower": value, "depth": args.depth, "note": note}, [f"{value} ({note})"]


def cmd_certify(args):
    files = [args.file] + list(args.more)
    gens = [ctmod.build_ct_data(d.map, d.filtration) for d in map(_load, files)]
    try:
        p = [int(x) for x in args.p.split(",")]
    except ValueError:
        raise UsageError(f"--p expects comma-separated integers, got {args.p!r}") from None
    cert = growth.distortion_certificate(
        gens, p, D1=args.D1, D2=args.D2, K2=args.K2, estimate=not args.no_estimate, bcc_depth=args.depth
    )
    lines = [f"lower bound {cert.lower:.10f} ({cert.status})"]
    lines += [f"  {row['step']}: {row['value']}" for row in cert.chain]
    return {"certificate": cert.to_json()}, lines


COMMANDS = {
    "parse": cmd_parse,
    "strata": cmd_strata,
    "gates": cmd_gates,
    "rtt": cmd_rtt,
    "tau": cmd_tau,
    "dist": cmd_dist,
    "inp": cmd_inp,
    "split": cmd_split,
    "csp": cmd_csp,
    "scc": cmd_scc,
    "circuit": cmd_circuit,
    "omega": cmd_omega,
    "twist": cmd_twist,
    "twist-growth": cmd_twist_growth,
    "bcc": cmd_bcc,
    "certify": cmd_certify,
}


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help=".gm input")
        p.add_argument("--format", choices=["text", "json"], default="text")
        return p

    add("parse", "parse and validate a .gm file")
    add("strata", "transition matrices, classes and PF data")
    p = add("gates", "gate partition and legality")
    p.add_argument("--turn", help="two directions, e.g. \"a',b'\"")
    p.add_argument("--path", help="edge word to audit")
    p = add("rtt", "check the relative train track axioms")
    p.add_argument("--depth", type=_positive_int, default=6, help="connecting-path search depth (default 6)")
    p = add("tau", "translation length")
    p.add_argument("--mode", choices=["formula", "empirical"], default="formula")
    p.add_argument("--n", type=_positive_int, default=10, help="iterates for empirical mode (default 10)")
    p.add_argument("--eps", type=_positive_float, default=0.1, help="epsilon for the upper bound (default 0.1)")
    p.add_argument("--cap", type=_positive_int, default=outer_space.PATH_CAP,
                   help="abort once an iterate exceeds this many edges (default 10^7)")
    p = add("dist", "Lipschitz distance bounds along the map")
    p.add_argument("--source", choices=["unit", "pf", "gm"], default="unit")
    p.add_argument("--target", choices=["unit", "pf", "gm"], default="unit")
    p.add_argument("--normalize", action="store_true", help="scale both metrics to volume 1")
    p = add("inp", "indivisible Nielsen paths")
    p.add_argument("--strategy", choices=["bounded", "arrival_tree"], default="bounded")
    p.add_argument("--L", type=_positive_int, default=6, help="length bound (default 6)")
    p.add_argument("--h", type=_positive_int, default=4, help="arrival tree height (default 4)")
    for name, help_text in (("split", "complete splitting of a path"), ("csp", "CSP digraph"),
                            ("scc", "strongly connected components of the CSP digraph"),
                            ("circuit", "covering circuit of the CSP digraph")):
        p = add(name, help_text)
        p.add_argument("--qe", action="store_true", help="use the QE coarsening")
        p.add_argument("--L", type=_positive_int, default=6, help="INP search bound (default 6)")
        if name == "split":
            p.add_argument("--path", required=True, help="edge word")
            p.add_argument("--circuit", action="store_true", help="treat the word as a circuit")
        if name == "csp":
            p.add_argument("--dot", help="write DOT to this file")
        if name == "circuit":
            p.add_argument("--exponent", type=_positive_int, default=1, help="family exponent (default 1)")
    p = add("omega", "Omega coordinates and genericity")
    p.add_argument("--inverse", action="store_true", help="the CT represents the inverse element")
    p = add("twist", "twisting of a circuit (default: covering circuit)")
    p.add_argument("--sigma", help="circuit to twist about (default: maximize over all)")
    p.add_argument("--tau", help="target circuit")
    p = add("twist-growth", "twisting along the covering-circuit orbit")
    p.add_argument("--t", type=_positive_int, default=10, help="iterations (default 10)")
    p = add("bcc", "bounded cancellation lower bound")
    p.add_argument("--depth", type=_positive_int, default=2, help="word length bound (default 2)")
    p = add("certify", "distortion lower-bound certificate")
    p.add_argument("more", nargs="*", help="further generator .gm files")
    p.add_argument("--p", required=True, help="exponent vector, e.g. 2,1")
    p.add_argument("--D1", type=_positive_float)
    p.add_argument("--D2", type=_positive_float)
    p.add_argument("--K2", type=float)
    p.add_argument("--no-estimate", action="store_true", help="refuse to estimate missing constants")
    p.add_argument("--depth", type=_positive_int, default=2, help="BCC estimation depth (default 2)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, lines = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ttkit: error: {exc}", file=sys.stderr)
        return 2
    except (TtkitError, OSError) as exc:
        category = getattr(exc, "category", "io")
        err = json.dumps({"schema": SCHEMA, "error": {"category": category, "message": str(exc)}})
        print(err, file=sys.stdout if args.format == "json" else sys.stderr)
        return 1
    if args.format == "json":
        print(_dump({"command": args.command, **payload}))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
