"""Command line front end.

Exit codes: 0 yes/Accepted, 1 no/rejected, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

from otss import generators as gen
from otss.instance import (
    ParseError,
    parse_instance,
    parse_solution,
    parse_vertex_set,
    serialize_instance,
    serialize_solution,
)
from otss.oracle import ResourceLimit
from otss.pipeline import ALGOS, choose_algo, solve, structural_stats
from otss.process import Verdict, simulate, verify_solution
from otss.reductions import Kind, reduce_fixpoint
from otss.structure import InvalidDecomposition, make_nice, read_td

YES, NO, ERR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _ids(vs):
    return " ".join(str(v) for v in sorted(vs))


def _emit_json(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _cost(x):
    return None if x == math.inf else x


# ---------------------------------------------------------------- subcommands

def cmd_simulate(args, out):
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution), inst.n) if args.solution else None
    trace = simulate(inst, sol)
    verdict = verify_solution(inst, sol) if sol else verify_solution(inst, parse_solution("ta\ntb\n"))
    if args.json:
        _emit_json({
            "answer": verdict is Verdict.ACCEPTED,
            "verdict": verdict.value,
            "rounds": [{"a": sorted(a), "b": sorted(b)} for a, b in trace.rounds],
            "stats": {"stabilization_round": trace.stabilization_round, "deadline": inst.deadline},
        }, out)
    elif args.machine:
        for i, (a, b) in enumerate(trace.rounds):
            out.write(f"round {i} a: {_ids(a)} b: {_ids(b)}".rstrip() + "\n")
    else:
        for i, (a, b) in enumerate(trace.rounds):
            out.write(f"round {i}\n  a: {_ids(a)}\n  b: {_ids(b)}\n")
        out.write(f"stabilized after round {trace.stabilization_round} (deadline {inst.deadline})\n")
        out.write(f"verdict {verdict.value}\n")
    return YES if verdict is Verdict.ACCEPTED else NO


def cmd_verify(args, out):
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution), inst.n)
    verdict = verify_solution(inst, sol)
    if args.json:
        _emit_json({"answer": verdict is Verdict.ACCEPTED, "verdict": verdict.value,
                    "cost": sol.cost, "stats": {"budget": inst.budget}}, out)
    else:
        out.write(f"verdict {verdict.value}\n")
    return YES if verdict is Verdict.ACCEPTED else NO


def cmd_solve(args, out):
    inst = parse_instance(_read(args.instance))
    opts = {"threads": args.threads}
    if args.cover:
        opts["cover"] = parse_vertex_set(_read(args.cover))
    if args.pvc:
        opts["pvc"] = parse_vertex_set(_read(args.pvc))
    if args.restrict:
        if args.algo != "brute":
            raise UsageError("--restrict needs --algo brute")
        opts["restrict"] = parse_vertex_set(_read(args.restrict))
    if args.td:
        if args.algo not in ("twdp", "auto"):
            raise UsageError("--td needs --algo twdp")
        opts["nice"] = make_nice(inst.graph, read_td(_read(args.td)))
    algo = args.algo
    if algo == "auto":
        algo = "twdp" if args.td else choose_algo(inst)
    for key in ("cover", "pvc"):
        for v in opts.get(key, ()):
            if not 1 <= v <= inst.n:
                raise UsageError(f"--{key} vertex {v} out of range")
    res = solve(inst, algo, **opts)
    if args.json:
        obj = {"answer": res.answer, "cost": _cost(res.cost), "stats": res.stats}
        if res.witness is not None:
            obj["witness"] = {"ta": sorted(res.witness.target_a), "tb": sorted(res.witness.target_b)}
        _emit_json(obj, out)
    else:
        out.write(f"answer {'yes' if res.answer else 'no'}\n")
        out.write(f"cost {res.cost if res.answer else 'inf'}\n")
        if res.witness is not None:
            out.write(serialize_solution(res.witness))
    return YES if res.answer else NO


def cmd_reduce(args, out):
    inst = parse_instance(_read(args.instance))
    cover = parse_vertex_set(_read(args.cover)) if args.cover else None
    red = reduce_fixpoint(inst, cover)
    if args.json:
        obj = {"answer": None if red.instance is not None else red.kind is Kind.TRIVIAL_YES,
               "kind": red.kind.value, "log": list(red.log),
               "forced": {"ta": sorted(red.forced.target_a), "tb": sorted(red.forced.target_b)},
               "stats": {"n_before": inst.n, "n_after": red.instance.n if red.instance else 0}}
        if red.instance is not None:
            obj["instance"] = serialize_instance(red.instance)
        _emit_json(obj, out)
    else:
        for rule in red.log:
            out.write(f"c rule {rule}\n")
        if red.forced.cost:
            out.write(f"c forced ta {_ids(red.forced.target_a)} tb {_ids(red.forced.target_b)}".rstrip() + "\n")
        if red.instance is None:
            out.write(f"verdict {red.kind.value}\n")
        else:
            out.write(serialize_instance(red.instance))
    if red.kind is Kind.TRIVIAL_NO:
        return NO
    return YES


def cmd_stats(args, out):
    inst = parse_instance(_read(args.instance))
    st = structural_stats(inst)
    if args.json:
        _emit_json({"answer": None, "stats": st}, out)
    else:
        for k in sorted(st):
            out.write(f"{k} {str(st[k]).lower() if isinstance(st[k], bool) else st[k]}\n")
    return YES


def _random_psi(rng, host_n, pattern):
    h_n, h_edges = {"k2": (2, [(1, 2)]), "p3": (3, [(1, 2), (2, 3)])}[pattern]
    for _ in range(10_000):
        col = [rng.randint(1, h_n) for _ in range(host_n)]
        edges = [(u, v) for u in range(1, host_n + 1) for v in range(u + 1, host_n + 1)
                 if rng.random() < 0.5]
        p = gen.PsiInstance.build(host_n, edges, h_n, h_edges, col)
        try:
            p.check()
        except ValueError:
            continue
        return p
    raise UsageError("no admissible colouring found; increase --host-n")


def cmd_generate(args, out):
    rng = random.Random(args.seed)
    comments, label = [], None
    kind = args.kind
    if kind == "selection":
        inst, _ = gen.gen_selection_gadget(args.nw, args.preselected)
        label = True
    elif kind in ("psi-tw", "psi-rounds"):
        if args.host_n < (2 if args.pattern == "k2" else 3):
            raise UsageError("--host-n too small for the pattern")
        p = _random_psi(rng, args.host_n, args.pattern)
        red = (gen.gen_psi_treewidth if kind == "psi-tw" else gen.gen_psi_rounds)(p)
        inst, label = red.instance, red.label
        comments.append("psi host " + " ".join(f"{u}-{v}" for u, v in p.G.sorted_edges()))
        comments.append("psi colours " + " ".join(str(w) for w in p.psi[1:]))
    elif kind in ("tss", "f1ge"):
        g, f, k = gen.random_tss(args.n, args.edge_prob, args.f_max, args.budget, args.seed)
        comments.append("tss thresholds " + " ".join(str(x) for x in f))
        if kind == "tss":
            inst = gen.gen_tss_embedding(g, f, k)
        else:
            inst = gen.gen_f1_ge_f2(g, f, k, args.deadline if args.deadline is not None else 6)
    elif kind == "random":
        inst = gen.gen_random(args.n, args.edge_prob, args.f_max, args.seed_prob, args.budget, args.seed,
                              args.deadline)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown construction {kind}")
    if label is not None:
        comments.insert(0, f"label {'yes' if label else 'no'}")
    out.write(serialize_instance(inst, comments))
    return YES


# ---------------------------------------------------------------- parser

def build_parser():
    ap = argparse.ArgumentParser(prog="otss", description="Two-opinion target set selection tools.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simulate", help="run the activation process")
    p.add_argument("instance")
    p.add_argument("--solution", help="file with 'ta' and 'tb' lines")
    p.add_argument("--machine", action="store_true", help="one line per round")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a solution")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="minimum cost solution within the budget")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGOS + ("auto",), default="auto")
    p.add_argument("--td", help="tree decomposition in .td format (twdp)")
    p.add_argument("--cover", help="vertex cover ids (vc)")
    p.add_argument("--pvc", help="3-path vertex cover ids (pvc3)")
    p.add_argument("--restrict", help="only buy these vertices (brute)")
    p.add_argument("--threads", type=int, default=1, help="worker processes across components")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="apply the reduction rules to a fixpoint")
    p.add_argument("instance")
    p.add_argument("--cover", help="vertex cover ids enabling the budget rule")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("stats", help="structural parameters and round caps")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="emit a generated instance")
    p.add_argument("kind", choices=["selection", "psi-tw", "psi-rounds", "tss", "f1ge", "random"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nw", type=int, default=3, help="selection vertices (selection)")
    p.add_argument("--preselected", choices=["a", "b"], default="a")
    p.add_argument("--pattern", choices=["k2", "p3"], default="k2")
    p.add_argument("--host-n", type=int, default=4)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--f-max", type=int, default=2)
    p.add_argument("--seed-prob", type=float, default=0.2)
    p.add_argument("--budget", type=int, default=2)
    p.add_argument("--deadline", type=int)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return ERR if exc.code else YES
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        sys.stderr.write("error: --threads must be positive\n")
        return ERR
    try:
        return args.func(args, out)
    except (ParseError, InvalidDecomposition, UsageError, ResourceLimit, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERR


if __name__ == "__main__":
    sys.exit(main())
