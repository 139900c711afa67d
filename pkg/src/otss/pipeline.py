"""Solver front door: per-component solving, deadline caps and auto selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from otss.instance import Instance, Solution
from otss.oracle import brute_force_min
from otss.pvc3 import solve_pvc3
from otss.structure import (
    cap_rounds_by_chains,
    cap_rounds_by_pvc3,
    cap_rounds_by_size,
    cap_rounds_by_treedepth,
    exact_k_path_vertex_cover,
    exact_vertex_cover,
    heuristic_td,
    latest_activation_rounds,
    make_nice,
    treedepth,
)
from otss.twdp import solve_twdp
from otss.vc_solver import solve_vc

INF = math.inf
ALGOS = ("brute", "vc", "twdp", "pvc3")


@dataclass
class Result:
    cost: float  # minimum cost if within budget, else INF
    witness: Solution | None
    stats: dict = field(default_factory=dict)

    @property
    def answer(self) -> bool:
        return self.cost != INF


def component_instances(inst: Instance):
    """Split into connected components; each keeps the full budget and the deadline
    capped at twice its size. Yields (sub-instance, old_ids)."""
    for comp in inst.graph.components():
        g, old = inst.graph.induced(comp)
        new_of = {o: i for i, o in enumerate(old) if i}
        sub = Instance(
            g,
            (0,) + tuple(inst.f1[o] for o in old[1:]),
            (0,) + tuple(inst.f2[o] for o in old[1:]),
            frozenset(new_of[v] for v in inst.seed_a if v in new_of),
            frozenset(new_of[v] for v in inst.seed_b if v in new_of),
            inst.budget,
            inst.deadline,
        )
        yield cap_rounds_by_size(sub), old


def structural_stats(inst: Instance) -> dict:
    g = inst.graph
    vc = exact_vertex_cover(g, g.n)
    pvc = exact_k_path_vertex_cover(g, 3, g.n)
    td, exact = treedepth(g)
    tw = heuristic_td(g).width if g.n else -1
    out = {
        "n": g.n,
        "m": g.m,
        "f_max": inst.max_threshold(),
        "vc": len(vc),
        "pvc3": len(pvc),
        "td": td,
        "td_exact": exact,
        "tw_bound": tw,
        "deadline": inst.deadline,
    }
    out["cap_td"] = cap_rounds_by_treedepth(inst, td).deadline
    out["cap_pvc3"] = cap_rounds_by_pvc3(inst, len(pvc)).deadline
    return out


def _solve_component(sub: Instance, algo: str, opts: dict):
    B = sub.budget
    if algo == "brute":
        return brute_force_min(sub, restrict=opts.get("restrict"), limit=opts.get("limit", 5_000_000))
    if algo == "vc":
        return solve_vc(sub, opts.get("cover"))
    if sub.n <= 12:
        td, _ = treedepth(sub.graph)
        sub = cap_rounds_by_treedepth(sub, td)
    bounds = latest_activation_rounds(sub)
    sub = cap_rounds_by_chains(sub, bounds)
    if algo == "twdp":
        nice = opts.get("nice") or make_nice(sub.graph, heuristic_td(sub.graph), eager_edges=True)
        return solve_twdp(sub, nice, budget=B, witness=True, bounds=bounds)
    if algo == "pvc3":
        pvc = opts.get("pvc")
        if pvc is None:
            pvc = exact_k_path_vertex_cover(sub.graph, 3, sub.n)
        sub = cap_rounds_by_pvc3(sub, len(pvc))
        return solve_pvc3(sub, pvc, budget=B, bounds=bounds)
    raise ValueError(f"unknown algorithm {algo!r}")


def choose_algo(inst: Instance) -> str:
    if inst.n <= 10:
        return "brute"
    g = inst.graph
    vc = exact_vertex_cover(g, 6)
    if vc is not None and len(vc) <= 5:
        return "vc"
    pvc = exact_k_path_vertex_cover(g, 3, 3)
    if pvc is not None and len(pvc) <= 2:
        return "pvc3"
    return "twdp"


def solve(inst: Instance, algo: str = "auto", **opts) -> Result:
    """Minimum cost within budget. User-supplied structures (cover, pvc, nice)
    refer to the whole instance and disable component splitting."""
    if algo == "auto":
        algo = choose_algo(inst)
    whole = any(opts.get(k) is not None for k in ("cover", "pvc", "nice", "restrict"))
    if algo == "brute" or whole:
        sub = inst
        if algo in ("twdp", "pvc3"):
            sub = cap_rounds_by_size(inst)
            bounds = latest_activation_rounds(sub)
            sub = cap_rounds_by_chains(sub, bounds)
        if algo == "pvc3" and opts.get("pvc") is not None:
            sub = cap_rounds_by_pvc3(sub, len(opts["pvc"]))
            cost, sol = solve_pvc3(sub, opts["pvc"], budget=inst.budget, bounds=bounds)
        elif algo == "twdp" and opts.get("nice") is not None:
            cost, sol = solve_twdp(sub, opts["nice"], budget=inst.budget, witness=True, bounds=bounds)
        else:
            cost, sol = _solve_component(sub, algo, opts)
        if cost > inst.budget:
            cost, sol = INF, None
        return Result(cost, sol, {"algo": algo, "components": 1})
    parts = list(component_instances(inst))
    stats = {"algo": algo, "components": len(parts)}
    threads = opts.get("threads") or 1
    if threads > 1 and len(parts) > 1:
        # components are independent; each gets the full budget and costs are summed
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(_solve_component, sub, algo, opts) for sub, _ in parts]
            results = [f.result() for f in futs]
    else:
        results = None
    total, ta, tb = 0, set(), set()
    for k, (sub, old) in enumerate(parts):
        if results is None:
            cost, sol = _solve_component(sub.with_(budget=inst.budget - total), algo, opts)
        else:
            cost, sol = results[k]
        if cost == INF or total + cost > inst.budget:
            return Result(INF, None, stats)
        total += cost
        if sol is not None:
            ta |= {old[v] for v in sol.target_a}
            tb |= {old[v] for v in sol.target_b}
    return Result(total, Solution.of(ta, tb), stats)
