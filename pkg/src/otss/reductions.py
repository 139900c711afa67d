"""Safe instance rewrites and the priority-ordered fixpoint driver.

Rule 1 deletes a vertex seeded with both opinions, Rule 2 forces the purchase of the
missing opinion of a seed that can never collect it, Rule 3 caps thresholds at
deg+1 and Rule 4 answers yes when the budget covers buying both opinions on a
vertex cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from otss.instance import Instance, Solution


class Kind(str, Enum):
    REWRITTEN = "Rewritten"
    TRIVIAL_YES = "TrivialYes"
    TRIVIAL_NO = "TrivialNo"
    UNCHANGED = "Unchanged"


@dataclass
class ReductionOutcome:
    kind: Kind
    rule: int | None = None
    instance: Instance | None = None
    old_ids: tuple | None = None  # new id -> input id, set when vertices were renamed
    forced: tuple | None = None  # (vertex, opinion) bought by Rule 2


def rr1_merge_dual_seed(inst: Instance) -> ReductionOutcome:
    both = inst.seed_a & inst.seed_b
    if not both:
        return ReductionOutcome(Kind.UNCHANGED)
    v = min(both)
    g = inst.graph
    f1, f2 = list(inst.f1), list(inst.f2)
    for u in g.neighbors(v):
        f1[u] = max(0, f1[u] - 1)
        f2[u] = max(0, f2[u] - 1)
    keep = [u for u in g.vertices() if u != v]
    h, old = g.induced(keep)
    new_of = {o: i for i, o in enumerate(old) if i}
    out = Instance(
        h,
        (0,) + tuple(f1[o] for o in old[1:]),
        (0,) + tuple(f2[o] for o in old[1:]),
        frozenset(new_of[u] for u in inst.seed_a if u != v),
        frozenset(new_of[u] for u in inst.seed_b if u != v),
        inst.budget,
        inst.deadline,
    )
    return ReductionOutcome(Kind.REWRITTEN, 1, out, old)


def rr2_force_second_opinion(inst: Instance) -> ReductionOutcome:
    g = inst.graph
    for v in sorted(inst.seed_a ^ inst.seed_b):
        if inst.f2[v] > g.degree(v):
            missing = 1 if v in inst.seed_a else 0
            if inst.budget == 0:
                return ReductionOutcome(Kind.TRIVIAL_NO, 2, forced=(v, missing))
            out = inst.with_(
                seed_a=inst.seed_a | {v},
                seed_b=inst.seed_b | {v},
                budget=inst.budget - 1,
            )
            return ReductionOutcome(Kind.REWRITTEN, 2, out, forced=(v, missing))
    return ReductionOutcome(Kind.UNCHANGED)


def rr3_cap_thresholds(inst: Instance) -> ReductionOutcome:
    g = inst.graph
    f1 = (0,) + tuple(min(inst.f1[v], g.degree(v) + 1) for v in g.vertices())
    f2 = (0,) + tuple(min(inst.f2[v], g.degree(v) + 1) for v in g.vertices())
    if f1 == inst.f1 and f2 == inst.f2:
        return ReductionOutcome(Kind.UNCHANGED)
    return ReductionOutcome(Kind.REWRITTEN, 3, inst.with_(f1=f1, f2=f2))


def is_vertex_cover(inst_or_graph, cover) -> bool:
    g = getattr(inst_or_graph, "graph", inst_or_graph)
    return all(u in cover or v in cover for u, v in g.edges)


def rr4_cost_bound(inst: Instance, cover) -> int:
    return len(set(cover) - inst.seed_a) + len(set(cover) - inst.seed_b)


def rr4_budget_vs_cover(inst: Instance, cover) -> ReductionOutcome:
    if not is_vertex_cover(inst, cover):
        raise ValueError("rule 4 needs a vertex cover")
    # Buying both opinions on the cover settles everything in round 1, so the
    # rule is only sound when at least one round is allowed.
    if inst.deadline >= 1 and inst.budget >= rr4_cost_bound(inst, cover):
        return ReductionOutcome(Kind.TRIVIAL_YES, 4)
    return ReductionOutcome(Kind.UNCHANGED)


@dataclass
class Reduced:
    kind: Kind  # REWRITTEN/UNCHANGED (instance holds the result) or a trivial verdict
    instance: Instance | None
    log: list = field(default_factory=list)
    old_ids: tuple = ()  # reduced id -> original id
    forced: Solution = field(default_factory=Solution)  # purchases made by Rule 2, original ids
    cover: frozenset | None = None  # the cover translated to reduced ids

    def lift(self, sol: Solution) -> Solution:
        """Translate a solution of the reduced instance back and add forced purchases."""
        ta = {self.old_ids[v] for v in sol.target_a} | self.forced.target_a
        tb = {self.old_ids[v] for v in sol.target_b} | self.forced.target_b
        return Solution.of(ta, tb)


def reduce_fixpoint(inst: Instance, cover=None) -> Reduced:
    if cover is not None and not is_vertex_cover(inst, cover):
        raise ValueError("rule 4 needs a vertex cover")
    ids = tuple(range(inst.n + 1))
    cur = frozenset(cover) if cover is not None else None
    forced_a, forced_b = set(), set()
    log = []

    def done(kind, instance):
        return Reduced(kind, instance, log, ids, Solution.of(forced_a, forced_b), cur)

    while True:
        out = rr1_merge_dual_seed(inst)
        if out.kind is Kind.UNCHANGED:
            out = rr2_force_second_opinion(inst)
        if out.kind is Kind.UNCHANGED:
            out = rr3_cap_thresholds(inst)
        if out.kind is Kind.UNCHANGED and cur is not None:
            out = rr4_budget_vs_cover(inst, cur)
        if out.kind is Kind.UNCHANGED:
            return done(Kind.REWRITTEN if log else Kind.UNCHANGED, inst)
        log.append(out.rule)
        if out.forced is not None:
            v, c = out.forced
            (forced_a if c == 0 else forced_b).add(ids[v])
        if out.kind in (Kind.TRIVIAL_YES, Kind.TRIVIAL_NO):
            return done(out.kind, None)
        if out.old_ids is not None:
            new_of = {o: i for i, o in enumerate(out.old_ids) if i}
            if cur is not None:
                cur = frozenset(new_of[v] for v in cur if v in new_of)
            ids = tuple(ids[o] for o in out.old_ids)
        inst = out.instance
