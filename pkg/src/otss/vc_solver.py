"""Exact solver parameterized by vertex cover size.

After reduction, vertices outside the cover C split into twin classes (same
neighbourhood, thresholds and seed status). Members of a class are interchangeable,
so a purchase is determined by an opinion choice per cover vertex and, per class,
how many members buy both opinions, only a and only b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from otss.instance import Instance, Solution
from otss.process import Engine
from otss.reductions import Kind, is_vertex_cover, reduce_fixpoint, rr4_cost_bound
from otss.structure import exact_vertex_cover

INF = math.inf


@dataclass(frozen=True)
class TwinClass:
    representative: int
    members: tuple
    signature: tuple  # (neighbourhood, f1, f2, in S_a, in S_b)

    @property
    def size(self) -> int:
        return len(self.members)


def build_twin_classes(inst: Instance, cover) -> list:
    if not is_vertex_cover(inst, cover):
        raise ValueError("not a vertex cover")
    groups = {}
    for v in inst.graph.vertices():
        if v in cover:
            continue
        sig = (
            inst.graph.neighbors(v),
            inst.f1[v],
            inst.f2[v],
            v in inst.seed_a,
            v in inst.seed_b,
        )
        groups.setdefault(sig, []).append(v)
    out = [TwinClass(min(m), tuple(sorted(m)), sig) for sig, m in groups.items()]
    return sorted(out, key=lambda c: c.representative)


def _choices(inst, kinds):
    """Per kind the list of (cost, a-members, b-members) purchase options."""
    out = []
    for members, sa, sb in kinds:
        opts = []
        size = len(members)
        for both in range(size + 1):
            for only_a in range(size - both + 1):
                for only_b in range(size - both - only_a + 1):
                    na, nb = both + only_a, both + only_b
                    if (sa and na) or (sb and nb):
                        continue
                    ta = members[:both] + members[both:both + only_a]
                    tb = members[:both] + members[both + only_a:both + only_a + only_b]
                    opts.append((na + nb, ta, tb))
        opts.sort(key=lambda o: o[0])
        out.append(opts)
    return out


def _enumerate(inst: Instance, cover, budget):
    """Cheapest accepted purchase within budget on an already reduced instance."""
    classes = build_twin_classes(inst, cover)
    kinds = [((v,), v in inst.seed_a, v in inst.seed_b) for v in sorted(cover)]
    kinds += [(c.members, c.signature[3], c.signature[4]) for c in classes]
    choices = _choices(inst, kinds)
    eng = Engine(inst)

    for target in range(budget + 1):
        found = _search(eng, choices, 0, target, 0, 0)
        if found is not None:
            ta, tb = found
            return target, Solution.of(
                [v for v in inst.graph.vertices() if ta >> v & 1],
                [v for v in inst.graph.vertices() if tb >> v & 1],
            )
    return INF, None


def _search(eng, choices, i, left, ta, tb):
    """Purchases of total cost exactly `left` over kinds i.. that succeed."""
    if i == len(choices):
        if left == 0 and eng.succeeds(ta, tb):
            return ta, tb
        return None
    for cost, a, b in choices[i]:
        if cost > left:
            break
        ma = ta
        for v in a:
            ma |= 1 << v
        mb = tb
        for v in b:
            mb |= 1 << v
        r = _search(eng, choices, i + 1, left - cost, ma, mb)
        if r is not None:
            return r
    return None


def solve_vc(inst: Instance, cover=None, minimize: bool = True):
    """Minimum cost within budget (INF if none) and a witness.

    With minimize=False a Rule 4 yes is reported with the cover purchase as the
    witness, without searching for cheaper ones.
    """
    if cover is None:
        cover = exact_vertex_cover(inst.graph, inst.n)
    elif not is_vertex_cover(inst, cover):
        raise ValueError("not a vertex cover")
    red = reduce_fixpoint(inst, cover)
    forced = red.forced.cost
    if red.kind is Kind.TRIVIAL_NO:
        return INF, None
    if red.kind is Kind.TRIVIAL_YES:
        # redo the reduction without Rule 4 to get the instance it fired on
        red = reduce_fixpoint(inst)
        cur = red.instance
        new_of = {o: i for i, o in enumerate(red.old_ids) if i}
        c = frozenset(new_of[v] for v in cover if v in new_of)
        bound = rr4_cost_bound(cur, c)
        if not minimize:
            sol = Solution.of(c - cur.seed_a, c - cur.seed_b)
            lifted = red.lift(sol)
            return lifted.cost, lifted
        cost, sol = _enumerate(cur, c, min(bound, cur.budget))
    else:
        cur = red.instance
        cost, sol = _enumerate(cur, red.cover, cur.budget)
    if sol is None:
        return INF, None
    lifted = red.lift(sol)
    return cost + forced, lifted
