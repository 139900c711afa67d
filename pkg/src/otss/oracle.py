"""Exhaustive ground-truth solver."""

from __future__ import annotations

import math
from itertools import combinations

from otss.instance import Instance, Solution
from otss.process import Engine

INF = math.inf
DEFAULT_LIMIT = 5_000_000


class ResourceLimit(RuntimeError):
    pass


def _slots(inst: Instance, restrict):
    vs = sorted(restrict) if restrict is not None else list(inst.graph.vertices())
    out = []
    for v in vs:
        if v not in inst.seed_a:
            out.append((v, 0))
        if v not in inst.seed_b:
            out.append((v, 1))
    return out


def brute_force_min(inst: Instance, restrict=None, limit: int = DEFAULT_LIMIT):
    """Cheapest accepted (T_a, T_b) inside restrict x restrict with cost <= B.

    Pairs are tried by increasing cost, then lexicographically over (vertex, opinion)
    slots; buying an opinion a vertex is already seeded with is never useful and is
    skipped. Returns (cost, Solution) or (inf, None).
    """
    eng = Engine(inst)
    slots = _slots(inst, restrict)
    kmax = min(inst.budget, len(slots))

    # Buying the opposite seeds gives everybody equal counts; if that succeeds
    # it bounds the search.
    only_a = inst.seed_a - inst.seed_b
    only_b = inst.seed_b - inst.seed_a
    allowed = set(v for v, _ in slots)
    if only_a <= allowed and only_b <= allowed:
        ta = sum(1 << v for v in only_b)
        tb = sum(1 << v for v in only_a)
        if eng.succeeds(ta, tb):
            kmax = min(kmax, len(only_a) + len(only_b))

    total = sum(math.comb(len(slots), k) for k in range(kmax + 1))
    if total > limit:
        raise ResourceLimit(f"brute force would try {total} pairs (limit {limit})")

    bits = [(1 << v, c) for v, c in slots]
    for k in range(kmax + 1):
        for combo in combinations(range(len(bits)), k):
            ta = tb = 0
            for i in combo:
                b, c = bits[i]
                if c == 0:
                    ta |= b
                else:
                    tb |= b
            if eng.succeeds(ta, tb):
                return k, Solution.of(
                    [slots[i][0] for i in combo if slots[i][1] == 0],
                    [slots[i][0] for i in combo if slots[i][1] == 1],
                )
    return INF, None


def brute_force_decide(inst: Instance, restrict=None, limit: int = DEFAULT_LIMIT) -> bool:
    cost, _ = brute_force_min(inst, restrict, limit)
    return cost <= inst.budget


def tss_brute_force(n: int, nbr_lists, f, k: int, max_rounds: int | None = None):
    """Minimum target set for classic (single opinion) TSS, or inf if above k.

    nbr_lists[v] are neighbours for v in 1..n, f[v] thresholds (index 0 unused).
    With max_rounds set, everyone must be active after that many rounds.
    """
    nbr = [0] * (n + 1)
    for v in range(1, n + 1):
        for u in nbr_lists[v]:
            nbr[v] |= 1 << u
    full = sum(1 << v for v in range(1, n + 1))

    def spreads(p):
        t = 0
        while p != full:
            if max_rounds is not None and t >= max_rounds:
                return False
            q = p
            for v in range(1, n + 1):
                if not p >> v & 1 and (nbr[v] & p).bit_count() >= f[v]:
                    q |= 1 << v
            if q == p:
                return False
            p = q
            t += 1
        return True

    for size in range(min(k, n) + 1):
        for combo in combinations(range(1, n + 1), size):
            if spreads(sum(1 << v for v in combo)):
                return size, frozenset(combo)
    return INF, None
