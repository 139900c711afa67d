"""Dynamic programming over a nice tree decomposition.

A pattern assigns every bag vertex a state
    (r_a, r_b, g_a, g_b, h_a, h_b, e_a, e_b)
where r_c is the round in which the vertex gets opinion c (INF for never),
g_c is a lower bound on its c-neighbours active at round r_c - 1, h_c an upper
bound on them at round r_c - 2 (at the deadline when r_c is INF) and e_c an upper
bound on c-neighbours at round r_{not c} - 1. The e bound is only in use when the
vertex takes opinion not-c first and c at least two rounds later; it records that
the vertex did not pick up c together with its first opinion. With literal=True
the e fields stay 0, which reproduces the bare six-field table.

Counts only include neighbours inside the subgraph G_x seen so far; edges are
charged when introduced. The table value is the cheapest purchase inside V_x
complying with the pattern.
"""

from __future__ import annotations

import math
import sys
from itertools import product

from otss.instance import Instance, Solution
from otss.structure import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    nice_decomposition,
)

INF = math.inf
RA, RB, GA, GB, HA, HB, EA, EB = range(8)


def e_round(s, c):
    """Round whose c-count the e bound of state s limits, or None when unused."""
    first = s[1 - c]
    if 1 <= first < INF and s[c] < INF and s[c] >= first + 2:
        return first - 1
    return None


def q_row(f1, f2, ra, rb, literal=False):
    """Requirements a vertex with rounds (ra, rb) puts on its neighbourhood, or None
    if some entry would be negative (the rounds are impossible for these thresholds)."""
    if ra == INF:
        row = [INF, INF, 0, 0, f1 - 1, f1 - 1, 0, 0]
    else:
        row = [ra, rb, 0, 0, 0, 0, 0, 0]
        p = 0 if ra <= rb else 1
        s = 1 - p
        rp, rs = row[p], row[s]
        if rp == 0:
            if rs >= 1:
                row[2 + s] = f2
                row[4 + s] = f2 - 1 if rs >= 2 else 0
        elif rp == rs:
            row[2] = row[3] = f1
            row[4] = row[5] = f1 - 1 if rp >= 2 else 0
        else:
            row[2 + p] = f1
            row[2 + s] = f2
            row[4 + p] = f1 - 1 if rp >= 2 else 0
            if rs == rp + 1:
                row[4 + s] = f1 - 1
            else:
                row[4 + s] = f2 - 1
                if not literal:
                    row[6 + s] = f1 - 1
    if min(row[2:]) < 0:
        return None
    return tuple(row)


def round_pairs(inst, v, T, bounds=None):
    """Admissible (r_a, r_b) for v: seeds fix their round to 0. With `bounds`
    ({(v, c): latest round}) positive rounds beyond the bound are dropped."""
    la = lb = T
    if bounds is not None:
        la, lb = min(T, bounds[v, 0]), min(T, bounds[v, 1])
    ra = [0] + list(range(1, la + 1))
    rb = [0] + list(range(1, lb + 1))
    sa, sb = v in inst.seed_a, v in inst.seed_b
    if sa and sb:
        return [(0, 0)]
    if sa:
        return [(0, r) for r in rb]
    if sb:
        return [(r, 0) for r in ra]
    return [(a, b) for a in ra for b in rb] + [(INF, INF)]


def clamp_row(q, deg):
    """Drop a row whose lower bounds exceed the degree, cap upper bounds at it."""
    if q is None or q[GA] > deg or q[GB] > deg:
        return None
    return q[:4] + tuple(x if x < deg else deg for x in q[4:])


class TreewidthDP:
    def __init__(self, inst: Instance, nice: NiceTreeDecomposition, budget=None, literal=False,
                 bounds=None, clamp=False):
        self.inst = inst
        self.bounds = bounds
        self.clamp = clamp
        self.nice = nice
        self.T = inst.deadline
        self.budget = budget
        self.literal = literal
        self.fmax = inst.max_threshold()
        self.memo = [dict() for _ in nice.nodes]
        self._forget_rows = {}

    # ------------------------------------------------------------ patterns

    def rounds(self):
        return list(range(self.T + 1)) + [INF]

    def round_pairs(self, v):
        return round_pairs(self.inst, v, self.T, self.bounds)

    def vertex_states(self, v):
        """All valid states for bag vertex v."""
        out = []
        fr = range(self.fmax + 1)
        for ra, rb in self.round_pairs(v):
            rs = (ra, rb)
            g_opts = [fr if 1 <= r < INF else (0,) for r in rs]
            h_opts = [fr if r >= 2 else (0,) for r in rs]
            e_opts = []
            for c in (0, 1):
                s = (ra, rb)
                use = not self.literal and e_round(s + (0,) * 6, c) is not None
                e_opts.append(fr if use else (0,))
            for ga, gb, ha, hb, ea, eb in product(*g_opts, *h_opts, *e_opts):
                out.append((ra, rb, ga, gb, ha, hb, ea, eb))
        return out

    def is_valid_state(self, v, s) -> bool:
        ra, rb = s[RA], s[RB]
        if (ra == INF) != (rb == INF):
            return False
        for c in (0, 1):
            r = s[c]
            if r != INF and not 0 <= r <= self.T:
                return False
            if v in self.inst.seeds(c) and r != 0:
                return False
            if not all(0 <= x <= self.fmax for x in (s[2 + c], s[4 + c], s[6 + c])):
                return False
            if r in (0, INF) and s[2 + c]:
                return False
            if r in (0, 1) and s[4 + c]:
                return False
            if s[6 + c] and (self.literal or e_round(s, c) is None):
                return False
        return True

    def cost(self, v, s) -> int:
        return (s[RA] == 0 and v not in self.inst.seed_a) + (s[RB] == 0 and v not in self.inst.seed_b)

    def q_row(self, v, ra, rb):
        return q_row(self.inst.f1[v], self.inst.f2[v], ra, rb, self.literal)

    def forget_rows(self, v):
        rows = self._forget_rows.get(v)
        if rows is None:
            rows = [self.q_row(v, a, b) for a, b in self.round_pairs(v)]
            if self.clamp:
                deg = self.inst.graph.degree(v)
                rows = [clamp_row(q, deg) for q in rows]
            rows = [(self.cost(v, q), q) for q in rows if q is not None]
            self._forget_rows[v] = rows
        return rows

    def edge_adjust(self, su, sv):
        """Charge edge uv to both endpoint states; None if a bound drops below 0."""
        a = self._charge(su, sv)
        if a is None:
            return None
        b = self._charge(sv, su)
        if b is None:
            return None
        return a, b

    def _charge(self, w, o):
        """State w after counting neighbour state o; None on a violated upper bound."""
        w = list(w)
        for c in (0, 1):
            rw, ro = w[c], o[c]
            if ro < rw:
                if rw == INF:
                    w[4 + c] -= 1
                    if w[4 + c] < 0:
                        return None
                else:
                    if w[2 + c]:
                        w[2 + c] -= 1
                    if ro <= rw - 2:
                        w[4 + c] -= 1
                        if w[4 + c] < 0:
                            return None
            if not self.literal:
                first = w[1 - c]
                if 1 <= first < INF and first + 2 <= rw < INF and ro <= first - 1:
                    w[6 + c] -= 1
                    if w[6 + c] < 0:
                        return None
        return tuple(w)

    # ------------------------------------------------------------ transfer

    def value(self, x, p):
        memo = self.memo[x]
        hit = memo.get(p)
        if hit is not None:
            return hit[0]
        val, choice = self._transfer(x, p)
        if self.budget is not None and val > self.budget:
            val = INF
        memo[p] = (val, choice)
        return val

    def _transfer(self, x, p):
        node = self.nice.nodes[x]
        kind = node.kind
        if kind == LEAF:
            return (0, None) if p == () else (INF, None)
        if kind == INTRODUCE:
            i = node.bag.index(node.vertex)
            s = p[i]
            if s[GA] >= 1 or s[GB] >= 1:
                return INF, None
            child = p[:i] + p[i + 1:]
            return self.value(node.children[0], child) + self.cost(node.vertex, s), child
        if kind == INTRODUCE_EDGE:
            u, v = node.edge
            iu, iv = node.bag.index(u), node.bag.index(v)
            adj = self.edge_adjust(p[iu], p[iv])
            if adj is None:
                return INF, None
            child = list(p)
            child[iu], child[iv] = adj
            child = tuple(child)
            return self.value(node.children[0], child), child
        if kind == FORGET:
            y = node.children[0]
            i = self.nice.nodes[y].bag.index(node.vertex)
            best, arg = INF, None
            room = INF
            if self.budget is not None:
                room = self.budget - sum(self.cost(v, s) for v, s in zip(node.bag, p))
            for qc, q in self.forget_rows(node.vertex):
                if qc > room:
                    continue
                child = p[:i] + (q,) + p[i:]
                val = self.value(y, child)
                if val < best:
                    best, arg = val, child
            return best, arg
        if kind == JOIN:
            return self._join(node, p)
        raise ValueError(f"malformed node kind {kind!r}")

    def _join(self, node, p):
        y, z = node.children
        bag_cost = sum(self.cost(v, s) for v, s in zip(node.bag, p))
        coords = [(i, k) for i, s in enumerate(p) for k in range(2, 8) if s[k] > 0]
        best, arg = INF, None
        for split in product(*(range(p[i][k] + 1) for i, k in coords)):
            py = [list(s) for s in p]
            pz = [list(s) for s in p]
            for (i, k), a in zip(coords, split):
                py[i][k] = a
                pz[i][k] = p[i][k] - a
            py = tuple(tuple(s) for s in py)
            vy = self.value(y, py)
            if vy >= best:
                continue
            pz = tuple(tuple(s) for s in pz)
            vz = self.value(z, pz)
            val = vy + vz - bag_cost
            if val < best:
                best, arg = val, (py, pz)
        return best, arg

    # ------------------------------------------------------------ results

    def solve(self):
        root = self.nice.root
        return self.value(root, ())

    def witness(self) -> Solution | None:
        root = self.nice.root
        if self.value(root, ()) == INF:
            return None
        ta, tb = set(), set()
        stack = [(root, ())]
        while stack:
            x, p = stack.pop()
            node = self.nice.nodes[x]
            _, choice = self.memo[x][p]
            if node.kind == LEAF:
                continue
            if node.kind == INTRODUCE:
                s = p[node.bag.index(node.vertex)]
                v = node.vertex
                if s[RA] == 0 and v not in self.inst.seed_a:
                    ta.add(v)
                if s[RB] == 0 and v not in self.inst.seed_b:
                    tb.add(v)
                stack.append((node.children[0], choice))
            elif node.kind == JOIN:
                stack.append((node.children[0], choice[0]))
                stack.append((node.children[1], choice[1]))
            else:
                stack.append((node.children[0], choice))
        return Solution.of(ta, tb)

    def all_patterns(self, x):
        bag = self.nice.nodes[x].bag
        return product(*(self.vertex_states(v) for v in bag))

    def full_table(self, x) -> dict:
        return {p: self.value(x, p) for p in self.all_patterns(x)}


class ForwardDP:
    """Bottom-up evaluation of the same recurrence.

    Entries are created only for residual patterns that some purchase realizes: a
    vertex enters with its full requirement row, edges lower the residual bounds,
    a forget keeps the entries whose lower bounds are met and a join adds up what
    both sides counted. Entries whose lower bounds exceed the edges still to come,
    or whose cost exceeds the budget, are dropped.
    """

    def __init__(self, inst: Instance, nice: NiceTreeDecomposition, budget=None,
                 literal=False, bounds=None, clamp=True):
        self.inst = inst
        self.nice = nice
        self.budget = INF if budget is None else budget
        self.rows = TreewidthDP(inst, nice, budget, literal, bounds, clamp)
        self.tables = [None] * len(nice.nodes)
        self._full = {}
        for v in inst.graph.vertices():
            for _, q in self.rows.forget_rows(v):
                self._full[v, q[RA], q[RB]] = q

    def _left(self):
        """For each node and bag vertex the number of its edges not yet introduced."""
        g = self.inst.graph
        below = self.nice.edges_below()
        out = []
        for x, node in enumerate(self.nice.nodes):
            seen = {}
            for u, v in below[x]:
                seen[u] = seen.get(u, 0) + 1
                seen[v] = seen.get(v, 0) + 1
            out.append(tuple(g.degree(v) - seen.get(v, 0) for v in node.bag))
        return out

    def solve(self):
        left = self._left()
        cost_of = self.rows.cost
        B = self.budget
        for x in self.nice.postorder():
            node = self.nice.nodes[x]
            lx = left[x]
            new = {}
            if node.kind == LEAF:
                new[()] = (0, None)
            elif node.kind == INTRODUCE:
                i = node.bag.index(node.vertex)
                v = node.vertex
                cap = lx[i]
                rows = [(c, q) for c, q in self.rows.forget_rows(v) if q[GA] <= cap and q[GB] <= cap]
                for p, (cost, _) in self.tables[node.children[0]].items():
                    for c, q in rows:
                        if cost + c > B:
                            continue
                        new[p[:i] + (q,) + p[i:]] = (cost + c, p)
            elif node.kind == INTRODUCE_EDGE:
                u, v = node.edge
                iu, iv = node.bag.index(u), node.bag.index(v)
                lu, lv = lx[iu], lx[iv]
                for p, (cost, _) in self.tables[node.children[0]].items():
                    adj = self.rows.edge_adjust(p[iu], p[iv])
                    if adj is None:
                        continue
                    a, b = adj
                    if a[GA] > lu or a[GB] > lu or b[GA] > lv or b[GB] > lv:
                        continue
                    q = list(p)
                    q[iu], q[iv] = a, b
                    q = tuple(q)
                    old = new.get(q)
                    if old is None or cost < old[0]:
                        new[q] = (cost, p)
            elif node.kind == FORGET:
                y = node.children[0]
                i = self.nice.nodes[y].bag.index(node.vertex)
                for p, (cost, _) in self.tables[y].items():
                    s = p[i]
                    if s[GA] or s[GB]:
                        continue
                    q = p[:i] + p[i + 1:]
                    old = new.get(q)
                    if old is None or cost < old[0]:
                        new[q] = (cost, p)
            elif node.kind == JOIN:
                new = self._join(node, lx)
            else:
                raise ValueError(f"malformed node kind {node.kind!r}")
            self.tables[x] = new
        root = self.tables[self.nice.root].get(())
        return INF if root is None else root[0]

    def _join(self, node, lx):
        y, z = node.children
        bag = node.bag
        groups = {}
        for p, (cost, _) in self.tables[z].items():
            groups.setdefault(tuple((s[RA], s[RB]) for s in p), []).append((p, cost))
        full = self._full
        B = self.budget
        new = {}
        for py, (cy, _) in self.tables[y].items():
            key = tuple((s[RA], s[RB]) for s in py)
            partners = groups.get(key)
            if not partners:
                continue
            fulls = [full[v, r[0], r[1]] for v, r in zip(bag, key)]
            bag_cost = sum(self.rows.cost(v, f) for v, f in zip(bag, fulls))
            for pz, cz in partners:
                cost = cy + cz - bag_cost
                if cost > B:
                    continue
                out = []
                for sy, sz, f, lim in zip(py, pz, fulls, lx):
                    ga = sy[GA] + sz[GA] - f[GA]
                    gb = sy[GB] + sz[GB] - f[GB]
                    ga = ga if ga > 0 else 0
                    gb = gb if gb > 0 else 0
                    if ga > lim or gb > lim:
                        break
                    rest = [sy[k] + sz[k] - f[k] for k in (HA, HB, EA, EB)]
                    if min(rest) < 0:
                        break
                    out.append((sy[RA], sy[RB], ga, gb, *rest))
                else:
                    q = tuple(out)
                    old = new.get(q)
                    if old is None or cost < old[0]:
                        new[q] = (cost, (py, pz))
        return new

    def witness(self) -> Solution | None:
        root = self.nice.root
        if self.tables[root].get(()) is None:
            return None
        ta, tb = set(), set()
        stack = [(root, ())]
        while stack:
            x, p = stack.pop()
            node = self.nice.nodes[x]
            _, back = self.tables[x][p]
            if node.kind == LEAF:
                continue
            if node.kind == INTRODUCE:
                s = p[node.bag.index(node.vertex)]
                v = node.vertex
                if s[RA] == 0 and v not in self.inst.seed_a:
                    ta.add(v)
                if s[RB] == 0 and v not in self.inst.seed_b:
                    tb.add(v)
            if node.kind == JOIN:
                stack.append((node.children[0], back[0]))
                stack.append((node.children[1], back[1]))
            else:
                stack.append((node.children[0], back))
        return Solution.of(ta, tb)


def solve_twdp(inst: Instance, nice: NiceTreeDecomposition | None = None, budget=None,
               literal=False, witness=False, bounds=None, clamp=True, engine="forward"):
    """Minimum purchase cost (INF if none, or none within `budget` when given).

    `bounds` are latest activation rounds per (v, c) used to drop impossible
    rounds; `clamp` caps neighbourhood bounds at the degree. Both leave the optimum
    unchanged but shrink the tables. engine is "forward" (bottom-up over realized
    patterns) or "lazy" (memoized top-down over requested patterns)."""
    if nice is None:
        nice = nice_decomposition(inst.graph, eager_edges=True)
    else:
        nice.validate(inst.graph)
    if engine == "forward":
        dp = ForwardDP(inst, nice, budget, literal, bounds, clamp)
        cost = dp.solve()
        return cost, (dp.witness() if witness else None)
    if engine != "lazy":
        raise ValueError(f"unknown engine {engine!r}")
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20 * len(nice.nodes) + 1000))
    try:
        dp = TreewidthDP(inst, nice, budget, literal, bounds, clamp)
        cost = dp.solve()
        sol = dp.witness() if witness else None
    finally:
        sys.setrecursionlimit(limit)
    return cost, sol


# ---------------------------------------------------------------- definition-level oracle

def modified_process(inst: Instance, vx, ex, bag, r, ta, tb, rounds):
    """Process on G_x = (vx, ex) where bag vertices enter P_c exactly at r[v][c].

    Returns the list of (P_a^i, P_b^i) bitmasks for i = 0..rounds.
    """
    nbr = {v: 0 for v in vx}
    for u, v in ex:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    inner = [v for v in sorted(vx) if v not in bag]
    for c, tc, sc in ((0, ta, inst.seed_a), (1, tb, inst.seed_b)):
        for v in bag:
            if (r[v][c] == 0) != (v in tc or v in sc):
                raise ValueError("bag vertices with round 0 must be exactly the seeded ones")
    pa = pb = 0
    for v in vx:
        if v in inst.seed_a or v in ta:
            pa |= 1 << v
        if v in inst.seed_b or v in tb:
            pb |= 1 << v
    out = [(pa, pb)]
    for i in range(1, rounds + 1):
        na, nb = pa, pb
        for v in inner:
            bit = 1 << v
            ina, inb = pa & bit, pb & bit
            if ina and inb:
                continue
            ca = (nbr[v] & pa).bit_count()
            cb = (nbr[v] & pb).bit_count()
            if not ina and not inb:
                if ca >= inst.f1[v]:
                    na |= bit
                if cb >= inst.f1[v]:
                    nb |= bit
            elif ina:
                if cb >= inst.f2[v]:
                    nb |= bit
            elif ca >= inst.f2[v]:
                na |= bit
        for v in bag:
            if r[v][0] == i:
                na |= 1 << v
            if r[v][1] == i:
                nb |= 1 << v
        pa, pb = na, nb
        out.append((pa, pb))
    return out, nbr


def _count(trace, nbr, v, c, i):
    if i < 0:
        return 0
    return (nbr[v] & trace[min(i, len(trace) - 1)][c]).bit_count()


def pattern_holds(trace, nbr, T, bag, p, literal=False) -> bool:
    """Viability of a modified-process trace for pattern p (given as {v: state})."""
    pa, pb = trace[T]
    if not (pa == pb == trace[T + 1][0] == trace[T + 1][1]):
        return False
    for v in bag:
        s = p[v]
        for c in (0, 1):
            r = s[c]
            if r == INF:
                if _count(trace, nbr, v, c, T) > s[4 + c]:
                    return False
            elif r >= 1:
                if s[2 + c] > _count(trace, nbr, v, c, r - 1):
                    return False
                if _count(trace, nbr, v, c, r - 2) > s[4 + c]:
                    return False
            if not literal:
                q = e_round(s, c)
                if q is not None and _count(trace, nbr, v, c, q) > s[6 + c]:
                    return False
    return True


def complies(inst: Instance, nice: NiceTreeDecomposition, x, p, ta, tb, literal=False) -> bool:
    """Whether (ta, tb) inside V_x complies with pattern p (tuple in bag order) at node x."""
    bag = nice.nodes[x].bag
    vx = nice.vertices_below()[x]
    ex = nice.edges_below()[x]
    if not (set(ta) <= vx and set(tb) <= vx):
        return False
    r = {v: (s[RA], s[RB]) for v, s in zip(bag, p)}
    for c, tc, sc in ((0, ta, inst.seed_a), (1, tb, inst.seed_b)):
        for v in bag:
            if (r[v][c] == 0) != (v in tc or v in sc):
                return False
    trace, nbr = modified_process(inst, vx, ex, bag, r, ta, tb, inst.deadline + 1)
    return pattern_holds(trace, nbr, inst.deadline, bag, dict(zip(bag, p)), literal)


def oracle_table(inst: Instance, nice: NiceTreeDecomposition, x, patterns, literal=False) -> dict:
    """Definition-level minimum for each pattern at node x by exhaustive purchases in V_x.

    Purchases are grouped by the round assignment they force on the bag, so each
    modified process is run once per (round assignment, purchase).
    """
    bag = nice.nodes[x].bag
    vx = nice.vertices_below()[x]
    ex = nice.edges_below()[x]
    T = inst.deadline
    inner = [v for v in sorted(vx) if v not in bag]
    by_rounds = {}
    for p in patterns:
        by_rounds.setdefault(tuple((s[RA], s[RB]) for s in p), []).append(p)
    out = {}
    opts = []
    for v in inner:
        o = []
        for a in ((False,) if v in inst.seed_a else (False, True)):
            for b in ((False,) if v in inst.seed_b else (False, True)):
                o.append((a, b))
        opts.append(o)
    for rs, pats in by_rounds.items():
        r = dict(zip(bag, rs))
        base_a = {v for v in bag if r[v][0] == 0 and v not in inst.seed_a}
        base_b = {v for v in bag if r[v][1] == 0 and v not in inst.seed_b}
        base = len(base_a) + len(base_b)
        best = {p: INF for p in pats}
        for choice in product(*opts):
            ta, tb = set(base_a), set(base_b)
            for v, (a, b) in zip(inner, choice):
                if a:
                    ta.add(v)
                if b:
                    tb.add(v)
            cost = base + sum(a + b for a, b in choice)
            trace, nbr = modified_process(inst, vx, ex, bag, r, ta, tb, T + 1)
            for p in pats:
                if cost < best[p] and pattern_holds(trace, nbr, T, bag, dict(zip(bag, p)), literal):
                    best[p] = cost
        out.update(best)
    return out
