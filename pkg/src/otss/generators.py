"""Instance generators: selection gadgets, the two PSI constructions, TSS
embeddings and random instances."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from otss.instance import Graph, Instance
from otss.process import Engine, to_mask

A, B = "a", "b"


class Builder:
    """Incremental instance construction with 1-based vertex ids."""

    def __init__(self):
        self.f1 = []
        self.f2 = []
        self.edges = []
        self.seed_a = set()
        self.seed_b = set()
        self.names = []

    @property
    def n(self):
        return len(self.f1)

    def vertex(self, f1=1, f2=1, name=None, seed=None):
        self.f1.append(f1)
        self.f2.append(f2)
        self.names.append(name)
        v = self.n
        if seed == A:
            self.seed_a.add(v)
        elif seed == B:
            self.seed_b.add(v)
        return v

    def edge(self, u, v):
        self.edges.append((min(u, v), max(u, v)))

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def path(self, start, end, inner, f1=1, f2=1):
        """Join start and end by a path through `inner` new vertices; returns them."""
        mids = [self.vertex(f1, f2) for _ in range(inner)]
        chain = [start] + mids + [end]
        for u, v in zip(chain, chain[1:]):
            self.edge(u, v)
        return mids

    def build(self, budget, deadline=None) -> Instance:
        return Instance.build(self.n, self.edges, self.f1, self.f2,
                              self.seed_a, self.seed_b, budget, deadline)


@dataclass
class SelectionGadget:
    """Selection vertices plus two guard paths (seed leaf, central, far leaf)."""
    selection: list
    guards: list  # [(seed leaf, central, far leaf)] * 2
    preselected: str

    @property
    def vertices(self):
        return list(self.selection) + [v for g in self.guards for v in g]


def add_selection_gadget(bld: Builder, n_w: int, preselected: str = A) -> SelectionGadget:
    """Selection vertices get threshold 1 for now; callers fix them once wired."""
    if n_w < 1:
        raise ValueError("a selection gadget needs at least one selection vertex")
    if preselected not in (A, B):
        raise ValueError("preselected opinion must be 'a' or 'b'")
    sel = [bld.vertex(1, 1, name="sel") for _ in range(n_w)]
    guards = []
    for _ in range(2):
        leaf = bld.vertex(1, 1, name="seed-leaf", seed=preselected)
        mid = bld.vertex(1, 1, name="central")
        far = bld.vertex(1, 2, name="far-leaf")
        bld.edge(leaf, mid)
        bld.edge(mid, far)
        for s in sel:
            bld.edge(mid, s)
        guards.append((leaf, mid, far))
    return SelectionGadget(sel, guards, preselected)


def gen_selection_gadget(n_w: int, preselected: str = A, selection_threshold=None):
    """Isolated selection gadget with budget 1. Selection vertices get
    f1 = f2 = selection_threshold, by default their degree. Returns (Instance, gadget)."""
    bld = Builder()
    gad = add_selection_gadget(bld, n_w, preselected)
    for s in gad.selection:
        t = bld.degree(s) if selection_threshold is None else selection_threshold
        bld.f1[s - 1] = bld.f2[s - 1] = t
    return bld.build(1), gad


# ---------------------------------------------------------------- PSI

@dataclass(frozen=True)
class PsiInstance:
    """Host graph G, pattern graph H and a colouring psi: V(G) -> V(H)."""
    G: Graph
    H: Graph
    psi: tuple  # psi[v] for v in 1..n(G); index 0 unused

    def __post_init__(self):
        if len(self.psi) != self.G.n + 1:
            raise ValueError("psi must colour every host vertex")
        if any(not 1 <= w <= self.H.n for w in self.psi[1:]):
            raise ValueError("psi maps outside V(H)")
        if self.H.n > self.G.n:
            raise ValueError("pattern larger than host")

    @classmethod
    def build(cls, g_n, g_edges, h_n, h_edges, colours):
        return cls(Graph.from_edges(g_n, g_edges), Graph.from_edges(h_n, h_edges),
                   (0,) + tuple(colours))

    def cls(self, w):
        """V_w in ascending id order."""
        return [v for v in self.G.vertices() if self.psi[v] == w]

    def cross(self, w, w2):
        """E_{ww'} as (u in V_w, v in V_w') pairs in ascending order."""
        out = []
        for u, v in self.G.sorted_edges():
            if self.psi[u] == w and self.psi[v] == w2:
                out.append((u, v))
            elif self.psi[v] == w and self.psi[u] == w2:
                out.append((v, u))
        return sorted(out)

    def check(self):
        for w in self.H.vertices():
            if not self.cls(w):
                raise ValueError(f"colour class of pattern vertex {w} is empty")
        for w, w2 in self.H.sorted_edges():
            if not self.cross(w, w2):
                raise ValueError(f"no host edge between colour classes {w} and {w2}")


def psi_brute_force(p: PsiInstance, limit: int = 1_000_000) -> bool:
    """Whether one vertex per colour class can be picked so every pattern edge is a host edge."""
    classes = [p.cls(w) for w in p.H.vertices()]
    total = 1
    for c in classes:
        total *= max(1, len(c))
    if total > limit:
        raise ResourceWarning("too many colour-respecting maps")
    for pick in product(*classes):
        if all((min(pick[u - 1], pick[v - 1]), max(pick[u - 1], pick[v - 1])) in p.G.edges
               for u, v in p.H.sorted_edges()):
            return True
    return False


@dataclass
class PsiReduction:
    """Emitted instance plus the layout needed for good-pair search."""
    instance: Instance
    label: bool
    vertex_gadgets: dict  # w -> (SelectionGadget, [host vertex per selection vertex])
    edge_gadgets: dict  # (w, w') -> (SelectionGadget, [host edge per selection vertex])
    select_opinion: dict = field(default_factory=dict)  # gadget key -> opinion bought
    checks: list = field(default_factory=list)  # construction-specific probe vertices

    def good_pairs(self):
        """All purchases buying exactly one selection vertex per gadget, in the
        gadget's selecting opinion. Yields (T_a, T_b)."""
        slots = []
        for w, (gad, _) in sorted(self.vertex_gadgets.items()):
            slots.append([(self.select_opinion[w], s) for s in gad.selection])
        for key, (gad, _) in sorted(self.edge_gadgets.items()):
            slots.append([(self.select_opinion[key], s) for s in gad.selection])
        for pick in product(*slots):
            ta = {v for c, v in pick if c == A}
            tb = {v for c, v in pick if c == B}
            yield ta, tb

    def selected(self, ta, tb):
        """Host vertices and edges a good pair selects."""
        out = {}
        for w, (gad, hosts) in self.vertex_gadgets.items():
            for s, h in zip(gad.selection, hosts):
                if s in ta or s in tb:
                    out[w] = h
        for key, (gad, hosts) in self.edge_gadgets.items():
            for s, h in zip(gad.selection, hosts):
                if s in ta or s in tb:
                    out[key] = h
        return out

    def structured_solve(self):
        """First good pair that is a target set, or None."""
        eng = Engine(self.instance)
        for ta, tb in self.good_pairs():
            if eng.succeeds(to_mask(ta), to_mask(tb)):
                return ta, tb
        return None


def _h_edges_oriented(h: Graph):
    return [(w, w2) for w, w2 in h.sorted_edges()]


def gen_psi_treewidth(p: PsiInstance) -> PsiReduction:
    """Bounded-threshold construction: vertex selection gadgets (preselected a),
    edge selection gadgets (preselected b) and one incidence gadget per pattern
    edge and endpoint, whose sentry ends with both opinions iff the selected host
    vertex lies on the selected host edge."""
    p.check()
    n = p.G.n
    bld = Builder()
    vg, eg, sel_op = {}, {}, {}
    for w in p.H.vertices():
        vg[w] = (add_selection_gadget(bld, len(p.cls(w)), A), p.cls(w))
        sel_op[w] = B
    for w, w2 in _h_edges_oriented(p.H):
        eg[w, w2] = (add_selection_gadget(bld, len(p.cross(w, w2)), B), p.cross(w, w2))
        sel_op[w, w2] = A
    checks = []
    for w, w2 in _h_edges_oriented(p.H):
        gad_e, host_e = eg[w, w2]
        for side, other in ((w, w2), (w2, w)):
            gad_v, host_v = vg[side]
            eta = {v: i + 1 for i, v in enumerate(host_v)}
            vc = bld.vertex(1, 1, name="vertex-connector")
            ec = bld.vertex(1, 1, name="edge-connector")
            sc = bld.vertex(1, 3, name="super-connector")
            sentry = bld.vertex(1, 3, name="sentry")
            for x in (vc, ec, sentry):
                bld.edge(sc, x)
            for s, v in zip(gad_v.selection, host_v):
                bld.path(s, vc, n + eta[v])
            for s, e in zip(gad_e.selection, host_e):
                end = e[0] if side == w else e[1]
                bld.path(s, ec, n + eta[end])
            checks.append(((side, other), sentry))
    for gad, _ in list(vg.values()) + list(eg.values()):
        for s in gad.selection:
            t = min(bld.degree(s), 3)
            bld.f1[s - 1] = bld.f2[s - 1] = t
    inst = bld.build(p.H.n + p.H.m, 2 * bld.n)
    return PsiReduction(inst, psi_brute_force(p), vg, eg, sel_op, checks)


def gen_psi_rounds(p: PsiInstance) -> PsiReduction:
    """Constant-round construction with deadline 4. Every gadget is preselected a
    and selects with b; checking vertices compare low/high counts."""
    p.check()
    bld = Builder()
    vg, eg, sel_op = {}, {}, {}
    for w in p.H.vertices():
        vg[w] = (add_selection_gadget(bld, len(p.cls(w)), A), p.cls(w))
        sel_op[w] = B
    for w, w2 in _h_edges_oriented(p.H):
        eg[w, w2] = (add_selection_gadget(bld, len(p.cross(w, w2)), A), p.cross(w, w2))
        sel_op[w, w2] = B
    checks = []
    for w, w2 in _h_edges_oriented(p.H):
        gad_e, host_e = eg[w, w2]
        for side, other in ((w, w2), (w2, w)):
            gad_v, host_v = vg[side]
            size = len(host_v)
            low = {v: i + 1 for i, v in enumerate(host_v)}
            c1 = bld.vertex(size, 1, name="check-1")
            c2 = bld.vertex(size, 1, name="check-2")
            for s, v in zip(gad_v.selection, host_v):
                for j in range(size):
                    x = bld.vertex(1, 1)
                    bld.edge(s, x)
                    bld.edge(x, c1 if j < low[v] else c2)
            for s, e in zip(gad_e.selection, host_e):
                end = e[0] if side == w else e[1]
                for j in range(size):
                    x = bld.vertex(1, 1)
                    bld.edge(s, x)
                    bld.edge(x, c2 if j < low[end] else c1)
            special = bld.vertex(1, 1, name="special", seed=A)
            for _ in range(size):
                x = bld.vertex(1, 2)
                bld.edge(x, special)
                bld.edge(x, c1)
                bld.edge(x, c2)
            bld.f2[special - 1] = bld.degree(special)
            bld.f1[special - 1] = bld.degree(special)
            for c in (c1, c2):
                bld.f2[c - 1] = bld.degree(c)
            checks.append(((side, other), (c1, c2, special)))
    for gad, _ in list(vg.values()) + list(eg.values()):
        for s in gad.selection:
            bld.f1[s - 1] = bld.f2[s - 1] = bld.degree(s)
    inst = bld.build(p.H.n + p.H.m, 4)
    return PsiReduction(inst, psi_brute_force(p), vg, eg, sel_op, checks)


# ---------------------------------------------------------------- TSS

def gen_tss_embedding(g: Graph, f, k: int) -> Instance:
    """Single-opinion target set selection as a two-opinion instance: everyone
    holds b from the start and a spreads with threshold f."""
    f = _tss_thresholds(g, f)
    return Instance.build(g.n, g.sorted_edges(), f, f, [], g.vertices(), k, 2 * g.n)


def gen_f1_ge_f2(g: Graph, f, k: int, deadline: int = 6) -> Instance:
    """Pendant construction with f1 >= f2 everywhere: n pendants in S_a per vertex,
    f1 = n on every vertex, f2 = f on the original ones and 1 on pendants.
    Vertices 1..n are the original ones."""
    n = g.n
    f = _tss_thresholds(g, f)
    if any(x > n for x in f):
        raise ValueError("thresholds must not exceed the number of vertices")
    if not k < n:
        raise ValueError("budget must be smaller than the number of vertices")
    bld = Builder()
    for v in g.vertices():
        bld.vertex(n, f[v - 1])
    for u, v in g.sorted_edges():
        bld.edge(u, v)
    for v in g.vertices():
        for _ in range(n):
            x = bld.vertex(n, 1, seed=A)
            bld.edge(v, x)
    return bld.build(k, deadline)


def _tss_thresholds(g: Graph, f):
    if isinstance(f, int):
        return [f] * g.n
    if isinstance(f, dict):
        return [f[v] for v in g.vertices()]
    f = list(f)
    if len(f) != g.n:
        raise ValueError("one threshold per vertex expected")
    return f


def random_tss(n: int, edge_prob: float, f_max: int, k: int, rng_seed: int):
    """Random TSS instance (graph, thresholds, budget)."""
    rng = random.Random(rng_seed)
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < edge_prob]
    g = Graph.from_edges(n, edges)
    f = [rng.randint(0, min(f_max, max(g.degree(v), 0))) for v in g.vertices()]
    return g, f, k


# ---------------------------------------------------------------- random

def gen_random(n: int, edge_prob: float, f_max: int, seed_prob: float, budget: int,
               rng_seed: int, deadline=None) -> Instance:
    """Reproducible random instance; thresholds are drawn from 1..f_max."""
    if n < 0 or f_max < 1 or budget < 0:
        raise ValueError("parameters out of range")
    rng = random.Random(rng_seed)
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < edge_prob]
    f1 = [rng.randint(1, f_max) for _ in range(n)]
    f2 = [rng.randint(1, f_max) for _ in range(n)]
    sa = [v for v in range(1, n + 1) if rng.random() < seed_prob]
    sb = [v for v in range(1, n + 1) if rng.random() < seed_prob]
    return Instance.build(n, edges, f1, f2, sa, sb, budget, deadline)
