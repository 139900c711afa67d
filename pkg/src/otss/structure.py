"""Structural parameters: vertex covers, k-path vertex covers, treedepth, tree
decompositions (PACE .td I/O, heuristic construction, nicification) and the
deadline caps they license."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from otss.instance import Graph, Instance


# ---------------------------------------------------------------- covers

def exact_vertex_cover(g: Graph, k_max: int):
    return exact_k_path_vertex_cover(g, 2, k_max)


def _find_path(g: Graph, removed: frozenset, k: int):
    """Some path on k vertices avoiding `removed`, or None."""
    alive = [v for v in g.vertices() if v not in removed]

    def nb(v):
        return [u for u in g.adj[v] if u not in removed]

    if k == 2:
        for v in alive:
            for u in nb(v):
                return (v, u)
        return None
    if k == 3:
        for v in alive:
            ns = nb(v)
            if len(ns) >= 2:
                return (ns[0], v, ns[1])
        return None
    if k == 4:
        for b in alive:
            for c in nb(b):
                for a in nb(b):
                    if a == c:
                        continue
                    for d in nb(c):
                        if d != b and d != a:
                            return (a, b, c, d)
        return None
    raise ValueError("k must be 2, 3 or 4")


def exact_k_path_vertex_cover(g: Graph, k: int, size_max: int):
    """Minimum vertex set hitting every path on k vertices, or None if larger than size_max."""
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")

    def branch(removed, left):
        p = _find_path(g, removed, k)
        if p is None:
            return removed
        if left == 0:
            return None
        for v in p:
            r = branch(removed | {v}, left - 1)
            if r is not None:
                return r
        return None

    for s in range(size_max + 1):
        r = branch(frozenset(), s)
        if r is not None:
            return r
    return None


def is_k_path_vertex_cover(g: Graph, k: int, s) -> bool:
    return _find_path(g, frozenset(s), k) is None


# ---------------------------------------------------------------- treedepth

def _mask_components(nbr, mask):
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            v = frontier.bit_length() - 1
            frontier &= ~(1 << v)
            new = nbr[v] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def treedepth_exact(g: Graph, d_max: int | None = None, n_limit: int = 16):
    """Exact treedepth via the recursive definition; None if it exceeds d_max."""
    if g.n > n_limit:
        raise ValueError(f"exact treedepth refused for n={g.n} > {n_limit}")
    nbr = g.masks()

    @lru_cache(maxsize=None)
    def td(mask):
        if mask == 0:
            return 0
        comps = _mask_components(nbr, mask)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if mask & (mask - 1) == 0:
            return 1
        best = None
        m = mask
        while m:
            low = m & -m
            m ^= low
            sub = td(mask ^ low)
            if best is None or sub < best:
                best = sub
        return best + 1

    full = sum(1 << v for v in g.vertices())
    d = td(full)
    td.cache_clear()
    if d_max is not None and d > d_max:
        return None
    return d


def treedepth_upper_bound(g: Graph) -> int:
    """Depth of a DFS forest, which is an elimination forest. Not exact."""
    depth = 0
    seen = [False] * (g.n + 1)
    for s in g.vertices():
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, 1, iter(g.adj[s]))]
        depth = max(depth, 1)
        while stack:
            v, d, it = stack[-1]
            for u in it:
                if not seen[u]:
                    seen[u] = True
                    stack.append((u, d + 1, iter(g.adj[u])))
                    depth = max(depth, d + 1)
                    break
            else:
                stack.pop()
    return depth


def treedepth(g: Graph, exact_limit: int = 12):
    """(value, exact?) with exact computation up to exact_limit vertices."""
    if g.n <= exact_limit:
        return treedepth_exact(g), True
    return treedepth_upper_bound(g), False


# ---------------------------------------------------------------- caps

def cap_rounds_by_treedepth(inst: Instance, td_value: int) -> Instance:
    bound = 2 * inst.n
    if td_value < 40 and 3 ** td_value - 2 < bound:
        bound = max(0, 3 ** td_value - 2)
    return inst.with_(deadline=min(inst.deadline, bound))


def cap_rounds_by_pvc3(inst: Instance, k: int) -> Instance:
    return inst.with_(deadline=min(inst.deadline, 10 * k + 3))


def cap_rounds_by_size(inst: Instance) -> Instance:
    return inst.with_(deadline=min(inst.deadline, 2 * inst.n))


# ---------------------------------------------------------------- tree decompositions

class InvalidDecomposition(ValueError):
    pass


@dataclass
class TreeDecomposition:
    bags: dict  # node id -> frozenset of vertices
    edges: list  # tree edges (id, id)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adjacency(self):
        adj = {x: [] for x in self.bags}
        for x, y in self.edges:
            adj[x].append(y)
            adj[y].append(x)
        return adj

    def validate(self, g: Graph):
        if not self.bags:
            if g.n:
                raise InvalidDecomposition("empty decomposition for a nonempty graph")
            return
        adj = {x: [] for x in self.bags}
        for x, y in self.edges:
            if x not in adj or y not in adj:
                raise InvalidDecomposition(f"tree edge {x} {y} names an unknown bag")
            adj[x].append(y)
            adj[y].append(x)
        if len(self.edges) != len(self.bags) - 1:
            raise InvalidDecomposition("bag graph is not a tree (wrong edge count)")
        start = next(iter(self.bags))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(self.bags):
            raise InvalidDecomposition("bag graph is not connected")
        for x, b in self.bags.items():
            for v in b:
                if not 1 <= v <= g.n:
                    raise InvalidDecomposition(f"bag {x} names unknown vertex {v}")
        covered = set().union(*self.bags.values())
        for v in g.vertices():
            if v not in covered:
                raise InvalidDecomposition(f"vertex {v} is in no bag")
        for u, v in g.sorted_edges():
            if not any(u in b and v in b for b in self.bags.values()):
                raise InvalidDecomposition(f"edge {u} {v} is not covered by any bag")
        for v in g.vertices():
            holders = {x for x, b in self.bags.items() if v in b}
            s = next(iter(holders))
            reach = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in holders and y not in reach:
                        reach.add(y)
                        stack.append(y)
            if reach != holders:
                raise InvalidDecomposition(f"bags containing vertex {v} are not connected")


def read_td(text: str) -> TreeDecomposition:
    bags, edges = {}, []
    header = None
    for i, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s":
                if tok[1] != "td" or len(tok) != 5:
                    raise InvalidDecomposition(f"line {i}: header must be 's td <bags> <width+1> <n>'")
                header = [int(t) for t in tok[2:]]
            elif tok[0] == "b":
                if header is None:
                    raise InvalidDecomposition(f"line {i}: bag before header")
                x = int(tok[1])
                if x in bags:
                    raise InvalidDecomposition(f"line {i}: duplicate bag {x}")
                bags[x] = frozenset(int(t) for t in tok[2:])
            else:
                if header is None or len(tok) != 2:
                    raise InvalidDecomposition(f"line {i}: malformed line")
                edges.append((int(tok[0]), int(tok[1])))
        except ValueError as e:
            if isinstance(e, InvalidDecomposition):
                raise
            raise InvalidDecomposition(f"line {i}: expected integers") from None
    if header is None:
        raise InvalidDecomposition("missing 's td' header")
    if header[0] != len(bags):
        raise InvalidDecomposition("bag count does not match header")
    td = TreeDecomposition(bags, edges)
    if bags and td.width + 1 > header[1]:
        raise InvalidDecomposition("a bag is larger than the declared width+1")
    return td


def write_td(td: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for x in sorted(td.bags):
        out.append(" ".join(["b", str(x)] + [str(v) for v in sorted(td.bags[x])]))
    out += [f"{x} {y}" for x, y in td.edges]
    return "\n".join(out) + "\n"


def _td_from_order(g: Graph, order) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(order)}
    nb = {v: set(g.adj[v]) for v in g.vertices()}
    bags, parent = {}, {}
    for v in order:
        later = {u for u in nb[v] if pos[u] > pos[v]}
        bags[v] = frozenset(later | {v})
        for a in later:
            nb[a] |= later - {a}
        if later:
            parent[v] = min(later, key=pos.get)
    edges = [(v, p) for v, p in parent.items()]
    roots = [v for v in order if v not in parent]
    edges += [(roots[i], roots[i + 1]) for i in range(len(roots) - 1)]
    # renumber bags 1..n in elimination order
    ren = {v: i + 1 for i, v in enumerate(order)}
    return TreeDecomposition(
        {ren[v]: b for v, b in bags.items()}, [(ren[x], ren[y]) for x, y in edges]
    )


def _exact_order(g: Graph):
    """Elimination order of minimum width by dynamic programming over vertex subsets."""
    n = g.n
    nbr = g.masks()
    full = sum(1 << v for v in g.vertices())

    def q_size(s, v):
        # vertices outside s + v reachable from v through s
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            w = frontier.bit_length() - 1
            frontier &= ~(1 << w)
            new = nbr[w] & ~seen
            seen |= new
            out |= new & ~s
            frontier |= new & s
        return out.bit_count()

    best = {0: (-1, None)}
    order_masks = sorted(range(1 << n), key=lambda m: m.bit_count())
    for m in order_masks:
        if m == 0:
            continue
        s = m << 1
        cand = None
        mm = s
        while mm:
            low = mm & -mm
            mm ^= low
            v = low.bit_length() - 1
            w = max(best[(s ^ low) >> 1][0], q_size(s ^ low, v))
            if cand is None or w < cand[0]:
                cand = (w, v)
        best[m] = cand
    order = []
    m = full >> 1
    while m:
        v = best[m][1]
        order.append(v)
        m ^= 1 << (v - 1)
    order.reverse()
    return order


def heuristic_td(g: Graph, exact_limit: int = 12) -> TreeDecomposition:
    """Optimal decomposition up to exact_limit vertices, min-fill-in beyond."""
    if g.n == 0:
        return TreeDecomposition({}, [])
    if g.n <= exact_limit:
        return _td_from_order(g, _exact_order(g))
    import networkx as nx
    from networkx.algorithms.approximation import treewidth_min_fill_in

    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges)
    _, t = treewidth_min_fill_in(h)
    ids = {b: i + 1 for i, b in enumerate(sorted(t.nodes, key=lambda b: sorted(b)))}
    return TreeDecomposition(
        {ids[b]: frozenset(b) for b in t.nodes}, [(ids[x], ids[y]) for x, y in t.edges]
    )


LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN = "leaf", "introduce", "introduce_edge", "forget", "join"


@dataclass
class NiceNode:
    kind: str
    bag: tuple  # sorted
    children: list = field(default_factory=list)
    vertex: int | None = None  # introduced or forgotten vertex
    edge: tuple | None = None  # introduced edge (u, v), u < v


@dataclass
class NiceTreeDecomposition:
    nodes: list
    root: int

    @property
    def width(self) -> int:
        return max(len(x.bag) for x in self.nodes) - 1

    def postorder(self) -> list:
        out, stack = [], [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
            else:
                stack.append((x, True))
                for c in reversed(self.nodes[x].children):
                    stack.append((c, False))
        return out

    def vertices_below(self) -> list:
        """For each node the vertex set V_x of its subtree."""
        below = [frozenset()] * len(self.nodes)
        for x in self.postorder():
            s = set(self.nodes[x].bag)
            for c in self.nodes[x].children:
                s |= below[c]
            below[x] = frozenset(s)
        return below

    def edges_below(self) -> list:
        below = [frozenset()] * len(self.nodes)
        for x in self.postorder():
            node = self.nodes[x]
            s = set()
            for c in node.children:
                s |= below[c]
            if node.kind == INTRODUCE_EDGE:
                s.add(node.edge)
            below[x] = frozenset(s)
        return below

    def validate(self, g: Graph):
        root = self.nodes[self.root]
        if g.n == 0 and root.kind == LEAF and len(self.nodes) == 1:
            return
        if root.bag or len(root.children) != 1:
            raise InvalidDecomposition("root must have an empty bag and one child")
        seen_edges = []
        for node in self.nodes:
            kids = [self.nodes[c] for c in node.children]
            b = set(node.bag)
            if node.kind == LEAF:
                ok = not kids and not b
            elif node.kind == INTRODUCE:
                ok = len(kids) == 1 and node.vertex in b and b - {node.vertex} == set(kids[0].bag) \
                    and node.vertex not in kids[0].bag
            elif node.kind == INTRODUCE_EDGE:
                u, v = node.edge
                ok = len(kids) == 1 and u in b and v in b and b == set(kids[0].bag)
                seen_edges.append(node.edge)
            elif node.kind == FORGET:
                ok = len(kids) == 1 and node.vertex not in b and set(kids[0].bag) == b | {node.vertex}
            elif node.kind == JOIN:
                ok = len(kids) == 2 and all(set(k.bag) == b for k in kids)
            else:
                ok = False
            if not ok:
                raise InvalidDecomposition(f"malformed {node.kind} node with bag {node.bag}")
        if sorted(seen_edges) != g.sorted_edges():
            raise InvalidDecomposition("edges are not introduced exactly once each")


def make_nice(g: Graph, td: TreeDecomposition, eager_edges: bool = False) -> NiceTreeDecomposition:
    """Nice decomposition of a valid tree decomposition. Edges are introduced just
    before the first endpoint is forgotten, or with eager_edges right after the
    second endpoint enters the bag."""
    td.validate(g)
    nodes = []
    introduced = set()

    def add(kind, bag, children=(), vertex=None, edge=None):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), list(children), vertex, edge))
        return len(nodes) - 1

    def forget(top, bag, v):
        for u in sorted(bag):
            e = (min(u, v), max(u, v))
            if u != v and e in g.edges and e not in introduced:
                introduced.add(e)
                top = add(INTRODUCE_EDGE, bag, [top], edge=e)
        bag = bag - {v}
        return add(FORGET, bag, [top], vertex=v), bag

    def transition(top, cur, target):
        for v in sorted(cur - target):
            top, cur = forget(top, cur, v)
        for v in sorted(target - cur):
            cur = cur | {v}
            top = add(INTRODUCE, cur, [top], vertex=v)
            if eager_edges:
                for u in sorted(cur):
                    e = (min(u, v), max(u, v))
                    if u != v and e in g.edges and e not in introduced:
                        introduced.add(e)
                        top = add(INTRODUCE_EDGE, cur, [top], edge=e)
        return top

    if not td.bags:
        # empty graph: a lone leaf acts as the root
        return NiceTreeDecomposition([NiceNode(LEAF, ())], 0)

    adj = td.adjacency()
    root = min(td.bags)
    parent = {root: None}
    order = [root]
    for x in order:
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    kids = {x: [] for x in td.bags}
    for x in order[1:]:
        kids[parent[x]].append(x)

    top_of = {}
    for x in reversed(order):
        bag = td.bags[x]
        if not kids[x]:
            top_of[x] = transition(add(LEAF, ()), frozenset(), bag)
            continue
        tops = [transition(top_of[y], td.bags[y], bag) for y in kids[x]]
        t = tops[0]
        for other in tops[1:]:
            t = add(JOIN, bag, [t, other])
        top_of[x] = t

    top, cur = top_of[root], td.bags[root]
    for v in sorted(cur):
        top, cur = forget(top, cur, v)
    nice = NiceTreeDecomposition(nodes, top)
    nice.validate(g)
    return nice


def nice_decomposition(g: Graph, td: TreeDecomposition | None = None,
                       eager_edges: bool = False) -> NiceTreeDecomposition:
    return make_nice(g, td if td is not None else heuristic_td(g), eager_edges)


# ---------------------------------------------------------------- causal chains

def _activatable(inst: Instance, v: int, c: int) -> bool:
    """Whether (v, c) can be newly activated in some round >= 1."""
    if v in inst.seeds(c):
        return False
    deg = inst.graph.degree(v)
    if v in inst.seeds(1 - c):
        return inst.f2[v] <= deg
    # first opinion via f1, or second opinion (after a bought/earned first) via f2
    return inst.f1[v] <= deg or inst.f2[v] <= deg


def latest_activation_rounds(inst: Instance, step_limit: int = 200_000) -> dict:
    """Upper bound on the round in which each (v, c) can be newly activated.

    A pair activated in round t >= 2 has a predecessor activated in round t-1: a
    neighbour taking the same opinion, or (only if f2(v) < f1(v)) the vertex itself
    taking the other opinion. Predecessors in rounds >= 1 are not seeded with their
    opinion, so t is at most the number of pairs on a simple path of such pairs.
    Returns {(v, c): bound}; bound 0 means the pair is never activated after round 0.
    Falls back to the size of the reachable pair set when the search is too long.
    """
    g = inst.graph
    nodes = [(v, c) for v in g.vertices() for c in (0, 1) if _activatable(inst, v, c)]
    alive = set(nodes)
    preds = {p: [] for p in nodes}
    for v, c in nodes:
        for u in g.neighbors(v):
            if (u, c) in alive:
                preds[v, c].append((u, c))
        if inst.f2[v] < inst.f1[v] and (v, 1 - c) in alive:
            preds[v, c].append((v, 1 - c))
    out = {(v, c): 0 for v in g.vertices() for c in (0, 1)}
    steps = 0
    for target in nodes:
        best = 1
        stack = [(target, iter(preds[target]))]
        on = {target}
        exhausted = False
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on.discard(node)
                continue
            if nxt in on:
                continue
            steps += 1
            if steps > step_limit:
                exhausted = True
                break
            on.add(nxt)
            stack.append((nxt, iter(preds[nxt])))
            best = max(best, len(stack))
        if exhausted:
            # fallback: pairs that can reach the target
            seen = {target}
            todo = [target]
            while todo:
                p = todo.pop()
                for q in preds[p]:
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
            best = len(seen)
        out[target] = best
    return out


def cap_rounds_by_chains(inst: Instance, bounds: dict | None = None) -> Instance:
    """Deadline capped at the latest round any pair can still change."""
    if bounds is None:
        bounds = latest_activation_rounds(inst)
    return inst.with_(deadline=min(inst.deadline, max(bounds.values(), default=0)))
