"""Graphs, instances and solutions, plus the line-oriented text formats."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable


class ParseError(ValueError):
    """Malformed instance or solution text. `line` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset  # of (u, v) with u < v
    adj: tuple = field(compare=False, repr=False)  # adj[v] = sorted neighbours, adj[0] unused

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        if n < 0:
            raise ValueError("negative vertex count")
        es = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"vertex id out of range in edge {u} {v}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in es:
                raise ValueError(f"duplicate edge {e[0]} {e[1]}")
            es.add(e)
        nb = [[] for _ in range(n + 1)]
        for u, v in es:
            nb[u].append(v)
            nb[v].append(u)
        return cls(n, frozenset(es), tuple(tuple(sorted(x)) for x in nb))

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def masks(self) -> list:
        """Neighbourhood bitmasks, bit v stands for vertex v."""
        out = [0] * (self.n + 1)
        for v in self.vertices():
            m = 0
            for u in self.adj[v]:
                m |= 1 << u
            out[v] = m
        return out

    def induced(self, keep: Iterable[int]):
        """Induced subgraph on `keep`, relabelled 1..k in ascending order.

        Returns (graph, old_ids) where old_ids[i] is the original id of new vertex i
        (old_ids[0] is 0)."""
        old = [0] + sorted(set(keep))
        new_of = {v: i for i, v in enumerate(old) if i}
        es = [(new_of[u], new_of[v]) for u, v in self.edges if u in new_of and v in new_of]
        return Graph.from_edges(len(old) - 1, es), tuple(old)

    def components(self) -> list:
        """Connected components as sorted lists, ordered by smallest vertex."""
        seen = [False] * (self.n + 1)
        comps = []
        for s in self.vertices():
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps


@dataclass(frozen=True)
class Instance:
    """A 2OTSS instance. f1/f2 are tuples indexed by vertex id (index 0 unused, 0)."""

    graph: Graph
    f1: tuple
    f2: tuple
    seed_a: frozenset
    seed_b: frozenset
    budget: int
    deadline: int

    def __post_init__(self):
        n = self.graph.n
        if len(self.f1) != n + 1 or len(self.f2) != n + 1:
            raise ValueError("threshold tuples must have length n+1")
        if any(x < 0 for x in self.f1) or any(x < 0 for x in self.f2):
            raise ValueError("negative threshold")
        for s in (self.seed_a, self.seed_b):
            for v in s:
                if not 1 <= v <= n:
                    raise ValueError(f"vertex id out of range in seed set: {v}")
        if self.budget < 0 or self.deadline < 0:
            raise ValueError("budget and deadline must be nonnegative")

    @classmethod
    def build(cls, n, edges, f1, f2, seed_a=(), seed_b=(), budget=0, deadline=None):
        """Convenience constructor. f1/f2 may be ints, dicts or lists of length n (for 1..n)."""
        g = Graph.from_edges(n, edges)
        return cls(
            g,
            _thresholds(f1, n),
            _thresholds(f2, n),
            frozenset(seed_a),
            frozenset(seed_b),
            budget,
            2 * n if deadline is None else deadline,
        )

    @property
    def n(self) -> int:
        return self.graph.n

    def with_(self, **kw) -> "Instance":
        return replace(self, **kw)

    def seeds(self, c: int) -> frozenset:
        return self.seed_a if c == 0 else self.seed_b

    def max_threshold(self) -> int:
        return max_threshold(self)


def _thresholds(f, n) -> tuple:
    if isinstance(f, int):
        return (0,) + (f,) * n
    if isinstance(f, dict):
        return (0,) + tuple(f[v] for v in range(1, n + 1))
    f = tuple(f)
    if len(f) != n:
        raise ValueError("threshold list must have n entries")
    return (0,) + f


@dataclass(frozen=True)
class Solution:
    target_a: frozenset = frozenset()
    target_b: frozenset = frozenset()

    @classmethod
    def of(cls, ta=(), tb=()) -> "Solution":
        return cls(frozenset(ta), frozenset(tb))

    @property
    def cost(self) -> int:
        return len(self.target_a) + len(self.target_b)


def max_threshold(inst: Instance) -> int:
    """Largest threshold of either kind, 0 on the empty graph."""
    return max(max(inst.f1), max(inst.f2)) if inst.n else 0


# ---------------------------------------------------------------- text formats

def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError("expected integers", lineno) from None


def parse_instance(text: str) -> Instance:
    lines = []
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.split()[0] == "c":
            continue
        lines.append((i, s.split()))
    if not lines or lines[0][1][0] != "p":
        raise ParseError("missing header 'p 2otss <n> <m>'", lines[0][0] if lines else None)
    pos = 0

    def take(tag):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of input, expected '{tag}'")
        no, tok = lines[pos]
        if tok[0] != tag:
            raise ParseError(f"expected '{tag}' line, found '{tok[0]}'", no)
        pos += 1
        return no, tok[1:]

    no, hdr = take("p")
    if len(hdr) != 3 or hdr[0] != "2otss":
        raise ParseError("header must be 'p 2otss <n> <m>'", no)
    n, m = _ints(hdr[1:], no)
    if n < 0 or m < 0:
        raise ParseError("negative size in header", no)

    edges = set()
    for _ in range(m):
        no, tok = take("e")
        if len(tok) != 2:
            raise ParseError("edge line needs two ids", no)
        u, v = _ints(tok, no)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError("vertex id out of range", no)
        if u == v:
            raise ParseError("self-loop", no)
        e = (min(u, v), max(u, v))
        if e in edges:
            raise ParseError("duplicate edge", no)
        edges.add(e)

    f1 = [None] * (n + 1)
    f2 = [None] * (n + 1)
    for _ in range(n):
        no, tok = take("t")
        if len(tok) != 3:
            raise ParseError("threshold line needs 't <v> <f1> <f2>'", no)
        v, a, b = _ints(tok, no)
        if not 1 <= v <= n:
            raise ParseError("vertex id out of range", no)
        if f1[v] is not None:
            raise ParseError(f"duplicate threshold line for vertex {v}", no)
        if a < 0 or b < 0:
            raise ParseError("negative threshold", no)
        f1[v], f2[v] = a, b

    seeds = []
    for tag in ("sa", "sb"):
        no, tok = take(tag)
        ids = _ints(tok, no)
        for v in ids:
            if not 1 <= v <= n:
                raise ParseError("vertex id out of range", no)
        seeds.append(frozenset(ids))

    no, tok = take("b")
    if len(tok) != 1:
        raise ParseError("budget line needs one value", no)
    (budget,) = _ints(tok, no)
    deadline = 2 * n
    if pos < len(lines):
        no, tok = take("r")
        if len(tok) != 1:
            raise ParseError("deadline line needs one value", no)
        (deadline,) = _ints(tok, no)
    if pos < len(lines):
        raise ParseError("trailing content", lines[pos][0])
    if budget < 0 or deadline < 0:
        raise ParseError("budget and deadline must be nonnegative", no)

    f1[0] = f2[0] = 0
    return Instance(
        Graph.from_edges(n, edges), tuple(f1), tuple(f2), seeds[0], seeds[1], budget, deadline
    )


def _idline(tag, ids):
    return " ".join([tag] + [str(v) for v in sorted(ids)])


def serialize_instance(inst: Instance, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    g = inst.graph
    out.append(f"p 2otss {g.n} {g.m}")
    out += [f"e {u} {v}" for u, v in g.sorted_edges()]
    out += [f"t {v} {inst.f1[v]} {inst.f2[v]}" for v in g.vertices()]
    out.append(_idline("sa", inst.seed_a))
    out.append(_idline("sb", inst.seed_b))
    out.append(f"b {inst.budget}")
    out.append(f"r {inst.deadline}")
    return "\n".join(out) + "\n"


def read_label(text: str):
    """Return the `c label yes|no` sidecar value as a bool, or None."""
    for raw in text.splitlines():
        tok = raw.split()
        if len(tok) == 3 and tok[0] == "c" and tok[1] == "label":
            return tok[2] == "yes"
    return None


def parse_solution(text: str, n: int | None = None) -> Solution:
    sets = {}
    for i, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] not in ("ta", "tb") or tok[0] in sets:
            raise ParseError(f"unexpected line '{tok[0]}'", i)
        ids = _ints(tok[1:], i)
        if n is not None and any(not 1 <= v <= n for v in ids):
            raise ParseError("vertex id out of range", i)
        sets[tok[0]] = frozenset(ids)
    if set(sets) != {"ta", "tb"}:
        raise ParseError("solution needs 'ta' and 'tb' lines")
    return Solution(sets["ta"], sets["tb"])


def serialize_solution(sol: Solution) -> str:
    return _idline("ta", sol.target_a) + "\n" + _idline("tb", sol.target_b) + "\n"


def parse_vertex_set(text: str) -> frozenset:
    """Whitespace separated ids, `c` comment lines allowed (for --restrict/--cover/--pvc)."""
    ids = []
    for i, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if tok and tok[0] != "c":
            ids += _ints(tok, i)
    return frozenset(ids)
