import random
from itertools import permutations

import pytest
from hypothesis import given, settings

from otss.instance import Graph, Instance
from otss.process import simulate
from otss.structure import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    JOIN,
    LEAF,
    InvalidDecomposition,
    TreeDecomposition,
    cap_rounds_by_chains,
    cap_rounds_by_pvc3,
    cap_rounds_by_treedepth,
    exact_k_path_vertex_cover,
    exact_vertex_cover,
    heuristic_td,
    is_k_path_vertex_cover,
    latest_activation_rounds,
    make_nice,
    read_td,
    treedepth,
    treedepth_exact,
    treedepth_upper_bound,
    write_td,
)

from conftest import instance_and_solution, random_instance


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def random_graph(rng, n, p):
    return Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
                                if rng.random() < p])


# independent oracles

def treewidth_by_orders(g):
    """Exact treewidth as the best elimination order over all permutations."""
    if g.n == 0:
        return -1
    best = g.n
    for order in permutations(g.vertices()):
        nb = {v: set(g.adj[v]) for v in g.vertices()}
        w = 0
        for v in order:
            w = max(w, len(nb[v]))
            for a in nb[v]:
                nb[a] |= nb[v] - {a}
                nb[a].discard(v)
            del nb[v]
        best = min(best, w)
    return best


def cover_by_subsets(g, k):
    from itertools import combinations
    for size in range(g.n + 1):
        for s in combinations(g.vertices(), size):
            if is_k_path_vertex_cover(g, k, s):
                return size


def test_treedepth_examples():
    assert treedepth_exact(Graph.from_edges(1, [])) == 1
    assert treedepth_exact(Graph.from_edges(5, [(1, v) for v in range(2, 6)])) == 2
    assert treedepth_exact(path(7)) == 3
    assert treedepth_exact(Graph.from_edges(0, [])) == 0


@pytest.mark.parametrize("n", range(1, 12))
def test_treedepth_known_families(n):
    # [DERIVED] closed forms for paths, cycles and cliques
    assert treedepth_exact(path(n)) == (n).bit_length()
    assert treedepth_exact(complete(min(n, 7))) == min(n, 7)
    if n >= 3:
        assert treedepth_exact(cycle(n)) == 1 + (n - 1).bit_length()


def test_treedepth_bounds_and_refusal():
    rng = random.Random(2)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9), 0.35)
        assert treedepth_exact(g) <= treedepth_upper_bound(g)
        assert treedepth(g) == (treedepth_exact(g), True)
    assert treedepth_exact(path(7), d_max=2) is None
    with pytest.raises(ValueError):
        treedepth_exact(path(20))
    assert treedepth(path(20)) == (treedepth_upper_bound(path(20)), False)


def test_round_caps():
    inst = Instance.build(5, [(1, 2)], 1, 1, deadline=50)
    assert cap_rounds_by_treedepth(inst, 1).deadline == 1
    assert cap_rounds_by_treedepth(inst, 2).deadline == 7
    assert cap_rounds_by_treedepth(inst, 5).deadline == 10
    assert cap_rounds_by_pvc3(inst, 1).deadline == 13
    assert cap_rounds_by_pvc3(inst, 0).deadline == 3
    assert cap_rounds_by_pvc3(inst.with_(deadline=2), 1).deadline == 2


def test_covers_against_subsets():
    rng = random.Random(4)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 8), 0.35)
        for k in (2, 3, 4):
            s = exact_k_path_vertex_cover(g, k, g.n)
            assert is_k_path_vertex_cover(g, k, s)
            assert len(s) == cover_by_subsets(g, k)
        assert exact_vertex_cover(g, len(exact_vertex_cover(g, g.n)) - 1 if g.m else 0) is None or not g.m
    with pytest.raises(ValueError):
        exact_k_path_vertex_cover(path(3), 5, 3)


def test_cover_examples():
    assert exact_vertex_cover(complete(4), 4) is not None and len(exact_vertex_cover(complete(4), 4)) == 3
    assert exact_k_path_vertex_cover(path(3), 3, 1) in ({1}, {2}, {3})
    assert exact_k_path_vertex_cover(path(6), 3, 1) is None


TD_TEXT = "c path\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"


def test_td_io_round_trip():
    td = read_td(TD_TEXT)
    assert td.width == 1 and td.bags[2] == {2, 3}
    td.validate(path(3))
    assert read_td(write_td(td, 3)) == td


@pytest.mark.parametrize("text", [
    "b 1 1 2\n",
    "s td 1 2 3\nb 1 1 2\nb 2 2 3\n",
    "s td 2 1 3\nb 1 1 2\nb 2 2 3\n1 2\n",
    "s td 2 2 3\nb 1 1 x\nb 2 2 3\n1 2\n",
    "s tw 2 2 3\n",
    "s td 2 2 3\nb 1 1 2\nb 1 2 3\n",
])
def test_td_parse_errors(text):
    with pytest.raises(InvalidDecomposition):
        read_td(text)


@pytest.mark.parametrize("bags,edges", [
    ({1: frozenset({1, 2})}, []),                                    # edge 2-3 uncovered
    ({1: frozenset({1, 2}), 2: frozenset({2, 3})}, []),              # not connected
    ({1: frozenset({1, 2}), 2: frozenset({3}), 3: frozenset({2, 3})}, [(1, 2), (2, 3)]),  # 2 split
    ({1: frozenset({1, 2}), 2: frozenset({2, 3})}, [(1, 3)]),        # unknown bag
    ({1: frozenset({1, 2, 3, 4})}, []),                              # unknown vertex
])
def test_td_validation_errors(bags, edges):
    with pytest.raises(InvalidDecomposition):
        TreeDecomposition(bags, edges).validate(path(3))


def test_heuristic_td_is_optimal_on_small_graphs():
    rng = random.Random(8)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 7), 0.45)
        td = heuristic_td(g)
        td.validate(g)
        assert td.width == treewidth_by_orders(g)


def test_heuristic_td_large_graph_is_valid():
    g = random_graph(random.Random(1), 25, 0.15)
    heuristic_td(g).validate(g)


@pytest.mark.parametrize("eager", [False, True])
def test_make_nice(eager):
    rng = random.Random(9)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9), 0.35)
        td = heuristic_td(g)
        nice = make_nice(g, td, eager_edges=eager)
        nice.validate(g)
        assert nice.width == td.width or (g.n and nice.width <= td.width)
        kinds = {x.kind for x in nice.nodes}
        assert kinds <= {LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN}
        assert nice.vertices_below()[nice.root] == frozenset(g.vertices())
        assert sorted(nice.edges_below()[nice.root]) == g.sorted_edges()


def test_chain_bounds_examples():
    # a path with one a-seed at the end: the far end takes a in round 4
    inst = Instance.build(5, [(i, i + 1) for i in range(1, 5)], 1, 1, [1], [], 0, 20)
    b = latest_activation_rounds(inst)
    assert b[1, 0] == 0
    assert b[5, 0] == 4
    assert cap_rounds_by_chains(inst).deadline == 5  # the b chain through all five vertices
    iso = Instance.build(2, [], 1, 1, [], [], 0, 9)
    assert cap_rounds_by_chains(iso).deadline == 0


def _check_chain_bounds(inst, sol):
    bounds = latest_activation_rounds(inst)
    trace = simulate(inst, sol)
    for i in range(1, len(trace.rounds)):
        for c in (0, 1):
            for v in trace.rounds[i][c] - trace.rounds[i - 1][c]:
                assert i <= bounds[v, c]
    tiny = latest_activation_rounds(inst, step_limit=3)
    assert all(tiny[p] >= bounds[p] for p in bounds)


@settings(max_examples=300, deadline=None)
@given(instance_and_solution(n_max=7))
def test_chain_bounds_hold(pair):
    _check_chain_bounds(*pair)


def test_chain_bounds_random_dense():
    rng = random.Random(12)
    from conftest import random_solution
    for _ in range(200):
        inst = random_instance(rng, n_max=9, f_max=2)
        _check_chain_bounds(inst, random_solution(rng, inst))
