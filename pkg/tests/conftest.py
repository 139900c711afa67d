import random

from hypothesis import strategies as st

from otss.instance import Instance, Solution

PATH_TEXT = "p 2otss 3 2\ne 1 2\ne 2 3\nt 1 1 1\nt 2 1 1\nt 3 1 1\nsa 1\nsb 3\nb 0\nr 6\n"


def path_instance(deadline=6, budget=0):
    return Instance.build(3, [(1, 2), (2, 3)], 1, 1, [1], [3], budget, deadline)


def guard_path(budget=0):
    """Seed leaf 1 in S_a, central 2, far leaf 3 with f2 = 2."""
    return Instance.build(3, [(1, 2), (2, 3)], [1, 1, 1], [1, 1, 2], [1], [], budget, 6)


def random_instance(rng, n_max=6, p=None, f_max=3, zero=True, b_max=3, deadline=None):
    n = rng.randint(1, n_max)
    p = rng.uniform(0.1, 0.7) if p is None else p
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    lo = 0 if zero else 1
    f1 = [rng.randint(lo, f_max) for _ in range(n)]
    f2 = [rng.randint(lo, f_max) for _ in range(n)]
    sa = [v for v in range(1, n + 1) if rng.random() < 0.25]
    sb = [v for v in range(1, n + 1) if rng.random() < 0.25]
    t = rng.randint(0, 2 * n) if deadline is None else deadline
    return Instance.build(n, edges, f1, f2, sa, sb, rng.randint(0, b_max), t)


def random_solution(rng, inst, p=0.25):
    vs = list(inst.graph.vertices())
    return Solution.of([v for v in vs if rng.random() < p], [v for v in vs if rng.random() < p])


@st.composite
def instances(draw, n_max=6, f_max=3, b_max=3):
    n = draw(st.integers(0, n_max))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    f1 = draw(st.lists(st.integers(0, f_max), min_size=n, max_size=n))
    f2 = draw(st.lists(st.integers(0, f_max), min_size=n, max_size=n))
    vs = list(range(1, n + 1))
    sa = draw(st.sets(st.sampled_from(vs))) if vs else set()
    sb = draw(st.sets(st.sampled_from(vs))) if vs else set()
    budget = draw(st.integers(0, b_max))
    deadline = draw(st.integers(0, 2 * n))
    return Instance.build(n, edges, f1, f2, sa, sb, budget, deadline)


@st.composite
def instance_and_solution(draw, n_max=6):
    inst = draw(instances(n_max=n_max))
    vs = list(inst.graph.vertices())
    ta = draw(st.sets(st.sampled_from(vs))) if vs else set()
    tb = draw(st.sets(st.sampled_from(vs))) if vs else set()
    return inst, Solution.of(ta, tb)


def rng_for(seed):
    return random.Random(seed)


K2 = (2, [(1, 2)])
P3 = (3, [(1, 2), (2, 3)])


def random_psi(rng, pattern=K2, n_max=4, p=0.5):
    """Random admissible PsiInstance (every class and every cross set nonempty)."""
    from otss.generators import PsiInstance
    h_n, h_edges = pattern
    while True:
        n = rng.randint(h_n, n_max)
        col = [rng.randint(1, h_n) for _ in range(n)]
        edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
        psi = PsiInstance.build(n, edges, h_n, h_edges, col)
        try:
            psi.check()
        except ValueError:
            continue
        return psi


def good_pair_report(red, four_rounds=False):
    """Problems found over all good pairs: a pair must succeed exactly when every
    selected host edge contains the selected host vertices of its endpoints."""
    from otss.process import Engine, to_mask
    eng = Engine(red.instance)
    full = sum(1 << v for v in red.instance.graph.vertices())
    issues = []
    for ta, tb in red.good_pairs():
        sel = red.selected(ta, tb)
        incident = all(sel[w] == sel[w, w2][0] and sel[w2] == sel[w, w2][1] for w, w2 in red.edge_gadgets)
        ok = eng.succeeds(to_mask(ta), to_mask(tb))
        if ok != incident:
            issues.append(("pair", sel, ok))
        if four_rounds and ok:
            rs = eng.rounds(to_mask(ta), to_mask(tb))
            if len(rs) > 5 or rs[min(4, len(rs) - 1)][0] != full:
                issues.append(("rounds", sel))
    if (red.structured_solve() is not None) != red.label:
        issues.append(("label", red.label))
    return issues
