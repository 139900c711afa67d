import random

import pytest

from otss.generators import gen_random, gen_selection_gadget
from otss.instance import Instance
from otss.oracle import INF, brute_force_min
from otss.pipeline import ALGOS, choose_algo, component_instances, solve, structural_stats
from otss.process import Verdict, verify_solution
from otss.structure import exact_k_path_vertex_cover, exact_vertex_cover, make_nice, heuristic_td

from conftest import guard_path, path_instance, random_instance


def test_components_keep_budget_and_cap_deadline():
    inst = Instance.build(5, [(1, 2), (4, 5)], 1, 1, [1], [5], 2, 30)
    parts = list(component_instances(inst))
    assert [old for _, old in parts] == [(0, 1, 2), (0, 3), (0, 4, 5)]
    assert all(sub.budget == 2 for sub, _ in parts)
    assert [sub.deadline for sub, _ in parts] == [4, 2, 4]


def test_structural_stats():
    st = structural_stats(path_instance())
    assert st["n"] == 3 and st["m"] == 2 and st["vc"] == 1 and st["pvc3"] == 1
    assert st["td"] == 2 and st["td_exact"] and st["tw_bound"] == 1
    assert st["cap_td"] == 6 and st["cap_pvc3"] == 6


def test_choose_algo():
    assert choose_algo(path_instance()) == "brute"
    star = Instance.build(12, [(1, v) for v in range(2, 13)], 1, 1)
    assert choose_algo(star) == "vc"


@pytest.mark.parametrize("algo", ALGOS)
def test_examples_every_algo(algo):
    assert solve(path_instance(), algo).cost == 0
    assert not solve(guard_path(), algo).answer
    res = solve(guard_path(budget=1), algo)
    assert res.cost == 1 and verify_solution(guard_path(budget=1), res.witness) is Verdict.ACCEPTED


def test_budget_is_shared_across_components():
    # two separate guard paths each need one purchase
    inst = Instance.build(6, [(1, 2), (2, 3), (4, 5), (5, 6)], 1, [1, 1, 2, 1, 1, 2], [1, 4], [], 1, 12)
    for algo in ALGOS:
        assert not solve(inst, algo).answer
        res = solve(inst.with_(budget=2), algo)
        assert res.cost == 2 and res.stats["components"] in (1, 2)


def test_user_structures():
    inst, gad = gen_selection_gadget(3)
    cover = exact_vertex_cover(inst.graph, inst.n)
    assert solve(inst, "vc", cover=cover).cost == 1
    pvc = exact_k_path_vertex_cover(inst.graph, 3, inst.n)
    assert solve(inst, "pvc3", pvc=pvc).cost == 1
    nice = make_nice(inst.graph, heuristic_td(inst.graph))
    assert solve(inst, "twdp", nice=nice).cost == 1
    assert solve(inst, "brute", restrict=set(gad.selection)).cost == 1
    assert not solve(inst, "brute", restrict={v for g in gad.guards for v in g}).answer


def test_threads_give_same_result():
    inst = gen_random(10, 0.15, 2, 0.25, 3, 5, deadline=20)
    assert solve(inst, "twdp", threads=2).cost == solve(inst, "twdp").cost


def test_unknown_algo():
    with pytest.raises(ValueError):
        solve(path_instance(), "magic")


def test_all_solvers_agree():
    rng = random.Random(47)
    for _ in range(40):
        inst = random_instance(rng, n_max=7, p=0.25, f_max=2)
        ref, _ = brute_force_min(inst)
        for algo in ALGOS:
            res = solve(inst, algo)
            assert res.cost == ref, algo
            if res.answer:
                assert verify_solution(inst, res.witness) is Verdict.ACCEPTED
