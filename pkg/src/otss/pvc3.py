"""Exact solver around a 3-path vertex cover U.

Every component of G - U has at most two vertices. We guess the activation
rounds of each vertex of U; that fixes the influence U has on the components, so
each component can be simulated on its own for each of its seed purchases. A
vertex of U then only imposes counting constraints on its neighbourhood (at least
g active at one round, at most h or e at others), which a small DP over the
components with saturating counters resolves.
"""

from __future__ import annotations

import math
from itertools import product

from otss.instance import Instance, Solution
from otss.structure import exact_k_path_vertex_cover
from otss.twdp import INF, e_round, q_row, round_pairs


def phi(inst: Instance, guess: dict, v: int, c: int, t: int) -> int:
    """Number of U-neighbours of v holding opinion c after round t under the guess."""
    return sum(1 for u in inst.graph.neighbors(v) if u in guess and guess[u][c] <= t)


def constraints_of(state, T):
    """(opinion, kind, round, bound) constraints a U vertex in `state` imposes.

    kind is '>=' or '<='. Rounds below 0 are dropped (nothing is active there)."""
    out = []
    for c in (0, 1):
        r = state[c]
        if r == INF:
            out.append((c, "<=", T, state[4 + c]))
        elif r >= 1:
            if state[2 + c] > 0:
                out.append((c, ">=", r - 1, state[2 + c]))
            if r >= 2:
                out.append((c, "<=", r - 2, state[4 + c]))
        q = e_round(state, c)
        if q is not None:
            out.append((c, "<=", q, state[6 + c]))
    return out


def component_profiles(inst: Instance, guess: dict, comp, cons, T):
    """Feasible purchases for one component of G - U.

    cons lists (u, c, kind, round, bound) constraints of the U vertices adjacent to
    the component. Returns a list of (cost, contributions, ta, tb) with one
    contribution per constraint, cheapest per contribution vector.
    """
    g = inst.graph
    comp = tuple(comp)
    phis = {}
    for v in comp:
        for c in (0, 1):
            phis[v, c] = [phi(inst, guess, v, c, t) for t in range(T + 2)]
    # after this round the U side is constant, so a repeated state is final
    settle = max((r for s in guess.values() for r in s[:2] if r != INF), default=0)
    options = []
    for v in comp:
        opts = []
        for a in ((False,) if v in inst.seed_a else (False, True)):
            for b in ((False,) if v in inst.seed_b else (False, True)):
                opts.append((a, b))
        options.append(opts)
    partner = [None] * len(comp)
    if len(comp) == 2 and comp[1] in g.neighbors(comp[0]):
        partner = [1, 0]
    f1 = [inst.f1[v] for v in comp]
    f2 = [inst.f2[v] for v in comp]
    ph = [(phis[v, 0], phis[v, 1]) for v in comp]
    touch = [[j for j, v in enumerate(comp) if v in g.neighbors(u)] for u, *_ in cons]
    idx = range(len(comp))

    best = {}
    for choice in product(*options):
        cur = tuple((v in inst.seed_a or a, v in inst.seed_b or b) for v, (a, b) in zip(comp, choice))
        hist = [cur]
        t = 0
        while t <= T:
            new = []
            for j in idx:
                ha, hb = cur[j]
                w = partner[j]
                ca = ph[j][0][t] + (1 if w is not None and cur[w][0] else 0)
                cb = ph[j][1][t] + (1 if w is not None and cur[w][1] else 0)
                if not ha and not hb:
                    new.append((ca >= f1[j], cb >= f1[j]))
                elif ha and not hb:
                    new.append((True, cb >= f2[j]))
                elif hb and not ha:
                    new.append((ca >= f2[j], True))
                else:
                    new.append(cur[j])
            new = tuple(new)
            hist.append(new)
            t += 1
            if new == cur and t > settle:
                break
            cur = new
        final = hist[-1]
        if len(hist) <= T + 1:
            # settled early: the state stays constant up to round T + 1
            if not all(a == b for a, b in final):
                continue
        elif not (hist[T] == hist[T + 1] and all(a == b for a, b in hist[T])):
            continue
        last = len(hist) - 1
        contrib = tuple(
            sum(1 for j in touch[k] if hist[min(rnd, last)][j][c])
            for k, (u, c, kind, rnd, bound) in enumerate(cons)
        )
        cost = sum(a + b for a, b in choice)
        if contrib not in best or cost < best[contrib][0]:
            ta = [v for v, (a, b) in zip(comp, choice) if a]
            tb = [v for v, (a, b) in zip(comp, choice) if b]
            best[contrib] = (cost, contrib, ta, tb)
    return sorted(best.values(), key=lambda p: (p[0], p[1]))


class Pvc3Solver:
    def __init__(self, inst: Instance, pvc, budget=None, bounds=None):
        self.inst = inst
        self.T = inst.deadline
        self.budget = budget
        self.U = sorted(pvc)
        g = inst.graph
        uset = set(self.U)
        rest, old = g.induced(v for v in g.vertices() if v not in uset)
        comps = [[old[v] for v in c] for c in rest.components()]
        if any(len(c) > 2 for c in comps):
            raise ValueError("vertex set is not a 3-path vertex cover")
        self.comps = comps
        self.comp_us = [sorted({u for v in c for u in g.neighbors(v) if u in uset}) for c in comps]
        # guess order: breadth first over U so components close early
        self.order = self._order()
        self.states = {}
        for u in self.U:
            rows = []
            for ra, rb in round_pairs(inst, u, self.T, bounds):
                q = q_row(inst.f1[u], inst.f2[u], ra, rb)
                if q is not None:
                    rows.append(q)
            self.states[u] = rows
        self._profile_cache = {}
        self._uset = uset
        self._comps_of = {u: [i for i, us in enumerate(self.comp_us) if u in us] for u in self.U}
        self._touch = {(u, i): sum(1 for v in c if v in g.neighbors(u))
                       for u in self.U for i, c in enumerate(comps)}
        # U vertices sharing a neighbourhood constraint with u
        self._near = {}
        for u in self.U:
            near = set(g.neighbors(u)) & uset
            for i in self._comps_of[u]:
                near |= set(self.comp_us[i])
            self._near[u] = near - {u}

    def _order(self):
        g = self.inst.graph
        uset = set(self.U)
        order, seen = [], set()
        for s in self.U:
            if s in seen:
                continue
            seen.add(s)
            queue = [s]
            while queue:
                u = queue.pop(0)
                order.append(u)
                # U vertices at distance <= 2 through a component count as close
                near = set()
                for w in g.neighbors(u):
                    if w in uset:
                        near.add(w)
                    else:
                        for y in g.neighbors(w):
                            if y in uset:
                                near.add(y)
                            for z in g.neighbors(y):
                                if z in uset and y not in uset:
                                    near.add(z)
                for w in sorted(near - seen):
                    seen.add(w)
                    queue.append(w)
        return order

    def _cons_for(self, guess, us, comp):
        """Constraints of U vertices `us` that a component can contribute to."""
        g = self.inst.graph
        out = []
        for u in us:
            if not any(v in g.neighbors(u) for v in comp):
                continue
            for c, kind, rnd, bound in constraints_of(guess[u], self.T):
                out.append((u, c, kind, rnd, bound))
        return out

    def profiles(self, guess, i):
        comp = self.comps[i]
        g = self.inst.graph
        near = sorted({u for v in comp for u in g.neighbors(v) if u in guess})
        key = (i, tuple(guess[u] for u in near))
        hit = self._profile_cache.get(key)
        if hit is None:
            cons = self._cons_for(guess, self.comp_us[i], comp)
            hit = (cons, component_profiles(self.inst, {u: guess[u] for u in near}, comp, cons, self.T))
            self._profile_cache[key] = hit
        return hit

    def solve(self):
        """(min cost, witness) over all admissible guesses; cost INF when infeasible."""
        self.best = INF if self.budget is None else self.budget + 1
        self.best_sol = None
        closes = {}
        pos = {u: k for k, u in enumerate(self.order)}
        for i, us in enumerate(self.comp_us):
            k = max((pos[u] for u in us), default=-1)
            closes.setdefault(k, []).append(i)
        self._closes = closes
        # components touching no U vertex are independent
        base_cost, base_ta, base_tb = 0, [], []
        for i in closes.get(-1, []):
            _, profs = self.profiles({}, i)
            if not profs:
                return INF, None
            cost, _, ta, tb = profs[0]
            base_cost += cost
            base_ta += ta
            base_tb += tb
        self._base = (base_cost, base_ta, base_tb)
        self._assign({}, 0, base_cost)
        if self.best_sol is None:
            return INF, None
        return self.best, self.best_sol

    def _ucost(self, u, s):
        return (s[0] == 0 and u not in self.inst.seed_a) + (s[1] == 0 and u not in self.inst.seed_b)

    def _assign(self, guess, k, lower):
        if lower >= self.best:
            return
        if k == len(self.order):
            self._finish(guess)
            return
        u = self.order[k]
        for s in self.states[u]:
            guess[u] = s
            low = lower + self._ucost(u, s)
            ok = True
            for i in self._closes.get(k, []):
                _, profs = self.profiles(guess, i)
                if not profs:
                    ok = False
                    break
                low += profs[0][0]
            if ok and low < self.best and self._local_ok(guess, u):
                self._assign(guess, k + 1, low)
            del guess[u]

    def _local_ok(self, guess, u):
        """Necessary check for guessed U vertices near u: each constraint must stay
        reachable given what is fixed so far (open parts count as 0..all)."""
        g = self.inst.graph
        uset = self._uset
        near = {u} | {x for x in self._near[u] if x in guess}
        for w in near:
            comps = self._comps_of[w]
            for cn in constraints_of(guess[w], self.T):
                c, kind, rnd, bound = cn
                lo = hi = 0
                for y in g.neighbors(w):
                    if y in uset:
                        if y in guess:
                            if guess[y][c] <= rnd:
                                lo += 1
                                hi += 1
                        else:
                            hi += 1
                for i in comps:
                    if all(y in guess for y in self.comp_us[i]):
                        cons, profs = self.profiles(guess, i)
                        idx = cons.index((w,) + cn)
                        lo += min(p[1][idx] for p in profs)
                        hi += max(p[1][idx] for p in profs)
                    else:
                        hi += self._touch[w, i]
                if kind == ">=" and hi < bound:
                    return False
                if kind == "<=" and lo > bound:
                    return False
        return True

    def _finish(self, guess):
        g = self.inst.graph
        ucost = sum(self._ucost(u, s) for u, s in guess.items())
        # global constraint list and the U-U part of each count
        cons = []
        start = []
        for u in self.U:
            for c, kind, rnd, bound in constraints_of(guess[u], self.T):
                cons.append((u, c, kind, rnd, bound))
                start.append(sum(1 for y in g.neighbors(u) if y in guess and guess[y][c] <= rnd))
        index = {cn: j for j, cn in enumerate(cons)}

        def sat(vec):
            out = []
            for j, x in enumerate(vec):
                kind, bound = cons[j][2], cons[j][4]
                if kind == "<=" and x > bound:
                    return None
                out.append(min(x, bound) if kind == ">=" else x)
            return tuple(out)

        s0 = sat(start)
        if s0 is None:
            return
        base_cost, base_ta, base_tb = self._base
        layer = {s0: (ucost + base_cost, None)}
        history = []
        for i in range(len(self.comps)):
            if not self.comp_us[i]:
                continue
            ccons, profs = self.profiles(guess, i)
            idxs = [index[cn] for cn in ccons]
            new = {}
            for st, (cost, _) in layer.items():
                for p in profs:
                    c2 = cost + p[0]
                    if c2 >= self.best:
                        break
                    vec = list(st)
                    for j, x in zip(idxs, p[1]):
                        vec[j] += x
                    vec = sat(vec)
                    if vec is None:
                        continue
                    if vec not in new or c2 < new[vec][0]:
                        new[vec] = (c2, (st, p))
            layer = new
            history.append((i, layer))
            if not layer:
                return
        for st, (cost, _) in layer.items():
            if cost >= self.best:
                continue
            if all(x >= cons[j][4] for j, x in enumerate(st) if cons[j][2] == ">="):
                self.best = cost
                self.best_sol = self._witness(guess, history, st, base_ta, base_tb)

    def _witness(self, guess, history, st, base_ta, base_tb):
        ta = [u for u, s in guess.items() if s[0] == 0 and u not in self.inst.seed_a] + list(base_ta)
        tb = [u for u, s in guess.items() if s[1] == 0 and u not in self.inst.seed_b] + list(base_tb)
        for i, layer in reversed(history):
            _, back = layer[st]
            st, p = back
            ta += p[2]
            tb += p[3]
        return Solution.of(ta, tb)


def solve_pvc3(inst: Instance, pvc=None, budget=None, bounds=None):
    """Minimum purchase cost (INF if none, or none within `budget` when given).

    `bounds` ({(v, c): latest activation round}) prunes impossible round guesses."""
    if pvc is None:
        pvc = exact_k_path_vertex_cover(inst.graph, 3, inst.n)
    return Pvc3Solver(inst, pvc, budget, bounds).solve()
