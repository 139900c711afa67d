"""The synchronous two-opinion activation process and solution verification.

Opinion sets are kept as int bitmasks internally (bit v is vertex v); the public
functions speak frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from otss.instance import Instance, Solution


class Verdict(str, Enum):
    ACCEPTED = "Accepted"
    BUDGET_EXCEEDED = "BudgetExceeded"
    PROCESS_FAILS = "ProcessFails"


def to_mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def from_mask(m: int) -> frozenset:
    out = []
    v = 0
    while m:
        if m & 1:
            out.append(v)
        m >>= 1
        v += 1
    return frozenset(out)


class Engine:
    """Precomputed neighbourhood masks for repeated simulation of one instance."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.n = inst.n
        self.nbr = inst.graph.masks()
        self.f1 = inst.f1
        self.f2 = inst.f2
        self.sa = to_mask(inst.seed_a)
        self.sb = to_mask(inst.seed_b)

    def step(self, pa: int, pb: int):
        na, nb = pa, pb
        nbr, f1, f2 = self.nbr, self.f1, self.f2
        for v in range(1, self.n + 1):
            bit = 1 << v
            ina = pa & bit
            inb = pb & bit
            if ina and inb:
                continue
            ca = (nbr[v] & pa).bit_count()
            cb = (nbr[v] & pb).bit_count()
            if not ina and not inb:
                if ca >= f1[v]:
                    na |= bit
                if cb >= f1[v]:
                    nb |= bit
            elif ina:
                if cb >= f2[v]:
                    nb |= bit
            elif ca >= f2[v]:
                na |= bit
        return na, nb

    def run(self, ta: int = 0, tb: int = 0):
        """Iterate to the fixpoint. Returns (stabilization_round, final_a, final_b)."""
        pa, pb = self.sa | ta, self.sb | tb
        t = 0
        while True:
            na, nb = self.step(pa, pb)
            if na == pa and nb == pb:
                return t, pa, pb
            pa, pb = na, nb
            t += 1

    def rounds(self, ta: int = 0, tb: int = 0) -> list:
        pa, pb = self.sa | ta, self.sb | tb
        out = [(pa, pb)]
        while True:
            na, nb = self.step(pa, pb)
            if na == pa and nb == pb:
                return out
            pa, pb = na, nb
            out.append((pa, pb))

    def succeeds(self, ta: int = 0, tb: int = 0, deadline: int | None = None) -> bool:
        t, pa, pb = self.run(ta, tb)
        if deadline is None:
            deadline = self.inst.deadline
        return t <= deadline and pa == pb


@dataclass(frozen=True)
class ActivationTrace:
    rounds: tuple  # (P_a^i, P_b^i) for i = 0..stabilization_round
    stabilization_round: int

    def at(self, i: int):
        """Opinion sets after round i (constant after stabilization)."""
        return self.rounds[min(i, len(self.rounds) - 1)]


def step(inst: Instance, current):
    pa, pb = current
    na, nb = Engine(inst).step(to_mask(pa), to_mask(pb))
    return from_mask(na), from_mask(nb)


def simulate(inst: Instance, sol: Solution | None = None) -> ActivationTrace:
    sol = sol or Solution()
    rs = Engine(inst).rounds(to_mask(sol.target_a), to_mask(sol.target_b))
    return ActivationTrace(
        tuple((from_mask(a), from_mask(b)) for a, b in rs), len(rs) - 1
    )


def is_successful(inst: Instance, trace: ActivationTrace) -> bool:
    if trace.stabilization_round > inst.deadline:
        return False
    pa, pb = trace.rounds[-1]
    return pa == pb


def verify_solution(inst: Instance, sol: Solution) -> Verdict:
    if sol.cost > inst.budget:
        return Verdict.BUDGET_EXCEEDED
    eng = Engine(inst)
    if eng.succeeds(to_mask(sol.target_a), to_mask(sol.target_b)):
        return Verdict.ACCEPTED
    return Verdict.PROCESS_FAILS
