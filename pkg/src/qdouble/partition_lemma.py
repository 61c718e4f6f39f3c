"""Two set partitions over a finite abelian group.

For partitions ``P``, ``Q`` of ``{0..r-1}`` and targets ``p_i``, ``q_j`` in
``B`` the system

    sum_{k in P_i} b_k = p_i,    sum_{k in Q_j} b_k = q_j

is solvable iff for every connected component ``S`` of the bipartite
block-intersection graph the sums of the targets of the blocks inside ``S``
agree.  This module also builds the linear systems describing pairs
``g = tau.(a_i)``, ``h = theta.(b_i)`` in ``S_r x| B^r`` with
``g h^-1`` having tail ``k`` and ``g^n = h^n = z^s``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .ablinalg import AbLinearSystem, FinAbGroup, Solution, solve_ab_system
from .groups import perm_cycles


@dataclass(frozen=True)
class SetPartition:
    r: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = sorted(i for b in self.blocks for i in b)
        if flat != list(range(self.r)) or any(not b for b in self.blocks):
            raise ValueError(f"not a set partition of range({self.r}): {self.blocks}")

    @classmethod
    def of(cls, r: int, blocks) -> SetPartition:
        return cls(r, tuple(tuple(sorted(b)) for b in blocks))

    @classmethod
    def from_perm(cls, perm: Sequence[int]) -> SetPartition:
        return cls.of(len(perm), perm_cycles(perm))

    def block_of(self) -> list[int]:
        out = [0] * self.r
        for i, b in enumerate(self.blocks):
            for k in b:
                out[k] = i
        return out


@dataclass
class PartitionSystem:
    B: FinAbGroup
    P: SetPartition
    Q: SetPartition
    p: list[tuple[int, ...]]
    q: list[tuple[int, ...]]

    def __post_init__(self):
        if self.P.r != self.Q.r:
            raise ValueError("partitions live on different ground sets")
        if len(self.p) != len(self.P.blocks) or len(self.q) != len(self.Q.blocks):
            raise ValueError("target counts do not match block counts")
        self.p = [self.B.reduce(x) for x in self.p]
        self.q = [self.B.reduce(x) for x in self.q]

    def as_linear_system(self) -> AbLinearSystem:
        r = self.P.r
        rows = [[int(k in blk) for k in range(r)] for blk in self.P.blocks + self.Q.blocks]
        return AbLinearSystem(self.B, rows, self.p + self.q)


def compatible_subsets(P: SetPartition, Q: SetPartition) -> list[tuple[int, ...]]:
    """Minimal nonempty subsets that are unions of ``P``-blocks and of ``Q``-blocks."""
    parent = list(range(P.r))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blk in P.blocks + Q.blocks:
        for k in blk[1:]:
            a, b = find(blk[0]), find(k)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps: dict[int, list[int]] = {}
    for k in range(P.r):
        comps.setdefault(find(k), []).append(k)
    return sorted(tuple(c) for c in comps.values())


def balance_defects(S: PartitionSystem) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Components whose P-side and Q-side target sums differ, with the difference."""
    B = S.B
    out = []
    for comp in compatible_subsets(S.P, S.Q):
        cs = set(comp)
        lhs = B.sum(p for blk, p in zip(S.P.blocks, S.p) if set(blk) <= cs)
        rhs = B.sum(q for blk, q in zip(S.Q.blocks, S.q) if set(blk) <= cs)
        if lhs != rhs:
            out.append((comp, B.sub(lhs, rhs)))
    return out


def lemma_solvable(S: PartitionSystem) -> bool:
    return not balance_defects(S)


def brute_force_solutions(S: PartitionSystem) -> int:
    """Count ``b`` in ``B^r`` solving the system by enumeration (test oracle)."""
    B = S.B
    elems = list(B.elements())
    r = S.P.r
    count = 0
    for b in itertools.product(elems, repeat=r):
        if all(B.sum(b[k] for k in blk) == p for blk, p in zip(S.P.blocks, S.p)) and \
           all(B.sum(b[k] for k in blk) == q for blk, q in zip(S.Q.blocks, S.q)):
            count += 1
    return count


def random_partition(r: int, rng: random.Random) -> SetPartition:
    labels = [rng.randrange(r) for _ in range(r)]
    blocks: dict[int, list[int]] = {}
    for k, l in enumerate(labels):
        blocks.setdefault(l, []).append(k)
    return SetPartition.of(r, blocks.values())


def random_system(r: int, B: FinAbGroup, rng: random.Random) -> PartitionSystem:
    P, Q = random_partition(r, rng), random_partition(r, rng)
    elems = list(B.elements())
    p = [rng.choice(elems) for _ in P.blocks]
    q = [rng.choice(elems) for _ in Q.blocks]
    # bias half the cases towards solvable systems by planting a solution
    if rng.random() < 0.5:
        b = [rng.choice(elems) for _ in range(r)]
        p = [B.sum(b[k] for k in blk) for blk in P.blocks]
        q = [B.sum(b[k] for k in blk) for blk in Q.blocks]
    return PartitionSystem(B, P, Q, p, q)


# wreath power systems
# --------------------

@dataclass
class WreathPowerSystem:
    """Data of one instance of the power equations in ``S_r x| B^r``.

    ``g = tau.(a)``, ``h = theta.(b)``, ``a_j - b_j = k_j`` and
    ``g^n = h^n = z^s`` where ``z`` is ``c`` on every coordinate.
    """

    B: FinAbGroup
    c: tuple[int, ...]
    tau: tuple[int, ...]
    theta: tuple[int, ...]
    k: list[tuple[int, ...]]
    n: int
    s: int = 1
    tau_cycles: list[tuple[int, ...]] = field(init=False)
    theta_cycles: list[tuple[int, ...]] = field(init=False)

    def __post_init__(self):
        if len(self.tau) != len(self.theta) or len(self.k) != len(self.tau):
            raise ValueError("tau, theta and k must share the ground size r")
        self.c = self.B.reduce(self.c)
        self.k = [self.B.reduce(x) for x in self.k]
        self.tau_cycles = perm_cycles(self.tau)
        self.theta_cycles = perm_cycles(self.theta)
        if any(self.n % len(K) for K in self.tau_cycles + self.theta_cycles):
            raise ValueError("every cycle length of tau and theta must divide n")

    @property
    def r(self) -> int:
        return len(self.tau)

    @property
    def ell(self) -> int:
        """lcm of ``n / d(K)`` over the cycles of both permutations."""
        return math.lcm(*(self.n // len(K) for K in self.tau_cycles + self.theta_cycles))

    def cbar_choices(self) -> list[tuple[int, ...]]:
        """All ``cbar`` with ``ell * cbar = c``; empty when ``c`` is not divisible."""
        B, l = self.B, self.ell
        return [x for x in B.elements() if B.scale(l, x) == self.c]

    def with_s(self, s: int) -> WreathPowerSystem:
        return WreathPowerSystem(self.B, self.c, self.tau, self.theta, self.k, self.n, s)


class Unsolvable:
    """Marker: ``c`` is not an ``ell``-multiple, so no ``cbar`` and no solutions."""

    def __repr__(self):
        return "UNSOLVABLE"


UNSOLVABLE = Unsolvable()


def build_wreath_system(W: WreathPowerSystem, cbar: Sequence[int] | None = None) -> AbLinearSystem | Unsolvable:
    """Linear system in ``b_1..b_r`` and the cycle corrections ``v(K)``.

    One equation per cycle ``K`` of ``tau`` (sum of ``b`` over ``K`` minus
    ``v(K)`` equals the sum of ``k`` over ``K`` plus ``s * ell*d(K)/n * cbar``)
    and per cycle of ``theta`` (same without the ``k`` term).  Each ``v(K)``
    is confined to ``B[n/d(K)]``.
    """
    B, n, s = W.B, W.n, W.s
    if cbar is None:
        choices = W.cbar_choices()
        if not choices:
            return UNSOLVABLE
        cbar = choices[0]
    cbar = B.reduce(cbar)
    if B.scale(W.ell, cbar) != W.c:
        raise ValueError("cbar does not satisfy ell * cbar = c")
    r = W.r
    cycles = W.tau_cycles + W.theta_cycles
    nv = r + len(cycles)
    rows, rhs, torsion, names = [], [], [None] * r, [f"b{j}" for j in range(r)]
    for idx, K in enumerate(cycles):
        d = len(K)
        row = [0] * nv
        for i in K:
            row[i] = 1
        row[r + idx] = -1
        shift = B.scale(s * (W.ell * d // n), cbar)
        if idx < len(W.tau_cycles):
            target = B.add(B.sum(W.k[i] for i in K), shift)
            names.append(f"v_tau{K}")
        else:
            target = shift
            names.append(f"v_theta{K}")
        rows.append(row)
        rhs.append(target)
        torsion.append(n // d)
    return AbLinearSystem(B, rows, rhs, torsion, names)


def brute_force_pairs(W: WreathPowerSystem) -> int:
    """Count ``(a, b)`` in ``B^r x B^r`` with ``a - b = k`` and the cycle-power equations.

    Uses the pre-elimination form: ``(n/d(K)) * sum_K a = s c`` on ``tau``
    cycles and the same for ``b`` on ``theta`` cycles.
    """
    B = W.B
    sc = B.scale(W.s, W.c)
    count = 0
    for b in itertools.product(list(B.elements()), repeat=W.r):
        a = [B.add(bj, kj) for bj, kj in zip(b, W.k)]
        if all(B.scale(W.n // len(K), B.sum(a[i] for i in K)) == sc for K in W.tau_cycles) and \
           all(B.scale(W.n // len(K), B.sum(b[i] for i in K)) == sc for K in W.theta_cycles):
            count += 1
    return count


def unit_residues(modulus: int) -> list[int]:
    return [s for s in range(1, modulus + 1) if math.gcd(s, modulus) == 1] if modulus > 1 else [1]


@dataclass
class SIndependenceResult:
    constant: bool
    per_cbar: dict[tuple[int, ...], list[tuple[int, bool, int]]]  # cbar -> [(s, solvable, count)]
    no_cbar: bool = False


def s_independence_check(W: WreathPowerSystem, s_range: Sequence[int] | None = None) -> SIndependenceResult:
    """Solvability and solution count of the system for every ``s`` and every ``cbar``.

    ``s`` defaults to the units modulo ``lcm(|B|, n)``.
    """
    if s_range is None:
        s_range = unit_residues(math.lcm(W.B.order, W.n))
    choices = W.cbar_choices()
    if not choices:
        # s is a unit mod |B|, so s*c is an ell-multiple exactly when c is: every s
        # is unsolvable.  Small cases confirm this against the pre-elimination count.
        if W.B.order ** W.r > 10 ** 4:
            return SIndependenceResult(True, {}, True)
        counts = {brute_force_pairs(W.with_s(s)) for s in s_range}
        return SIndependenceResult(counts == {0}, {}, True)
    per = {}
    constant = True
    for cbar in choices:
        rows = []
        for s in s_range:
            sol: Solution = solve_ab_system(build_wreath_system(W.with_s(s), cbar))
            rows.append((s, sol.solvable, sol.count))
        per[cbar] = rows
        if len({(ok, cnt) for _, ok, cnt in rows}) != 1:
            constant = False
    return SIndependenceResult(constant, per)


def random_template(rng: random.Random, r_max: int, B: FinAbGroup, n_max: int) -> WreathPowerSystem:
    """A random instance whose permutations satisfy ``tau^n = theta^n = 1``."""
    r = rng.randint(1, r_max)
    n = rng.randint(1, n_max)
    elems = list(B.elements())

    def perm_with_cycles_dividing(n):
        while True:
            p = list(range(r))
            rng.shuffle(p)
            if all(n % len(K) == 0 for K in perm_cycles(p)):
                return tuple(p)

    tau, theta = perm_with_cycles_dividing(n), perm_with_cycles_dividing(n)
    k = [rng.choice(elems) for _ in range(r)]
    c = rng.choice(elems)
    return WreathPowerSystem(B, c, tau, theta, k, n)
