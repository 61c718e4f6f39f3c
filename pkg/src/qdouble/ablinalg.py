"""Exact linear algebra over finite abelian groups.

Groups are products of cyclic groups ``Z/m_1 x ... x Z/m_t``; elements are
integer tuples reduced coordinate-wise.  Linear systems with integer
coefficients over such a group decouple coordinate by coordinate, and each
coordinate system over ``Z/m`` is solved through a Smith normal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Matrix = list[list[int]]


# Smith normal form
# -----------------

def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...``.  Arithmetic is on Python ints throughout.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    D = [[int(x) for x in row] for row in M]
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (D, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        for R in (D, U):
            rs, rd = R[src], R[dst]
            for c in range(len(rd)):
                rd[c] += k * rs[c]

    def add_col(src, dst, k):
        for R in (D, V):
            for row in R:
                row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the trailing block
        nz = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = D[t][t]
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
            col = [(abs(D[i][t]), i) for i in range(t + 1, rows) if D[i][t]]
            if col:
                swap_rows(t, min(col)[1])
                continue
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
            row = [(abs(D[t][j]), j) for j in range(t + 1, cols) if D[t][j]]
            if row:
                swap_cols(t, min(row)[1])
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            for R in (D, U):
                R[t] = [-x for x in R[t]]
        t += 1
    return U, D, V


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    U, D, V = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


# Finite abelian groups
# ---------------------

@dataclass(frozen=True)
class FinAbGroup:
    """``Z/m_1 x ... x Z/m_t``.  Factors of 1 are allowed but carry nothing."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(int(m) < 1 for m in self.moduli):
            raise ValueError(f"moduli must be positive: {self.moduli}")
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))

    @classmethod
    def cyclic(cls, *moduli: int) -> FinAbGroup:
        return cls(tuple(moduli))

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.moduli) if self.moduli else 1

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(a) % m for a, m in zip(x, self.moduli))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def sub(self, x, y) -> tuple[int, ...]:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x) -> tuple[int, ...]:
        return tuple(-a % m for a, m in zip(x, self.moduli))

    def scale(self, k: int, x) -> tuple[int, ...]:
        return tuple(k * a % m for a, m in zip(x, self.moduli))

    def sum(self, xs) -> tuple[int, ...]:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(m) for m in self.moduli))

    def element_order(self, x) -> int:
        return math.lcm(*(m // math.gcd(a, m) for a, m in zip(x, self.moduli))) if x else 1

    def generators(self) -> list[tuple[int, ...]]:
        gens = []
        for i, m in enumerate(self.moduli):
            if m > 1:
                e = [0] * self.rank
                e[i] = 1
                gens.append(tuple(e))
        return gens

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors ``d_1 | d_2 | ...`` with trivial ones dropped."""
        n = self.rank
        diag = smith_diagonal([[self.moduli[i] if i == j else 0 for j in range(n)] for i in range(n)])
        return tuple(d for d in diag if d != 1)

    def invariant_form(self) -> FinAbGroup:
        return FinAbGroup(self.invariant_factors)

    def __str__(self):
        if not self.moduli:
            return "cyclic:1"
        return "cyclic:" + "x".join(map(str, self.moduli))


def parse_abelian(spec: str) -> FinAbGroup:
    """Parse ``cyclic:<m>[x<m>...]``."""
    spec = spec.strip()
    if not spec.startswith("cyclic:"):
        raise ValueError(f"not an abelian group spec: {spec!r}")
    body = spec[len("cyclic:"):]
    try:
        moduli = tuple(int(t) for t in body.split("x"))
    except ValueError:
        raise ValueError(f"bad cyclic moduli in {spec!r}") from None
    if not moduli or any(m < 1 for m in moduli):
        raise ValueError(f"bad cyclic moduli in {spec!r}")
    return FinAbGroup(moduli)


def torsion_subgroup(B: FinAbGroup, k: int) -> tuple[FinAbGroup, list[list[int]]]:
    """``B[k] = {v : k v = 0}`` and its inclusion into ``B``.

    The inclusion is returned as a matrix whose column ``s`` is the image of
    the ``s``-th generator of the subgroup.  Coordinate ``i`` of ``B``
    contributes ``Z/gcd(k, m_i)`` embedded via multiplication by
    ``m_i / gcd(k, m_i)``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    gs = [math.gcd(k, m) for m in B.moduli]
    keep = [i for i, g in enumerate(gs) if g > 1]
    sub = FinAbGroup(tuple(gs[i] for i in keep))
    incl = [[B.moduli[i] // gs[i] if i == keep[s] else 0 for s in range(len(keep))] for i in range(B.rank)]
    return sub, incl


def include(B: FinAbGroup, incl: list[list[int]], w: Sequence[int]) -> tuple[int, ...]:
    return B.reduce([sum(c * x for c, x in zip(row, w)) for row in incl])


# Linear systems
# --------------

@dataclass
class AbLinearSystem:
    """``sum_j coeffs[i][j] * x_j = rhs[i]`` in ``group``.

    Each unknown ``x_j`` ranges over ``group``, or over the torsion subgroup
    ``group[torsion[j]]`` when ``torsion[j]`` is set.
    """

    group: FinAbGroup
    coeffs: list[list[int]]
    rhs: list[tuple[int, ...]]
    torsion: list[int | None] = field(default_factory=list)
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        nvars = len(self.coeffs[0]) if self.coeffs else len(self.torsion)
        if any(len(row) != nvars for row in self.coeffs):
            raise ValueError("ragged coefficient matrix")
        if len(self.rhs) != len(self.coeffs):
            raise ValueError("rhs length does not match equation count")
        if not self.torsion:
            self.torsion = [None] * nvars
        if len(self.torsion) != nvars:
            raise ValueError("torsion list does not match variable count")
        self.rhs = [self.group.reduce(b) for b in self.rhs]
        if any(len(b) != self.group.rank for b in self.rhs):
            raise ValueError("rhs entry outside the target group")

    @property
    def nvars(self) -> int:
        return len(self.torsion)

    def residual(self, x: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
        B = self.group
        out = []
        for row, b in zip(self.coeffs, self.rhs):
            lhs = B.sum(B.scale(c, xj) for c, xj in zip(row, x))
            out.append(B.sub(lhs, b))
        return out

    def is_solution(self, x) -> bool:
        B = self.group
        if any(t is not None and B.scale(t, xj) != B.zero for t, xj in zip(self.torsion, x)):
            return False
        return all(r == B.zero for r in self.residual(x))


@dataclass
class Solution:
    solvable: bool
    count: int
    witness: list[tuple[int, ...]] | None


def solve_mod(A: Sequence[Sequence[int]], b: Sequence[int], m: int,
              ncols: int | None = None) -> tuple[bool, int, list[int] | None]:
    """Solve ``A x = b (mod m)`` for ``x`` in ``(Z/m)^n``.

    With ``U A V = D`` the substitution ``x = V y`` turns the system into
    ``d_i y_i = (U b)_i``, whose solutions are counted factor by factor.
    """
    nrows = len(A)
    if ncols is None:
        ncols = len(A[0]) if nrows else 0
    if ncols == 0:
        ok = all(x % m == 0 for x in b)
        return ok, int(ok), ([] if ok else None)
    if nrows == 0:
        return True, m ** ncols, [0] * ncols
    U, D, V = smith_normal_form(A)
    c = [sum(u * x for u, x in zip(row, b)) for row in U]
    y = [0] * ncols
    count = 1
    for i in range(max(nrows, ncols)):
        d = D[i][i] if i < min(nrows, ncols) else 0
        g = math.gcd(d, m)
        if i < nrows:
            ci = c[i]
            if ci % g:
                return False, 0, None
            if i < ncols:
                mg = m // g
                y[i] = (ci // g) * pow(d // g, -1, mg) % mg if mg > 1 else 0
        if i < ncols:
            count *= g
    x = [sum(v * yy for v, yy in zip(row, y)) % m for row in V]
    return True, count, x


def solve_ab_system(S: AbLinearSystem) -> Solution:
    """Exact solvability, solution count and one witness."""
    B = S.group
    n = S.nvars
    witness_coords = []
    total = 1
    for t, m in enumerate(B.moduli):
        rows = [list(r) for r in S.coeffs]
        rhs = [b[t] for b in S.rhs]
        for j, k in enumerate(S.torsion):
            if k is not None:
                rows.append([k if jj == j else 0 for jj in range(n)])
                rhs.append(0)
        ok, cnt, x = solve_mod(rows, rhs, m, n)
        if not ok:
            return Solution(False, 0, None)
        total *= cnt
        witness_coords.append(x)
    witness = [tuple(witness_coords[t][j] for t in range(B.rank)) for j in range(n)]
    return Solution(True, total, witness)


def brute_force_count(S: AbLinearSystem) -> int:
    """Exhaustive solution count (test oracle)."""
    B = S.group
    elems = list(B.elements())
    return sum(1 for x in itertools.product(elems, repeat=S.nvars) if S.is_solution(x))
