"""Irreducible modules of the Drinfeld double D(G) and their higher
Frobenius-Schur indicators.

An irreducible D(G)-module ``V`` is labelled by a conjugacy class ``C``
with base point ``y`` and an irreducible character ``chi_W`` of the
centralizer ``Z_y``.  Its ``n``-th indicator is evaluated through the class
function formula

    nu_n(V) = |C|/|G| * sum_{g : g^n = (y^-1 g)^n} chi_W(g^n),

and the companion counting function is

    f_y(z) = #{(g, h) : g^n = h^n = z, g h^-1 = y}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chartab import CharacterTable, character_table, classical_indicator
from .cyclotomic import Cyclotomic
from .groups import Centralizer, FiniteGroup, centralizer


@dataclass(frozen=True)
class DoubleIrrep:
    cls: int
    y: int
    w: int
    dim: int


@lru_cache(maxsize=None)
def centralizer_data(G: FiniteGroup, y: int) -> tuple[Centralizer, CharacterTable]:
    Z = centralizer(G, y)
    return Z, character_table(Z.group)


def double_irreps(G: FiniteGroup) -> list[DoubleIrrep]:
    out = []
    for k, cl in enumerate(G.classes):
        Z, T = centralizer_data(G, cl.representative)
        for w, d in enumerate(T.degrees):
            out.append(DoubleIrrep(k, cl.representative, w, cl.size * d))
    return out


def _surviving_powers(G: FiniteGroup, y: int, n: int) -> np.ndarray:
    """``g^n`` for every ``g`` with ``g^n = (y^-1 g)^n``."""
    pw = G.power_array(n)
    h = G.mul_arrays(G.inverse[y], G.all)
    return pw[pw == pw[h]]


def indicator(G: FiniteGroup, V: DoubleIrrep, n: int, conjugator: int = 0) -> Cyclotomic:
    """``nu_n(V)``, optionally evaluated at the base point ``x y x^-1``.

    With ``conjugator = x`` the sum runs over the conjugated base point and
    ``chi_W`` is transported along ``z -> x^-1 z x``; the result must not
    depend on ``x``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    Z, T = centralizer_data(G, V.y)
    y = V.y
    if conjugator:
        y = G.mul(G.mul(conjugator, y), G.inv(conjugator))
    zs = _surviving_powers(G, y, n)
    if conjugator:
        zs = G.conj(G.inv(conjugator), zs)
    cls = T.group.class_of[Z.to_sub(zs)]
    counts = np.bincount(cls, minlength=T.group.num_classes)
    row = T.values[V.w]
    total = sum((int(c) * row[k] for k, c in enumerate(counts) if c), Cyclotomic.rational(T.e, 0))
    size = G.classes[V.cls].size
    return (total * size) / G.order


@dataclass
class CountFunction:
    """``f_y`` on the centralizer ``Z_y``."""

    y: int
    n: int
    pointwise: np.ndarray  # indexed by element of Z_y (subgroup index)
    by_class: list[int]  # value at each class representative of Z_y

    def is_class_function(self, Zgroup: FiniteGroup) -> bool:
        return all((self.pointwise[cl.members] == self.pointwise[cl.representative]).all()
                   for cl in Zgroup.classes)


def count_f(G: FiniteGroup, y: int, n: int) -> CountFunction:
    Z, T = centralizer_data(G, y)
    zs = _surviving_powers(G, y, n)
    pointwise = np.bincount(Z.to_sub(zs), minlength=Z.group.order)
    by_class = [int(pointwise[cl.representative]) for cl in Z.group.classes]
    return CountFunction(y, n, pointwise, by_class)


def galois_check(G: FiniteGroup, y: int, n: int) -> bool:
    """``f_y(z) = f_y(z^s)`` for all ``z`` in ``Z_y`` and all ``s`` coprime to ``|G|``."""
    return not galois_violations(G, y, n)


def galois_violations(G: FiniteGroup, y: int, n: int) -> list[int]:
    Z, _ = centralizer_data(G, y)
    f = count_f(G, y, n).pointwise
    H = Z.group
    bad = []
    for s in range(1, H.exponent + 1):
        if math.gcd(s, G.order) == 1 and not (f == f[H.power_array(s)]).all():
            bad.append(s)
    return bad


def indicators_via_f(G: FiniteGroup, y: int, n: int) -> list[Cyclotomic]:
    """Recover ``nu_n(V(W))`` as the coefficient of ``chi_{W*}`` in ``f_y``.

    ``f_y = sum_W nu_n(V(W)) conj(chi_W)``, so the coefficient is
    ``(1/|Z_y|) sum_z f_y(z) chi_W(z)``.
    """
    Z, T = centralizer_data(G, y)
    f = count_f(G, y, n)
    H = Z.group
    out = []
    for w in range(T.num_irreps):
        acc = Cyclotomic.rational(T.e, 0)
        for k, cl in enumerate(H.classes):
            if f.by_class[k]:
                acc = acc + (cl.size * f.by_class[k]) * T.values[w][k]
        out.append(acc / H.order)
    return out


def identity_check(G: FiniteGroup, y: int, n: int) -> bool:
    """``sum_W nu_n(V(W)) conj(chi_W(z)) = f_y(z)`` on every class of ``Z_y``."""
    Z, T = centralizer_data(G, y)
    k = int(G.class_of[y])
    nus = [indicator(G, DoubleIrrep(k, y, w, 0), n) for w in range(T.num_irreps)]
    f = count_f(G, y, n)
    for c in range(Z.group.num_classes):
        lhs = sum((nus[w] * T.values[w][c].conjugate() for w in range(T.num_irreps)),
                  Cyclotomic.rational(T.e, 0))
        if lhs != f.by_class[c]:
            return False
    return True


@dataclass
class IndicatorTable:
    group: FiniteGroup
    n_range: list[int]
    irreps: list[DoubleIrrep]
    values: list[list[Cyclotomic]]
    flags: list[list[bool]] = field(init=False)

    def __post_init__(self):
        self.flags = [[v.is_rational_integer() for v in row] for row in self.values]

    @property
    def violations(self) -> list[tuple[int, int]]:
        return [(i, n) for i, row in enumerate(self.flags) for n, ok in zip(self.n_range, row) if not ok]

    @property
    def all_integral(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "all-integral" if self.all_integral else "non-integral"

    def to_dict(self) -> dict:
        return {
            "group_spec": self.group.spec,
            "n_range": self.n_range,
            "irreps": [{"class": V.cls, "irrep": V.w, "dim": V.dim} for V in self.irreps],
            "indicators": [[[v.to_json(), ok] for v, ok in zip(row, frow)]
                           for row, frow in zip(self.values, self.flags)],
            "verdict": self.verdict,
            "violations": [{"irrep": i, "n": n} for i, n in self.violations],
        }


def integrality_report(G: FiniteGroup, n_max: int, n_min: int = 1) -> IndicatorTable:
    if n_max < n_min:
        raise ValueError("empty n-range")
    irreps = double_irreps(G)
    ns = list(range(n_min, n_max + 1))
    values = [[indicator(G, V, n) for n in ns] for V in irreps]
    return IndicatorTable(G, ns, irreps, values)


def classical_indicators(G: FiniteGroup, n: int) -> list[Cyclotomic]:
    """Classical indicators of the irreps of ``G`` (the ``C = {1}`` row block)."""
    _, T = centralizer_data(G, 0)
    return [classical_indicator(T, w, n) for w in range(T.num_irreps)]
