"""Substitution groups ``x -> x + a_2 x^2 + ... + a_{p+1} x^{p+1}`` over F_p.

Composition is truncated modulo ``x^{p+2}``; the group has order ``p^p``.
Its Lie algebra is spanned by ``L_i = x^{i+1} d/dx`` (``1 <= i <= p``)
with ``[L_i, L_j] = (j - i) L_{i+j}`` and ``L_k = 0`` for ``k > p``.

Elements are indexed by the base-``p`` integer with digits
``a_2, ..., a_{p+1}`` (least significant first), so the identity is 0 and
no hash table is needed even for ``p = 7`` (823543 elements).  Products are
computed in vectorized batches.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import sympy
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import (DEFAULT_ORDER_CAP, TABLE_CAP, FiniteGroup, ResourceError, centralizer,
                     table_from_right_actions)

CHUNK = 1 << 16
DEFAULT_P_CAP = 7


# truncated polynomial arithmetic, batched over rows
# --------------------------------------------------

def trunc_mul(P: np.ndarray, Q: np.ndarray, p: int) -> np.ndarray:
    D = P.shape[-1]
    out = np.zeros(np.broadcast_shapes(P.shape, Q.shape), dtype=np.int64)
    for i in range(D):
        out[..., i:] += P[..., i:i + 1] * Q[..., :D - i]
    return out % p


def compose(F: np.ndarray, G: np.ndarray, p: int) -> np.ndarray:
    """``F o G`` for batches of full coefficient rows (no constant terms)."""
    D = F.shape[-1]
    out = np.zeros(np.broadcast_shapes(F.shape, G.shape), dtype=np.int64)
    P = G
    for k in range(1, D):
        if k > 1:
            P = trunc_mul(P, G, p)
        out += F[..., k:k + 1] * P
    return out % p


def derivative(F: np.ndarray, p: int) -> np.ndarray:
    D = F.shape[-1]
    out = np.zeros_like(F)
    out[..., :-1] = F[..., 1:] * np.arange(1, D)
    return out % p


def invert(F: np.ndarray, p: int) -> np.ndarray:
    """Compositional inverse: fixed-point iteration ``g <- g - (F o g - x)``."""
    D = F.shape[-1]
    x = np.zeros(D, dtype=np.int64)
    x[1] = 1
    g = np.broadcast_to(x, F.shape).copy()
    for _ in range(D):
        g = (g - (compose(F, g, p) - x)) % p
    return g


class TruncSeriesBackend:
    def __init__(self, p: int):
        self.p = p
        self.D = p + 2
        self.order = p ** p
        self.weights = p ** np.arange(p, dtype=np.int64)

    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        F = np.zeros(idx.shape + (self.D,), dtype=np.int64)
        F[..., 1] = 1
        F[..., 2:] = (idx[..., None] // self.weights) % self.p
        return F

    def encode(self, F: np.ndarray) -> np.ndarray:
        return (F[..., 2:] % self.p) @ self.weights

    def mul_arrays(self, X, Y) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        Y = np.asarray(Y, dtype=np.int64)
        out = np.empty(len(X), dtype=np.int64)
        for s in range(0, len(X), CHUNK):
            out[s:s + CHUNK] = self.encode(compose(self.decode(X[s:s + CHUNK]), self.decode(Y[s:s + CHUNK]), self.p))
        return out

    def inverse_all(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int64)
        for s in range(0, self.order, CHUNK):
            idx = np.arange(s, min(s + CHUNK, self.order))
            out[s:s + CHUNK] = self.encode(invert(self.decode(idx), self.p))
        return out

    def key(self, i: int) -> tuple[int, ...]:
        return tuple(int(a) for a in self.decode(i)[2:])

    def index(self, key: Sequence[int]) -> int:
        return int(np.dot(np.asarray(key, dtype=np.int64) % self.p, self.weights))


def trunc_group(p: int, cap: int = DEFAULT_ORDER_CAP, p_cap: int = DEFAULT_P_CAP) -> FiniteGroup:
    """The substitution group over ``F_p`` as an indexed ``FiniteGroup``.

    A dense Cayley table is built when ``p^p <= TABLE_CAP`` (p <= 5).
    """
    if not sympy.isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p > p_cap or p ** p > cap:
        raise ResourceError(f"truncseries:{p} has order {p ** p}, over the configured cap")
    be = TruncSeriesBackend(p)
    n = be.order
    gens = [int(p ** j) for j in range(p)]  # x + x^k, k = 2..p+1
    table = None
    if n <= TABLE_CAP:
        ar = np.arange(n, dtype=np.int64)
        right = [be.mul_arrays(ar, np.full(n, s)) for s in gens]
        table = table_from_right_actions(right)
    return FiniteGroup("truncseries", f"truncseries:{p}", n, gens, table=table, backend=be, params={"p": p})


def series_poly(key: Sequence[int]) -> np.ndarray:
    """Full coefficient row of ``x + sum a_k x^k`` from ``(a_2, ..., a_{p+1})``."""
    return np.array([0, 1] + list(key), dtype=np.int64)


# Lie algebra
# -----------

@dataclass(frozen=True)
class VectorField:
    """``sum_i c_i L_i``; ``coeffs[i-1]`` is ``c_i``."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p:
            raise ValueError("need p coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))

    @classmethod
    def basis(cls, p: int, i: int, a: int = 1) -> VectorField:
        c = [0] * p
        if 1 <= i <= p:
            c[i - 1] = a
        return cls(p, tuple(c))

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, a: int) -> VectorField:
        return VectorField(self.p, tuple(a * c for c in self.coeffs))

    def poly(self) -> np.ndarray:
        """Coefficient row of ``f`` with ``v = f(x) d/dx``."""
        out = np.zeros(self.p + 2, dtype=np.int64)
        out[2:] = self.coeffs
        return out

    @classmethod
    def from_poly(cls, p: int, f: np.ndarray) -> VectorField:
        f = np.asarray(f) % p
        if f[0] or f[1]:
            raise ValueError("not in the span of L_1..L_p")
        return cls(p, tuple(int(c) for c in f[2:]))

    def lowest(self) -> int | None:
        return next((i + 1 for i, c in enumerate(self.coeffs) if c), None)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    p = v.p
    out = [0] * p
    for i, a in enumerate(v.coeffs, start=1):
        if a:
            for j, b in enumerate(w.coeffs, start=1):
                if b and i + j <= p:
                    out[i + j - 1] += (j - i) * a * b
    return VectorField(p, tuple(out))


class UnsupportedExponent(ValueError):
    """The flow would need division by ``p!``."""


def exp_vf(v: VectorField) -> tuple[int, ...]:
    """Time-1 flow ``sum_k v^k(x) / k!``, truncated mod ``x^{p+2}``.

    Only fields whose lowest nonzero ``L_i`` has ``i >= 2`` (or zero) are
    accepted: then ``v^k(x)`` vanishes before ``k`` reaches ``p``.
    """
    p = v.p
    i = v.lowest()
    # nonzero terms need k <= p // i, and k! is invertible mod p iff k < p
    if i is not None and p // i >= p:
        raise UnsupportedExponent(f"exp of a field with an L_{i} term needs 1/{p}!")
    f = v.poly()
    term = np.zeros(p + 2, dtype=np.int64)
    term[1] = 1
    total = term.copy()
    k = 0
    while term.any():
        k += 1
        term = trunc_mul(f, derivative(term, p), p) * pow(k, -1, p) % p
        total = (total + term) % p
    return tuple(int(c) for c in total[2:])


def vf_pushforward(phi: Sequence[int], v: VectorField) -> VectorField:
    """``phi_* v``: the field ``(phi' f) o phi^{-1}``."""
    p = v.p
    F = series_poly(phi)
    g = trunc_mul(derivative(F, p), v.poly(), p)
    return VectorField.from_poly(p, compose(g, invert(F, p), p))


def adjoint_orbits(p: int) -> list[list[VectorField]]:
    """Orbits of the pushforward action on all ``p^p`` fields (exhaustive)."""
    be = TruncSeriesBackend(p)
    gens = [be.key(p ** j) for j in range(p)]
    n = p ** p
    weights = p ** np.arange(p)
    allv = be.decode(np.arange(n))  # reuse digit decoding for field coefficients
    rows, cols = [], []
    for phi in gens:
        F = series_poly(phi)
        dF = derivative(F, p)
        Finv = invert(F, p)
        fields = np.zeros((n, p + 2), dtype=np.int64)
        fields[:, 2:] = allv[:, 2:]
        pushed = compose(trunc_mul(dF, fields, p), Finv, p)
        rows.append(np.arange(n))
        cols.append(pushed[:, 2:] @ weights)
    graph = coo_matrix((np.ones(n * len(gens), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    k, labels = connected_components(graph, directed=True, connection="weak")
    orbits: list[list[VectorField]] = [[] for _ in range(k)]
    for idx in np.argsort(labels, kind="stable"):
        orbits[labels[idx]].append(VectorField(p, tuple(int(c) for c in allv[idx, 2:])))
    return orbits


def is_normal_form(v: VectorField) -> bool:
    """``0`` or ``a L_i + b L_{2i}`` with ``a != 0`` (``b = 0`` when ``2i > p``)."""
    nz = [i + 1 for i, c in enumerate(v.coeffs) if c]
    if not nz:
        return True
    i = nz[0]
    return set(nz) <= {i, 2 * i}


# D(G) counts
# -----------

def k_double(G: FiniteGroup) -> int:
    """Irreducible D(G)-modules: sum over classes of the class number of ``Z_y``."""
    return sum(centralizer(G, cl.representative).group.num_classes for cl in G.classes)


def k_double_pairs(G: FiniteGroup) -> int:
    """Orbits of commuting pairs under simultaneous conjugation (independent count)."""
    n = G.order
    gs, hs = [], []
    for g in range(n):
        h = np.nonzero(G.mul_arrays(g, G.all) == G.mul_arrays(G.all, g))[0]
        gs.append(np.full(len(h), g, dtype=np.int64))
        hs.append(h)
    gs = np.concatenate(gs)
    hs = np.concatenate(hs)
    codes = gs * n + hs  # sorted by construction
    m = len(codes)
    rows, cols = [], []
    for s in G.generators:
        cj = G.conj(s, G.all)
        img = cj[gs] * n + cj[hs]
        rows.append(np.arange(m))
        cols.append(np.searchsorted(codes, img))
    if not rows:
        return m
    graph = coo_matrix((np.ones(m * len(rows), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))), shape=(m, m))
    return int(connected_components(graph, directed=True, connection="weak")[0])


@dataclass
class BoundsReport:
    p: int
    order: int
    k_G: int
    p_cubed: int
    z_order: int
    z_expected: int
    z_abelian: bool
    z_exponent_p: bool
    k_double: int | None
    k_double_pairs: int | None
    witness: float
    log_z_irreps: float
    g: tuple[int, ...]
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["g"] = list(self.g)
        d["witness"] = round(self.witness, 12)
        d["log_z_irreps"] = round(self.log_z_irreps, 12)
        return d

    HEADER = ("p", "|G|", "k(G)", "p^3", "|Z_g|", "p^((p+1)/2)", "k(D(G))", "((p+1)/2)ln p")

    def row(self) -> tuple:
        return (self.p, self.order, self.k_G, self.p_cubed, self.z_order, self.z_expected,
                "-" if self.k_double is None else self.k_double, f"{self.witness:.6f}")


def centralizer_report(p: int, with_double: bool | None = None, cap: int = DEFAULT_ORDER_CAP) -> BoundsReport:
    """Witness data for ``g = exp(L_{(p+1)/2}) = x + x^{(p+3)/2}``.

    ``k(D(G))`` is computed when ``with_double`` is true (default: when the
    group has a Cayley table).
    """
    if p % 2 == 0:
        raise ValueError("p must be an odd prime")
    G = trunc_group(p, cap=cap)
    half = (p + 1) // 2
    gkey = exp_vf(VectorField.basis(p, half))
    g = G.index(gkey)
    Z = centralizer(G, g)
    H = Z.group
    z_abelian = H.is_abelian
    z_exp_p = bool((H.power_array(p) == 0).all())
    if with_double is None:
        with_double = G.table is not None
    kd = kdp = None
    if with_double:
        kd = k_double(G)
        kdp = k_double_pairs(G) if G.order <= 10 ** 4 else None
    rep = BoundsReport(
        p=p, order=G.order, k_G=G.num_classes, p_cubed=p ** 3,
        z_order=H.order, z_expected=p ** half, z_abelian=z_abelian, z_exponent_p=z_exp_p,
        k_double=kd, k_double_pairs=kdp,
        witness=half * math.log(p), log_z_irreps=math.log(H.order), g=gkey,
    )
    if rep.k_G > rep.p_cubed:
        rep.violations.append("class count exceeds p^3")
    if rep.z_order != rep.z_expected:
        rep.violations.append("centralizer order differs from p^((p+1)/2)")
    if not (z_abelian and z_exp_p):
        rep.violations.append("centralizer is not elementary abelian")
    if kd is not None and kdp is not None and kd != kdp:
        rep.violations.append("k(D(G)) counting paths disagree")
    if kd is not None and math.log(kd) < rep.witness - 1e-12:
        rep.violations.append("log k(D(G)) below the witness value")
    return rep
