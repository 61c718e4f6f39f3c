"""Exact character tables by Dixon's method.

The class algebra structure constants are reduced modulo a prime ``l`` with
``l = 1 (mod e)`` and ``l > 2 sqrt|G|``.  Common eigenvectors of the class
matrices over ``F_l`` are the central characters; degrees follow from the
norm relation and values are lifted to ``Z[zeta_e]`` through the
multiplicities of eigenvalues of ``g`` (a discrete Fourier transform over
the powers of ``g``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from .cyclotomic import Cyclotomic
from .groups import FiniteGroup, ResourceError, abelian_invariants

CLASS_CAP = 200
MAX_PRIME_RETRIES = 20


class SplittingError(RuntimeError):
    pass


def class_mult_coeffs(G: FiniteGroup) -> np.ndarray:
    """``a[i, j, k] = #{(x, y) in C_i x C_j : x y = g_k}`` for fixed ``g_k``."""
    K = G.num_classes
    a = np.zeros((K, K, K), dtype=np.int64)
    ci = G.class_of
    xinv = G.inverse
    for k, cl in enumerate(G.classes):
        cj = G.class_of[G.mul_arrays(xinv, cl.representative)]
        a[:, :, k] = np.bincount(ci * K + cj, minlength=K * K).reshape(K, K)
    return a


# modular linear algebra
# ----------------------

def _nullspace_mod(M: list[list[int]], p: int) -> list[list[int]]:
    """Basis of ``{x : M x = 0}`` over ``F_p``."""
    rows = [r[:] for r in M]
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f] % p
        basis.append(v)
    return basis


def _split(space: list[list[int]], M: np.ndarray, p: int) -> list[list[list[int]]]:
    """Split an ``M``-invariant subspace (list of basis vectors) into eigenspaces."""
    d = len(space)
    K = M.shape[0]
    Bmat = np.array(space, dtype=np.int64).T % p  # K x d
    MB = (M % p) @ Bmat % p
    pieces = []
    found = 0
    for lam in range(p):
        T = (MB - lam * Bmat) % p
        ns = _nullspace_mod(T.tolist(), p)
        if ns:
            vecs = [(Bmat @ np.array(x, dtype=np.int64) % p).tolist() for x in ns]
            pieces.append(vecs)
            found += len(ns)
            if found == d:
                return pieces
    raise SplittingError(f"class matrix not diagonalizable over F_{p} on a {d}-dim space (K={K})")


def dixon_prime(order: int, e: int, start: int = 0) -> int:
    l = max(start, math.isqrt(4 * order) + 1)
    l += (1 - l) % e
    while not sympy.isprime(l) or l * l <= 4 * order:
        l += e
    return l


# tables
# ------

@dataclass(eq=False)
class CharacterTable:
    group: FiniteGroup
    e: int
    degrees: list[int]
    values: list[list[Cyclotomic]]
    prime: int
    power_maps: dict[int, list[int]] = field(default_factory=dict, repr=False)

    @property
    def classes(self):
        return self.group.classes

    @property
    def num_irreps(self) -> int:
        return len(self.degrees)

    def value(self, w: int, cls: int) -> Cyclotomic:
        return self.values[w][cls]

    @cached_property
    def coeff_array(self) -> np.ndarray:
        """Integer coefficient tensor ``(irrep, class, basis)``."""
        return np.array([[list(v.coeffs) for v in row] for row in self.values], dtype=object)

    def check_orthogonality(self) -> bool:
        G = self.group
        sizes = [c.size for c in G.classes]
        K = len(sizes)
        conj = [[v.conjugate() for v in row] for row in self.values]
        for a in range(K):
            for b in range(a, K):
                s = sum((sizes[c] * self.values[a][c] * conj[b][c] for c in range(K)), Cyclotomic.rational(self.e, 0))
                if s != (G.order if a == b else 0):
                    return False
        for c in range(K):
            for d in range(c, K):
                s = sum((self.values[w][c] * conj[w][d] for w in range(K)), Cyclotomic.rational(self.e, 0))
                if s != (G.order // sizes[c] if c == d else 0):
                    return False
        return sum(d * d for d in self.degrees) == G.order

    def to_json(self) -> str:
        return json.dumps({
            "group": self.group.spec,
            "e": self.e,
            "degrees": self.degrees,
            "values": [[v.to_json() for v in row] for row in self.values],
        })


def character_table(G: FiniteGroup, class_cap: int = CLASS_CAP) -> CharacterTable:
    if G.num_classes > class_cap:
        raise ResourceError(f"{G.spec}: {G.num_classes} classes exceed cap {class_cap}")
    e = G.exponent
    K = G.num_classes
    a = class_mult_coeffs(G)
    mats = [a[j] for j in range(K)]  # (M_j)[i, k] = a[j, i, k]
    sizes = [c.size for c in G.classes]
    inv_class = [int(G.class_of[G.inverse[c.representative]]) for c in G.classes]
    powmaps = {j: [int(G.class_of[G.pow(c.representative, j)]) for c in G.classes] for j in range(e)}

    l = dixon_prime(G.order, e)
    for _ in range(MAX_PRIME_RETRIES):
        try:
            rows = _dixon_mod(G.order, mats, sizes, inv_class, l)
            break
        except SplittingError:
            l = dixon_prime(G.order, e, l + 1)
    else:
        raise SplittingError(f"{G.spec}: no splitting prime found")

    # primitive e-th root of unity in F_l
    g = sympy.primitive_root(l)
    z = pow(g, (l - 1) // e, l)
    einv = pow(e, -1, l)
    zpow = [pow(z, k, l) for k in range(e)]
    degrees, values = [], []
    for d, chi in rows:
        row = []
        for c in range(K):
            chi_pows = [chi[powmaps[j][c]] for j in range(e)]
            mult = []
            for k in range(e):
                s = sum(chi_pows[j] * zpow[(-j * k) % e] for j in range(e)) * einv % l
                mult.append(s)
            if sum(mult) != d:
                raise SplittingError(f"{G.spec}: eigenvalue multiplicities do not sum to the degree")
            row.append(Cyclotomic.from_powers(e, mult))
        degrees.append(d)
        values.append(row)

    def sort_key(i):
        row = values[i]
        trivial = all(v == 1 for v in row)
        return (degrees[i], not trivial, [tuple(-c for c in v.coeffs) for v in row])

    order = sorted(range(K), key=sort_key)
    return CharacterTable(G, e, [degrees[i] for i in order], [values[i] for i in order], l,
                          power_maps=powmaps)


def _dixon_mod(order: int, mats, sizes, inv_class, l: int) -> list[tuple[int, list[int]]]:
    K = len(sizes)
    spaces = [[[int(i == j) for j in range(K)] for i in range(K)]]
    for M in mats[1:]:
        if all(len(s) == 1 for s in spaces):
            break
        nxt = []
        for s in spaces:
            nxt.extend([s] if len(s) == 1 else _split(s, M, l))
        spaces = nxt
    if any(len(s) > 1 for s in spaces):
        raise SplittingError(f"eigenspaces did not split over F_{l}")
    bound = math.isqrt(order)
    out = []
    for (v,) in spaces:
        if v[0] % l == 0:
            raise SplittingError("central character vanishes at the identity class")
        inv0 = pow(v[0], -1, l)
        omega = [x * inv0 % l for x in v]
        norm = sum(omega[i] * omega[inv_class[i]] * pow(sizes[i], -1, l) for i in range(K)) % l
        d2 = order * pow(norm, -1, l) % l
        d = next((d for d in range(1, bound + 1) if d * d % l == d2), None)
        if d is None or order % d:
            raise SplittingError(f"no admissible degree for F_{l} data")
        chi = [omega[i] * d * pow(sizes[i], -1, l) % l for i in range(K)]
        out.append((d, chi))
    return out


def char_at_power(T: CharacterTable, w: int, g: int, n: int) -> Cyclotomic:
    G = T.group
    return T.values[w][int(G.class_of[G.pow(g, n)])]


def classical_indicator(T: CharacterTable, w: int, n: int) -> Cyclotomic:
    """``(1/|G|) sum_g chi_w(g^n)``."""
    G = T.group
    counts = np.bincount(G.class_of[G.power_array(n)], minlength=G.num_classes)
    total = sum((int(counts[c]) * T.values[w][c] for c in range(G.num_classes) if counts[c]),
                Cyclotomic.rational(T.e, 0))
    return total.exact_div(G.order)


def dual_table_rows(G: FiniteGroup) -> set[tuple]:
    """Character rows of an abelian group built from its invariant-factor decomposition."""
    if not G.is_abelian:
        raise ValueError("dual table needs an abelian group")
    gen_keys = [G.key(g) for g in G.generators]
    mul = lambda x, y: G.key(G.mul(G.index(x), G.index(y)))
    A, coords = abelian_invariants([G.key(i) for i in range(G.order)], gen_keys, mul, G.key(0))
    e = G.exponent
    rows = set()
    for a in A.elements():
        row = []
        for c in G.classes:
            x = coords[G.key(c.representative)]
            k = sum(ai * xi * (e // m) for ai, xi, m in zip(a, x, A.moduli))
            row.append(Cyclotomic.zeta(e, k).coeffs)
        rows.add(tuple(row))
    return rows
