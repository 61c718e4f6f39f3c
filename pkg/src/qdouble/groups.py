"""Finite groups with indexed elements.

Every group is fully enumerated: elements carry indices ``0..order-1`` with
the identity at 0.  Small groups keep a dense Cayley table; larger ones
delegate products to a vectorized backend.  All group algorithms below are
phrased through ``mul_arrays`` so they run unchanged in both regimes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .ablinalg import FinAbGroup, parse_abelian, smith_normal_form

DEFAULT_ORDER_CAP = 2_000_000
TABLE_CAP = 5000


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""


class SpecError(ValueError):
    """Malformed group spec string."""


class FiniteGroup:
    """An enumerated finite group.

    ``table[i, j]`` is the index of ``e_i * e_j`` when a table is present.
    ``keys[i]`` is a hashable concrete form of element ``i`` (a permutation
    tuple, a ``WreathElement``, a coefficient tuple, ...).
    """

    def __init__(self, family: str, spec: str, order: int, generators: Sequence[int],
                 table: np.ndarray | None = None, inverse: np.ndarray | None = None,
                 keys: Sequence[Hashable] | None = None, backend=None, params: dict | None = None):
        if table is None and backend is None:
            raise ValueError("a group needs either a Cayley table or a backend")
        self.family = family
        self.spec = spec
        self.order = int(order)
        self.generators = [int(g) for g in generators]
        self.table = table
        self.backend = backend
        self.keys = keys
        self.params = params or {}
        self.identity = 0
        if inverse is None:
            if table is not None:
                rows, cols = np.nonzero(table == 0)
                inverse = np.empty(self.order, dtype=np.int64)
                inverse[rows] = cols
            else:
                inverse = backend.inverse_all()
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self._powers: dict[int, np.ndarray] = {}
        self._index: dict | None = None

    def __repr__(self):
        return f"FiniteGroup({self.spec!r}, order={self.order})"

    # element access

    def key(self, i: int):
        if self.keys is not None:
            return self.keys[i]
        return self.backend.key(i) if self.backend is not None else int(i)

    def index(self, key) -> int:
        if self.keys is None:
            return self.backend.index(key) if self.backend is not None else int(key)
        if self._index is None:
            self._index = {k: i for i, k in enumerate(self.keys)}
        return self._index[key]

    @property
    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def mul(self, i: int, j: int) -> int:
        if self.table is not None:
            return int(self.table[i, j])
        return int(self.backend.mul_arrays(np.array([i]), np.array([j]))[0])

    def inv(self, i: int) -> int:
        return int(self.inverse[i])

    def mul_arrays(self, X, Y) -> np.ndarray:
        """Elementwise products with broadcasting."""
        X, Y = np.broadcast_arrays(np.asarray(X, dtype=np.int64), np.asarray(Y, dtype=np.int64))
        if self.table is not None:
            return self.table[X, Y].astype(np.int64)
        return self.backend.mul_arrays(X.ravel(), Y.ravel()).reshape(X.shape)

    def conj(self, g: int, X) -> np.ndarray:
        """``g x g^-1`` for each ``x`` in ``X``."""
        return self.mul_arrays(g, self.mul_arrays(X, self.inverse[g]))

    def pow(self, i: int, n: int) -> int:
        return int(self.power_array(n)[i])

    def power_array(self, n: int) -> np.ndarray:
        """``g^n`` for every element ``g``, cached by ``n mod exponent``."""
        if n < 0:
            return self.inverse[self.power_array(-n)]
        n %= self.exponent
        if n not in self._powers:
            result = np.zeros(self.order, dtype=np.int64)
            base = self.all
            k = n
            while k:
                if k & 1:
                    result = self.mul_arrays(result, base)
                k >>= 1
                if k:
                    base = self.mul_arrays(base, base)
            self._powers[n] = result
        return self._powers[n]

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        orders[0] = 1
        cur = self.all
        k = 1
        while (orders == 0).any():
            cur = self.mul_arrays(cur, self.all)
            k += 1
            orders[(cur == 0) & (orders == 0)] = k
        return orders

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*np.unique(self.element_orders).tolist())

    @cached_property
    def is_abelian(self) -> bool:
        if self.table is not None:
            return bool((self.table == self.table.T).all())
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def check_axioms(self, sample: int | None = None, seed: int = 0) -> bool:
        """Identity, inverses and associativity.

        Associativity is checked exactly with Light's test: it suffices that
        ``(x s) y = x (s y)`` for every generator ``s`` and all ``x, y``.
        With ``sample`` set, random triples are checked instead.
        """
        ar = self.all
        if not (self.mul_arrays(0, ar) == ar).all() or not (self.mul_arrays(ar, 0) == ar).all():
            return False
        if not (self.mul_arrays(ar, self.inverse) == 0).all():
            return False
        if sample is None:
            for s in self.generators:
                xs = self.mul_arrays(ar, s)
                sy = self.mul_arrays(s, ar)
                for x in range(self.order):
                    if not (self.mul_arrays(xs[x], ar) == self.mul_arrays(x, sy)).all():
                        return False
            return True
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, self.order, sample) for _ in range(3))
        return bool((self.mul_arrays(self.mul_arrays(a, b), c) == self.mul_arrays(a, self.mul_arrays(b, c))).all())

    # classes

    @cached_property
    def _class_data(self):
        n = self.order
        gens = self.generators or [0]
        rows, cols = [], []
        for g in gens:
            rows.append(self.all)
            cols.append(self.conj(g, self.all))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        # relabel components by their minimal member
        first = np.full(labels.max() + 1, n, dtype=np.int64)
        np.minimum.at(first, labels, self.all)
        order = np.argsort(first)
        relabel = np.empty_like(order)
        relabel[order] = np.arange(len(order))
        class_of = relabel[labels]
        classes = []
        members_sorted = np.argsort(class_of, kind="stable")
        bounds = np.searchsorted(class_of[members_sorted], np.arange(len(order) + 1))
        for k in range(len(order)):
            mem = members_sorted[bounds[k]:bounds[k + 1]]
            classes.append(ConjugacyClass(int(mem[0]), mem, len(mem)))
        return classes, class_of

    @property
    def classes(self) -> list[ConjugacyClass]:
        return self._class_data[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._class_data[1]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


class ConjugacyClass(NamedTuple):
    representative: int
    members: np.ndarray
    size: int


@dataclass(eq=False)
class Centralizer:
    ambient: FiniteGroup
    y: int
    group: FiniteGroup
    embedding: np.ndarray
    position: np.ndarray = field(repr=False)

    def to_sub(self, X) -> np.ndarray:
        pos = self.position[np.asarray(X)]
        if (pos < 0).any():
            raise ValueError("element not in the centralizer")
        return pos


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    return G.classes


def power_class_map(G: FiniteGroup, n: int) -> list[int]:
    pw = G.power_array(n)
    return [int(G.class_of[pw[c.representative]]) for c in G.classes]


def _closure(table: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    gens = np.asarray(gens, dtype=np.int64)
    while frontier.size and gens.size:
        prods = table[frontier][:, gens].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def greedy_generators(table: np.ndarray) -> list[int]:
    gens: list[int] = []
    mask = _closure(table, gens)
    while not mask.all():
        gens.append(int(np.argmin(mask)))
        mask = _closure(table, gens)
    return gens


def subgroup(G: FiniteGroup, members, family: str = "subgroup", spec: str | None = None) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """The subgroup on ``members`` (sorted, must contain the identity)."""
    emb = np.unique(np.asarray(members, dtype=np.int64))
    if emb[0] != 0:
        raise ValueError("subgroup must contain the identity")
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[emb] = np.arange(len(emb))
    if G.table is not None:
        sub = pos[G.table[np.ix_(emb, emb)]]
    else:
        sub = np.empty((len(emb), len(emb)), dtype=np.int64)
        for i, e in enumerate(emb):
            sub[i] = pos[G.mul_arrays(e, emb)]
    if (sub < 0).any():
        raise ValueError("members are not closed under multiplication")
    sub = sub.astype(np.int32)
    keys = [G.key(int(e)) for e in emb]
    H = FiniteGroup(family, spec or f"{family}({G.spec})", len(emb), greedy_generators(sub),
                    table=sub, keys=keys, params={"ambient": G.spec})
    return H, emb, pos


def centralizer(G: FiniteGroup, y: int) -> Centralizer:
    mask = G.mul_arrays(y, G.all) == G.mul_arrays(G.all, y)
    H, emb, pos = subgroup(G, np.nonzero(mask)[0], "centralizer", f"Z({y}) in {G.spec}")
    return Centralizer(G, int(y), H, emb, pos)


# construction by closure
# -----------------------

def from_generators(family: str, spec: str, identity, gen_keys, mul: Callable,
                    cap: int = DEFAULT_ORDER_CAP, params: dict | None = None) -> FiniteGroup:
    """Enumerate the group generated by ``gen_keys`` by breadth-first closure.

    Indices follow BFS insertion order over the sorted generators, so the
    indexing is reproducible run to run.
    """
    gens = sorted({g for g in gen_keys if g != identity})
    keys = [identity]
    index = {identity: 0}
    parent = [(-1, -1)]
    right = [[] for _ in gens]
    i = 0
    while i < len(keys):
        x = keys[i]
        for s, g in enumerate(gens):
            y = mul(x, g)
            j = index.get(y)
            if j is None:
                j = len(keys)
                if j >= cap:
                    raise ResourceError(f"{spec}: order exceeds cap {cap}")
                index[y] = j
                keys.append(y)
                parent.append((i, s))
            right[s].append(j)
        i += 1
    n = len(keys)
    right = [np.array(r, dtype=np.int64) for r in right]
    gen_idx = [index[g] for g in gens]
    if n <= TABLE_CAP:
        table = table_from_right_actions(right, parent)
        G = FiniteGroup(family, spec, n, gen_idx, table=table, keys=keys, params=params)
    else:
        G = FiniteGroup(family, spec, n, gen_idx, keys=keys, params=params,
                        backend=_KeyBackend(keys, index, mul))
    G._index = index
    return G


def bfs_parents(right: Sequence[np.ndarray]) -> list[tuple[int, int]]:
    """Spanning tree of the right Cayley graph: ``y = parent * gens[s]``."""
    n = len(right[0])
    parent = [(-1, -1)] * n
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, R in enumerate(right):
                y = int(R[x])
                if not seen[y]:
                    seen[y] = True
                    parent[y] = (x, s)
                    nxt.append(y)
        frontier = nxt
    if not seen.all():
        raise ValueError("generators do not reach every element")
    return parent


def table_from_right_actions(right: Sequence[np.ndarray], parent=None) -> np.ndarray:
    """Cayley table from the right-multiplication maps of a generating set.

    Column ``y = y' s`` is ``right[s]`` applied to column ``y'``; filling
    columns in BFS order needs only ``O(n)`` gathers per column.
    """
    n = len(right[0]) if right else 1
    if parent is None:
        parent = bfs_parents(right) if right else [(-1, -1)]
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n)
    order = sorted(range(1, n), key=lambda y: _depth(parent, y))
    for y in order:
        py, s = parent[y]
        table[:, y] = right[s][table[:, py]]
    return table


def _depth(parent, y):
    d = 0
    while y:
        y = parent[y][0]
        d += 1
    return d


class _KeyBackend:
    """Fallback products through the concrete keys (slow, exact)."""

    def __init__(self, keys, index, mul):
        self.keys, self.index_map, self.mul = keys, index, mul

    def mul_arrays(self, X, Y):
        k, idx, mul = self.keys, self.index_map, self.mul
        return np.array([idx[mul(k[a], k[b])] for a, b in zip(X.tolist(), Y.tolist())], dtype=np.int64)

    def inverse_all(self):
        n = len(self.keys)
        inv = np.empty(n, dtype=np.int64)
        for i in range(n):
            # x^-1 = x^(ord-1)
            x, prev = i, 0
            while x != 0:
                prev = x
                x = self.index_map[self.mul(self.keys[x], self.keys[i])]
            inv[i] = prev if i else 0
        return inv

    def key(self, i):
        return self.keys[i]

    def index(self, key):
        return self.index_map[key]


# concrete families
# -----------------

def perm_mul(s: tuple, t: tuple) -> tuple:
    """Composition ``s o t`` (apply ``t`` first)."""
    return tuple(s[i] for i in t)


def perm_inv(s: tuple) -> tuple:
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


def perm_cycles(s: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(s)
    cycles = []
    for i in range(len(s)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = s[j]
            cycles.append(tuple(cyc))
    return cycles


def parse_cycles(text: str, N: int) -> tuple[int, ...]:
    """``(1,2,3)(4,5)`` in 1-based cycle notation to a 0-based image tuple."""
    img = list(range(N))
    text = text.strip()
    if text in ("", "()"):
        return tuple(img)
    if not re.fullmatch(r"(\(\s*\d+(\s*,\s*\d+)*\s*\))+", text):
        raise SpecError(f"bad cycle notation {text!r}")
    perm = tuple(img)
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) - 1 for t in cyc.split(",")]
        if any(not 0 <= p < N for p in pts) or len(set(pts)) != len(pts):
            raise SpecError(f"bad cycle ({cyc}) on {N} points")
        c = list(range(N))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            c[a] = b
        # rightmost cycle acts first
        perm = perm_mul(perm, tuple(c))
    return perm


def cyclic_group(A: FinAbGroup, spec: str | None = None, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if A.order > cap:
        raise ResourceError(f"order {A.order} exceeds cap {cap}")
    return from_generators("cyclic", spec or str(A), A.zero, A.generators(), A.add, cap, {"A": A})


def symmetric_group(N: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if math.factorial(N) > cap:
        raise ResourceError(f"order {math.factorial(N)} exceeds cap {cap}")
    ident = tuple(range(N))
    gens = []
    if N >= 2:
        gens.append((1, 0) + tuple(range(2, N)))
        gens.append(tuple(list(range(1, N)) + [0]))
    return from_generators("sym", f"sym:{N}", ident, gens, perm_mul, cap, {"N": N})


def permgen_group(N: int, perms: Sequence[tuple[int, ...]], spec: str | None = None,
                  cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    ident = tuple(range(N))
    return from_generators("permgen", spec or f"permgen:{N}", ident, list(perms), perm_mul, cap,
                           {"N": N})


class WreathElement(NamedTuple):
    """``sigma . (a_1, ..., a_N)``; 0-based image tuple and a tail of ``A``-elements."""

    sigma: tuple[int, ...]
    tail: tuple[tuple[int, ...], ...]


def wreath_mul(A: FinAbGroup) -> Callable:
    """``(s, a)(t, b) = (s t, a o t + b)`` with ``(a o t)_i = a_{t(i)}``."""
    add = A.add

    def mul(x: WreathElement, y: WreathElement) -> WreathElement:
        s, a = x
        t, b = y
        return WreathElement(tuple(s[i] for i in t), tuple(add(a[t[i]], b[i]) for i in range(len(t))))

    return mul


def wreath_inv(A: FinAbGroup, x: WreathElement) -> WreathElement:
    s, a = x
    si = perm_inv(s)
    return WreathElement(si, tuple(A.neg(a[si[i]]) for i in range(len(s))))


def wreath_product(N: int, A: FinAbGroup, cap: int = DEFAULT_ORDER_CAP, spec: str | None = None) -> FiniteGroup:
    """``S_N x| A^N`` under the convention of ``wreath_mul``."""
    if N < 1:
        raise ValueError("N must be positive")
    order = math.factorial(N) * A.order ** N
    if order > cap:
        raise ResourceError(f"order {order} exceeds cap {cap}")
    ident = WreathElement(tuple(range(N)), (A.zero,) * N)
    gens = []
    if N >= 2:
        gens.append(WreathElement((1, 0) + tuple(range(2, N)), ident.tail))
        gens.append(WreathElement(tuple(list(range(1, N)) + [0]), ident.tail))
    for a in A.generators():
        gens.append(WreathElement(ident.sigma, (a,) + (A.zero,) * (N - 1)))
    G = from_generators("wreath", spec or f"wreath:{N},{A}", ident, gens, wreath_mul(A), cap,
                        {"N": N, "A": A})
    assert G.order == order
    return G


# wreath structure
# ----------------

class CycleBlock(NamedTuple):
    length: int
    monodromy: tuple[int, ...]
    multiplicity: int
    support: tuple[int, ...]
    element: WreathElement


def monodromy(A: FinAbGroup, x: WreathElement, cycle: Sequence[int]) -> tuple[int, ...]:
    return A.sum(x.tail[i] for i in cycle)


def cycle_type_blocks(G: FiniteGroup, z) -> list[CycleBlock]:
    """Group the cycles of a wreath element by (length, monodromy).

    Each block's ``element`` agrees with ``z`` on the block's support and is
    the identity elsewhere, so ``z`` is the (commuting) product of them.
    """
    A: FinAbGroup = G.params["A"]
    N: int = G.params["N"]
    x = G.key(z) if isinstance(z, (int, np.integer)) else z
    groups: dict[tuple, list[tuple[int, ...]]] = {}
    for cyc in perm_cycles(x.sigma):
        groups.setdefault((len(cyc), monodromy(A, x, cyc)), []).append(cyc)
    blocks = []
    for (m, u), cycs in sorted(groups.items()):
        support = tuple(sorted(i for c in cycs for i in c))
        sigma = list(range(N))
        tail = [A.zero] * N
        for i in support:
            sigma[i] = x.sigma[i]
            tail[i] = x.tail[i]
        blocks.append(CycleBlock(m, u, len(cycs), support, WreathElement(tuple(sigma), tuple(tail))))
    return blocks


@dataclass
class CentralExtension:
    """The abelian group ``B`` generated by ``c`` and the diagonal ``A`` in ``S_m x| A^m``."""

    m: int
    A: FinAbGroup
    u: tuple[int, ...]
    group: FinAbGroup
    c: tuple[int, ...]
    coords: dict  # WreathElement -> element of ``group``
    subgroup: FiniteGroup


def abelian_invariants(keys: Sequence, gen_keys: Sequence, mul: Callable, identity) -> tuple[FinAbGroup, dict]:
    """Identify the abelian group spanned by ``gen_keys``.

    BFS over the Cayley graph assigns each element an integer exponent
    vector; every non-tree edge yields a relation.  The Smith form of the
    relation matrix gives invariant factors and, through ``V``, coordinates.
    """
    t = len(gen_keys)
    vec = {identity: (0,) * t}
    queue = [identity]
    rels = []
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for s, g in enumerate(gen_keys):
            y = mul(x, g)
            v = list(vec[x])
            v[s] += 1
            if y in vec:
                d = [a - b for a, b in zip(v, vec[y])]
                if any(d):
                    rels.append(d)
            else:
                vec[y] = tuple(v)
                queue.append(y)
    if len(vec) != len(keys):
        raise ValueError("generators do not span the given elements")
    if t == 0:
        return FinAbGroup(()), {identity: ()}
    U, D, V = smith_normal_form(rels or [[0] * t])
    diag = [D[k][k] if k < len(D) else 0 for k in range(t)]
    keep = [k for k, d in enumerate(diag) if d != 1]
    if any(diag[k] == 0 for k in keep):
        raise ValueError("relations do not have full rank; group is not finite")
    group = FinAbGroup(tuple(diag[k] for k in keep))

    def to_coords(v):
        w = [sum(v[a] * V[a][k] for a in range(t)) for k in keep]
        return group.reduce(w)

    return group, {x: to_coords(v) for x, v in vec.items()}


def central_extension_B(m: int, A: FinAbGroup, u: Sequence[int]) -> CentralExtension:
    if m < 1:
        raise ValueError("m must be positive")
    u = A.reduce(u)
    mul = wreath_mul(A)
    ident = WreathElement(tuple(range(m)), (A.zero,) * m)
    c = WreathElement(tuple(list(range(1, m)) + [0]), (u,) + (A.zero,) * (m - 1))
    gens = [c] + [WreathElement(ident.sigma, (a,) * m) for a in A.generators()]
    H = from_generators("subgroup", f"B(m={m},{A},u={u})", ident, gens, mul)
    group, coords = abelian_invariants(H.keys, gens, mul, ident)
    return CentralExtension(m, A, u, group, coords[c], coords, H)


# spec parsing
# ------------

def make_group(spec: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from a spec string.

    Grammar::

        cyclic:<m>[x<m>...]
        sym:<N>
        wreath:<N>,<abelian-spec>
        permgen:<N>;<perm>;<perm>;...
        truncseries:<p>
    """
    spec = spec.strip()
    family, _, body = spec.partition(":")
    try:
        if family == "cyclic":
            return cyclic_group(parse_abelian(spec), spec, cap)
        if family == "sym":
            N = int(body)
            if N < 1:
                raise SpecError("sym needs N >= 1")
            return symmetric_group(N, cap)
        if family == "wreath":
            n_text, _, a_text = body.partition(",")
            N = int(n_text)
            if N < 1:
                raise SpecError("wreath needs N >= 1")
            return wreath_product(N, parse_abelian(a_text), cap, spec)
        if family == "permgen":
            parts = body.split(";")
            N = int(parts[0])
            perms = [parse_cycles(p, N) for p in parts[1:] if p.strip()]
            return permgen_group(N, perms, spec, cap)
        if family == "truncseries":
            from .bounds import trunc_group
            return trunc_group(int(body), cap=cap)
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(f"malformed group spec {spec!r}: {exc}") from None
    raise SpecError(f"unknown group family in {spec!r}")
