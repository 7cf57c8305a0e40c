"""The doubled module W = A (+) A, its symplectic form, and Lagrangians.

The coefficient ring A = F_q[x]/(x^m) (m odd, sign involution) is
self-dual under eta(a, b) = tr(a* b), with tr the top-coefficient form.
W carries the symplectic k-form B((s,t),(s',t')) = eta(s,t') - eta(t,s'),
the A-valued anti-hermitian form BB(v,w) = v1* w2 - v2* w1 with
B = tr o BB, and the bi-character chi = psi o B.

Vectors are indexed 0 .. q^(2m)-1 in the canonical order (first component
major), and all heavy computation happens on small integer index tables;
the A-level tables have at most |A|^2 entries, and nothing of size
|W| x |W| is ever materialized.

A Lagrangian is a right A-submodule with L equal to its own B-orthogonal.
Every submodule of A^2 over this local ring is spanned by at most two
elements, so enumeration walks the cyclic spans and their pairwise sums;
test code re-derives the same list from scratch by enumerating all
x-stable F_q-subspaces, so the two-generator assumption is not trusted
blindly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .groups import StarMatrix
from .rings import TruncatedPolynomialRing

MAX_W_SIZE = 10**6

LAGRANGIAN_CACHE_VERSION = 1


class SelfDualModule:
    """S = A with eta(a,b) = tr(a* b) and the doubled space W = S (+) S."""

    def __init__(self, ring: TruncatedPolynomialRing):
        if ring.m % 2 == 0:
            raise ValueError("the self-dual module needs odd m")
        if ring.m > 1 and ring.involution != "negate_x":
            raise ValueError("m > 1 needs the sign involution x -> -x")
        self.ring = ring
        self.field = ring.field
        self.m = ring.m
        self.q = ring.field.q
        self.points = ring.elements("all")
        self.n_points = len(self.points)
        self.n_vectors = self.n_points**2
        if self.n_vectors > MAX_W_SIZE:
            raise ValueError(f"|W| = {self.n_vectors} exceeds guard {MAX_W_SIZE}")
        self._build_tables()

    def _build_tables(self):
        ring = self.ring
        n = self.n_points
        idx = ring.index
        elems = self.points
        self.add_a = np.empty((n, n), dtype=np.int32)
        self.mul_a = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                self.add_a[i, j] = idx(ring.add(a, b))
                self.mul_a[i, j] = idx(ring.mul(a, b))
        self.neg_a = np.array([idx(ring.neg(a)) for a in elems], dtype=np.int32)
        self.sub_a = self.add_a[:, self.neg_a]
        self.star_a = np.array([idx(ring.star(a)) for a in elems], dtype=np.int32)
        self.psi_a = np.array([ring.psi_bar(a) for a in elems], dtype=np.complex128)
        zero_f = self.field.zero
        self.tr_zero_a = np.array([ring.tr(a) == zero_f for a in elems], dtype=bool)
        self.i1 = np.arange(self.n_vectors, dtype=np.int32) // n
        self.i2 = np.arange(self.n_vectors, dtype=np.int32) % n
        # lazy per-column caches; only columns actually touched are kept,
        # so memory stays proportional to the Lagrangians in use
        self._chi_cols: dict[int, np.ndarray] = {}
        self._add_cols: dict[int, np.ndarray] = {}
        self._bzero_cols: dict[int, np.ndarray] = {}
        self._perms: dict = {}

    # -- vector plumbing ----------------------------------------------------

    def vector_index(self, v) -> int:
        a, b = v
        return self.ring.index(a) * self.n_points + self.ring.index(b)

    def vector_at(self, i: int):
        return (self.points[i // self.n_points], self.points[i % self.n_points])

    def vector_str(self, i: int) -> str:
        a, b = self.vector_at(i)
        return f"({self.ring.poly_str(a)}, {self.ring.poly_str(b)})"

    # -- forms ----------------------------------------------------------------

    def eta(self, a, b):
        """tr(a* b), the self-duality pairing on A."""
        return self.ring.tr(self.ring.mul(self.ring.star(a), b))

    def hermitian(self, v, w):
        """BB(v, w) = v1* w2 - v2* w1, valued in A."""
        R = self.ring
        return R.sub(
            R.mul(R.star(v[0]), w[1]),
            R.mul(R.star(v[1]), w[0]),
        )

    def b_form(self, v, w):
        """B(v, w) = eta(v1, w2) - eta(v2, w1), valued in F_q."""
        F = self.field
        return F.sub(self.eta(v[0], w[1]), self.eta(v[1], w[0]))

    def chi(self, v, w) -> complex:
        return self.field.psi(self.b_form(v, w))

    # index-level forms

    def bb_index(self, u: int, v: int) -> int:
        m, s = self.mul_a, self.star_a
        n = self.n_points
        u1, u2 = u // n, u % n
        v1, v2 = v // n, v % n
        return int(self.sub_a[m[s[u1], v2], m[s[u2], v1]])

    def chi_index(self, u: int, v: int) -> complex:
        return complex(self.psi_a[self.bb_index(u, v)])

    def b_is_zero(self, u: int, v: int) -> bool:
        return bool(self.tr_zero_a[self.bb_index(u, v)])

    # vectorized columns over all of W

    def bb_col(self, v: int) -> np.ndarray:
        m, s = self.mul_a, self.star_a
        n = self.n_points
        v1, v2 = v // n, v % n
        return self.sub_a[m[s[self.i1], v2], m[s[self.i2], v1]]

    def chi_col(self, v: int) -> np.ndarray:
        """chi(w, v) for every w in canonical order."""
        col = self._chi_cols.get(v)
        if col is None:
            col = self.psi_a[self.bb_col(v)]
            self._chi_cols[v] = col
        return col

    def b_zero_col(self, v: int) -> np.ndarray:
        col = self._bzero_cols.get(v)
        if col is None:
            col = self.tr_zero_a[self.bb_col(v)]
            self._bzero_cols[v] = col
        return col

    def add_col(self, v: int) -> np.ndarray:
        """Index of w + v for every w in canonical order."""
        col = self._add_cols.get(v)
        if col is None:
            n = self.n_points
            v1, v2 = v // n, v % n
            col = self.add_a[self.i1, v1] * n + self.add_a[self.i2, v2]
            self._add_cols[v] = col
        return col

    def add_indices(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        n = self.n_points
        return self.add_a[us // n, vs // n] * n + self.add_a[us % n, vs % n]

    def sub_index(self, u: int, v: int) -> int:
        n = self.n_points
        return int(self.sub_a[u // n, v // n]) * n + int(self.sub_a[u % n, v % n])

    def neg_index(self, v: int) -> int:
        n = self.n_points
        return int(self.neg_a[v // n]) * n + int(self.neg_a[v % n])

    def scalar_multiples(self, v: int) -> np.ndarray:
        """Indices of v.a for every a in A (the cyclic span with repeats)."""
        n = self.n_points
        return self.mul_a[v // n, :] * n + self.mul_a[v % n, :]

    # -- group action ----------------------------------------------------------

    def perm_right(self, g: StarMatrix) -> np.ndarray:
        """Permutation v |-> v.g of vector indices (row vector times matrix)."""
        key = g.entries()
        perm = self._perms.get(key)
        if perm is None:
            R = self.ring
            ia, ib = R.index(g.a), R.index(g.b)
            ic, id_ = R.index(g.c), R.index(g.d)
            m, a = self.mul_a, self.add_a
            first = a[m[self.i1, ia], m[self.i2, ic]]
            second = a[m[self.i1, ib], m[self.i2, id_]]
            perm = first * self.n_points + second
            self._perms[key] = perm
        return perm

    def perm_left(self, g: StarMatrix) -> np.ndarray:
        """Permutation of the left action g.v := v.g^-1."""
        return self.perm_right(g.inverse())

    def act_right(self, v, g: StarMatrix):
        return self.vector_at(int(self.perm_right(g)[self.vector_index(v)]))


@dataclass(frozen=True)
class Lagrangian:
    """A maximal isotropic right A-submodule, stored as sorted vector indices."""

    id: int
    generators: tuple
    elements: tuple

    @property
    def size(self) -> int:
        return len(self.elements)

    def element_set(self) -> frozenset:
        return frozenset(self.elements)


class LagrangianTable:
    """All Lagrangians of W in a stable order, with action and intersections."""

    def __init__(self, module: SelfDualModule, lagrangians: list[Lagrangian]):
        self.module = module
        self.lagrangians = lagrangians
        self._by_elements = {L.elements: L for L in lagrangians}
        self._perm_cache: dict = {}

    def __len__(self):
        return len(self.lagrangians)

    def __iter__(self):
        return iter(self.lagrangians)

    def __getitem__(self, i: int) -> Lagrangian:
        return self.lagrangians[i]

    def find(self, elements) -> Lagrangian:
        key = tuple(sorted(int(e) for e in elements))
        L = self._by_elements.get(key)
        if L is None:
            raise KeyError("element set is not a Lagrangian of this table")
        return L

    def find_by_generator(self, v) -> Lagrangian:
        mod = self.module
        span = np.unique(mod.scalar_multiples(mod.vector_index(v)))
        return self.find(span)

    def act(self, g: StarMatrix, L: Lagrangian) -> Lagrangian:
        """Left action g.L = L.g^-1, re-identified in the table."""
        key = g.entries()
        perm = self._perm_cache.get(key)
        if perm is None:
            perm = self.module.perm_right(g.inverse())
            self._perm_cache[key] = perm
        image = tuple(sorted(int(perm[e]) for e in L.elements))
        got = self._by_elements.get(image)
        if got is None:
            raise RuntimeError("group action left the Lagrangian table")
        return got

    def intersection_size(self, L1: Lagrangian, L2: Lagrangian) -> int:
        return len(L1.element_set() & L2.element_set())

    def to_json_dict(self) -> dict:
        ring = self.module.ring
        return {
            "version": LAGRANGIAN_CACHE_VERSION,
            "p": ring.field.p,
            "e": ring.field.e,
            "modulus": list(ring.field.modulus),
            "m": ring.m,
            "involution": ring.involution,
            "count": len(self.lagrangians),
            "lagrangians": [
                {
                    "id": L.id,
                    "generators": [int(v) for v in L.generators],
                    "elements": [int(v) for v in L.elements],
                }
                for L in self.lagrangians
            ],
        }


def _cyclic_spans(module: SelfDualModule) -> dict:
    spans = {}
    for v in range(module.n_vectors):
        span = tuple(sorted(np.unique(module.scalar_multiples(v)).tolist()))
        spans.setdefault(span, v)
    return spans


def _is_isotropic(module: SelfDualModule, elements: np.ndarray) -> bool:
    for z in elements:
        if not module.b_zero_col(int(z))[elements].all():
            return False
    return True


def orthogonal_complement(module: SelfDualModule, elements) -> np.ndarray:
    mask = np.ones(module.n_vectors, dtype=bool)
    for z in elements:
        mask &= module.b_zero_col(int(z))
    return np.flatnonzero(mask)


def is_lagrangian(module: SelfDualModule, elements) -> bool:
    """Submodule closure, total isotropy and L = L-perp, checked explicitly."""
    elems = np.unique(np.asarray(sorted(int(e) for e in elements), dtype=np.int64))
    elem_set = set(elems.tolist())
    if 0 not in elem_set:
        return False
    for z in elems:
        if not set(module.add_indices(elems, np.full_like(elems, z)).tolist()) <= elem_set:
            return False
        if not set(np.unique(module.scalar_multiples(int(z))).tolist()) <= elem_set:
            return False
    if not _is_isotropic(module, elems):
        return False
    perp = orthogonal_complement(module, elems)
    return perp.shape[0] == elems.shape[0] and bool((perp == elems).all())


def candidate_submodules(module: SelfDualModule, size: int | None = None) -> dict:
    """Element sets of the submodules of W spanned by at most two vectors,
    mapped to a generating tuple.  With ``size`` given, only submodules of
    that cardinality are produced (pair sums that cannot reach it are
    skipped).  Over the local coefficient ring every submodule of A^2 has
    at most two generators, so with size = q^m this covers every
    Lagrangian candidate; the claim itself is re-derived from scratch in
    the test suite by enumerating x-stable subspaces."""
    spans = _cyclic_spans(module)
    candidates: dict[tuple, tuple] = {}
    for span, gen in spans.items():
        if size is None or len(span) == size:
            candidates.setdefault(span, (gen,))
    pool = [
        (span, gen)
        for span, gen in spans.items()
        if size is None or len(span) < size
    ]
    for a_i, (span_a, gen_a) in enumerate(pool):
        arr_a = np.array(span_a, dtype=np.int64)
        for span_b, gen_b in pool[a_i + 1 :]:
            if size is not None and len(span_a) * len(span_b) < size:
                continue
            arr_b = np.array(span_b, dtype=np.int64)
            grid = module.add_indices(
                np.repeat(arr_a, arr_b.size), np.tile(arr_b, arr_a.size)
            )
            joint = np.unique(grid)
            if size is None or joint.size == size:
                candidates.setdefault(tuple(joint.tolist()), (gen_a, gen_b))
    return candidates


def hermitian_orthogonal(module: SelfDualModule, elements) -> np.ndarray:
    """Vectors pairing to zero with all of ``elements`` under the A-valued
    anti-hermitian form (index 0 is the zero ring element)."""
    mask = np.ones(module.n_vectors, dtype=bool)
    for z in elements:
        mask &= module.bb_col(int(z)) == 0
    return np.flatnonzero(mask)


def is_lagrangian_hermitian(module: SelfDualModule, elements) -> bool:
    """Maximal total isotropy with respect to the anti-hermitian form."""
    elems = np.unique(np.asarray(sorted(int(e) for e in elements), dtype=np.int64))
    for z in elems:
        if not (module.bb_col(int(z))[elems] == 0).all():
            return False
    perp = hermitian_orthogonal(module, elems)
    return perp.shape[0] == elems.shape[0] and bool((perp == elems).all())


def enumerate_lagrangians(module: SelfDualModule) -> LagrangianTable:
    """All Lagrangians, via spans of at most two generators.

    Candidates of cardinality q^m are kept when they equal their own
    B-orthogonal, and the surviving element sets get stable ids in
    lexicographic order.
    """
    found = []
    for span, gens in sorted(candidate_submodules(module, size=module.n_points).items()):
        arr = np.array(span, dtype=np.int64)
        if not _is_isotropic(module, arr):
            continue
        perp = orthogonal_complement(module, arr)
        if perp.shape[0] == arr.shape[0] and bool((perp == arr).all()):
            found.append((span, gens))
    lagrangians = [
        Lagrangian(id=i, generators=gens, elements=span)
        for i, (span, gens) in enumerate(found)
    ]
    return LagrangianTable(module, lagrangians)


# -- cache ------------------------------------------------------------------


def lagrangian_cache_path(cache_dir, ring: TruncatedPolynomialRing) -> Path:
    name = (
        f"lagrangians_p{ring.field.p}_e{ring.field.e}_m{ring.m}"
        f"_{ring.involution}_v{LAGRANGIAN_CACHE_VERSION}.json"
    )
    return Path(cache_dir) / name


def save_lagrangians(cache_dir, table: LagrangianTable) -> Path:
    path = lagrangian_cache_path(cache_dir, table.module.ring)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(table.to_json_dict()))
    return path


def load_lagrangians(cache_dir, module: SelfDualModule) -> LagrangianTable | None:
    path = lagrangian_cache_path(cache_dir, module.ring)
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    if data.get("version") != LAGRANGIAN_CACHE_VERSION:
        return None
    ring = module.ring
    if (data["p"], data["e"], data["m"], data["involution"]) != (
        ring.field.p,
        ring.field.e,
        ring.m,
        ring.involution,
    ):
        return None
    lagrangians = [
        Lagrangian(
            id=entry["id"],
            generators=tuple(entry["generators"]),
            elements=tuple(entry["elements"]),
        )
        for entry in data["lagrangians"]
    ]
    return LagrangianTable(module, lagrangians)


def lagrangian_table(module: SelfDualModule, cache_dir=None) -> LagrangianTable:
    if cache_dir is not None:
        cached = load_lagrangians(cache_dir, module)
        if cached is not None:
            return cached
    table = enumerate_lagrangians(module)
    if cache_dir is not None:
        save_lagrangians(cache_dir, table)
    return table
