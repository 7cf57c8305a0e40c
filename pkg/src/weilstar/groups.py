"""The groups GL_*(2,A) and SL_*(2,A) and their Bruhat structure.

A 2x2 matrix g = (a b; c d) over an involutive ring A belongs to
GL_*(2,A) when its entries star-commute pairwise in the required pattern
and the star-determinant a d* - b c* is a central symmetric unit equal to
a* d - c* b; SL_* is the kernel of the star-determinant.

The group is generated by h(t) = diag(t, (t*)^-1) for units t, the
unipotents u(s) for symmetric s, and the antidiagonal w.  Over a local
coefficient ring every element factors through at most two w's, and the
factorization implemented here is canonical: the derived word always
re-multiplies to the input exactly, which pins down the one sign that the
naive closed form gets wrong.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .rings import DoublingRing, InvolutiveRing, MatrixRing, TruncatedPolynomialRing


class StarMatrix:
    """Immutable 2x2 matrix over an involutive ring."""

    __slots__ = ("ring", "a", "b", "c", "d")

    def __init__(self, ring: InvolutiveRing, a, b, c, d):
        self.ring = ring
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring.one, ring.zero, ring.zero, ring.one)

    @classmethod
    def h(cls, ring, t):
        if not ring.is_unit(t):
            raise ValueError("h(t) needs a unit")
        return cls(ring, t, ring.zero, ring.zero, ring.inv(ring.star(t)))

    @classmethod
    def u(cls, ring, s):
        if not ring.is_symmetric(s):
            raise ValueError("u(s) needs a symmetric element")
        return cls(ring, ring.one, s, ring.zero, ring.one)

    @classmethod
    def w(cls, ring):
        return cls(ring, ring.zero, ring.one, ring.neg(ring.one), ring.zero)

    # -- plumbing ----------------------------------------------------------

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return isinstance(other, StarMatrix) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"StarMatrix({self.a}, {self.b}; {self.c}, {self.d})"

    # -- group structure ----------------------------------------------------

    def __mul__(self, other: "StarMatrix") -> "StarMatrix":
        R = self.ring
        if R is not other.ring and R != other.ring:
            raise ValueError("mixed ring specs")
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return StarMatrix(
            R,
            R.add(R.mul(a, e), R.mul(b, g)),
            R.add(R.mul(a, f), R.mul(b, h)),
            R.add(R.mul(c, e), R.mul(d, g)),
            R.add(R.mul(c, f), R.mul(d, h)),
        )

    def star_det(self):
        R = self.ring
        return R.sub(R.mul(self.a, R.star(self.d)), R.mul(self.b, R.star(self.c)))

    def membership(self):
        """'GL', 'SL' or None, by checking all the defining conditions."""
        R = self.ring
        a, b, c, d = self.entries()
        st = R.star
        pairs = (
            (R.mul(a, st(b)), R.mul(b, st(a))),
            (R.mul(c, st(d)), R.mul(d, st(c))),
            (R.mul(st(a), c), R.mul(st(c), a)),
            (R.mul(st(b), d), R.mul(st(d), b)),
        )
        if any(x != y for x, y in pairs):
            return None
        det = self.star_det()
        alt = R.sub(R.mul(st(a), d), R.mul(st(c), b))
        if det != alt:
            return None
        if not (R.is_unit(det) and R.is_symmetric(det) and R.is_central(det)):
            return None
        return "SL" if det == R.one else "GL"

    def is_sl(self) -> bool:
        return self.membership() == "SL"

    def inverse(self) -> "StarMatrix":
        """Inverse via the star-adjugate (d*, -b*; -c*, a*) over det_*."""
        R = self.ring
        if self.membership() is None:
            raise ValueError("matrix is not in GL_*(2,A)")
        det_inv = R.inv(self.star_det())
        st = R.star
        inv = StarMatrix(
            R,
            R.mul(det_inv, st(self.d)),
            R.neg(R.mul(det_inv, st(self.b))),
            R.neg(R.mul(det_inv, st(self.c))),
            R.mul(det_inv, st(self.a)),
        )
        if inv * self != StarMatrix.identity(R):
            raise RuntimeError("adjugate inverse failed validation")
        return inv


@dataclass(frozen=True)
class BruhatWord:
    """Canonical word h(t) u(b1) [w u(c1) [w u(d1)]] for a group element."""

    cell: str  # 'B', 'BwB' or 'BwBwB'
    t: object
    b1: object
    c1: object = None
    d1: object = None

    @property
    def w_count(self) -> int:
        return {"B": 0, "BwB": 1, "BwBwB": 2}[self.cell]

    def matrix(self, ring) -> StarMatrix:
        g = StarMatrix.h(ring, self.t) * StarMatrix.u(ring, self.b1)
        if self.cell in ("BwB", "BwBwB"):
            g = g * StarMatrix.w(ring) * StarMatrix.u(ring, self.c1)
        if self.cell == "BwBwB":
            g = g * StarMatrix.w(ring) * StarMatrix.u(ring, self.d1)
        return g

    def generator_sequence(self, ring) -> list[StarMatrix]:
        gens = [StarMatrix.h(ring, self.t), StarMatrix.u(ring, self.b1)]
        if self.cell in ("BwB", "BwBwB"):
            gens += [StarMatrix.w(ring), StarMatrix.u(ring, self.c1)]
        if self.cell == "BwBwB":
            gens += [StarMatrix.w(ring), StarMatrix.u(ring, self.d1)]
        return gens

    def text(self, ring) -> str:
        def lit(a):
            if isinstance(ring, TruncatedPolynomialRing):
                return ring.poly_str(a)
            return str(a)

        s = f"h({lit(self.t)}) u({lit(self.b1)})"
        if self.cell in ("BwB", "BwBwB"):
            s += f" w u({lit(self.c1)})"
        if self.cell == "BwBwB":
            s += f" w u({lit(self.d1)})"
        return s


def _cell_of(ring, c) -> str:
    if c == ring.zero:
        return "B"
    if ring.is_unit(c):
        return "BwB"
    return "BwBwB"


def bruhat_normal_form(g: StarMatrix) -> BruhatWord:
    """Factor g in SL_*(2,A) into the canonical Bruhat word.

    Lower-left zero gives the triangular cell; a unit gives one w; over a
    local ring anything else is fixed by a single left multiplication by
    w, and over a matrix ring by w u(s) with s from the coprime search.
    The returned word is validated by exact re-multiplication.
    """
    ring = g.ring
    if not g.is_sl():
        raise ValueError("bruhat_normal_form needs an element of SL_*(2,A)")
    word = _normal_form_unchecked(g)
    if word.matrix(ring) != g:
        raise RuntimeError("bruhat normal form failed re-multiplication")
    return word


def _normal_form_unchecked(g: StarMatrix) -> BruhatWord:
    ring = g.ring
    cell = _cell_of(ring, g.c)
    if cell == "B":
        # g = h(a) u(a^-1 b); d is forced to (a*)^-1 by det_* = 1
        t = g.a
        return BruhatWord("B", t, ring.mul(ring.inv(t), g.b))
    if cell == "BwB":
        # g = h(-(c*)^-1) u(c* a) w u(c^-1 d); note +c*a, the sign that
        # actually re-multiplies under these generator conventions
        t = ring.neg(ring.inv(ring.star(g.c)))
        b1 = ring.mul(ring.star(g.c), g.a)
        c1 = ring.mul(ring.inv(g.c), g.d)
        return BruhatWord("BwB", t, b1, c1)
    # remaining cell: push g into BwB by left-multiplying with w u(s),
    # where s makes the new lower-left entry -(a + s c) a unit (s = 0
    # over a local ring since a is forced to be a unit there)
    s = ring.coprime_reduction(g.a, g.c)
    front = StarMatrix.w(ring) * StarMatrix.u(ring, s)
    inner = _normal_form_unchecked(front * g)
    if inner.cell != "BwB":
        raise RuntimeError("w-reduction did not reach the unit cell")
    # g = u(-s) w^-1 h(t') u(b1') w u(c1'); fold the prefix into h u form:
    # w^-1 h(t') = h(-1) w h(t') = h(-(t'*)^-1) w
    t0 = ring.neg(ring.inv(ring.star(inner.t)))
    b0 = ring.mul(ring.mul(ring.inv(t0), ring.neg(s)), ring.inv(ring.star(t0)))
    return BruhatWord("BwBwB", t0, b0, inner.b1, inner.c1)


def w_length(g: StarMatrix) -> int:
    """Number of w factors in the canonical word: 0, 1 or 2."""
    if not isinstance(g.ring, TruncatedPolynomialRing):
        raise ValueError("w_length is defined over truncated polynomial rings")
    if not g.is_sl():
        raise ValueError("w_length needs an element of SL_*(2,A)")
    return {"B": 0, "BwB": 1, "BwBwB": 2}[_cell_of(g.ring, g.c)]


def sample_element(ring, rng: random.Random) -> StarMatrix:
    """Random canonical word; uniform over the group when m = 1.

    For a field coefficient ring the two nonempty cells are weighted by
    their exact sizes, making the sample uniform.  Otherwise the cell is
    chosen uniformly among the three, which is enough for identity
    verification.
    """
    units = ring.elements("units")
    sym = ring.elements("symmetric")
    is_field = isinstance(ring, TruncatedPolynomialRing) and ring.m == 1
    if is_field:
        q = ring.size
        n_b = (q - 1) * q
        n_bwb = (q - 1) * q * q
        cell = "B" if rng.randrange(n_b + n_bwb) < n_b else "BwB"
    else:
        cell = rng.choice(["B", "BwB", "BwBwB"])
    t = rng.choice(units)
    b1 = rng.choice(sym)
    if cell == "B":
        word = BruhatWord("B", t, b1)
    elif cell == "BwB":
        word = BruhatWord("BwB", t, b1, rng.choice(sym))
    else:
        word = BruhatWord("BwBwB", t, b1, rng.choice(sym), rng.choice(sym))
    return word.matrix(ring)


def generators(ring) -> list[StarMatrix]:
    gens = [StarMatrix.h(ring, t) for t in ring.elements("units")]
    gens += [StarMatrix.u(ring, s) for s in ring.elements("symmetric")]
    gens.append(StarMatrix.w(ring))
    return gens


def enumerate_group(ring, limit: int = 200_000) -> list[StarMatrix]:
    """Breadth-first closure of the Bruhat generators under multiplication."""
    gens = generators(ring)
    seen = {StarMatrix.identity(ring)}
    frontier = [StarMatrix.identity(ring)]
    order = [StarMatrix.identity(ring)]
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                cand = g * s
                if cand not in seen:
                    seen.add(cand)
                    new.append(cand)
                    order.append(cand)
                    if len(seen) > limit:
                        raise ValueError(f"group closure exceeded limit {limit}")
        frontier = new
    return order


# -- presentation relations ------------------------------------------------


def _relation_instances(ring, max_instances: int, rng: random.Random):
    units = ring.elements("units")
    sym = ring.elements("symmetric")
    sym_units = ring.elements("symmetric_units")

    def take(pool):
        if len(pool) <= max_instances:
            return list(pool)
        return [rng.choice(pool) for _ in range(max_instances)]

    def take_pairs(pool_a, pool_b):
        if len(pool_a) * len(pool_b) <= max_instances:
            return [(x, y) for x in pool_a for y in pool_b]
        return [(rng.choice(pool_a), rng.choice(pool_b)) for _ in range(max_instances)]

    return {
        "unit_pairs": take_pairs(units, units),
        "sym_pairs": take_pairs(sym, sym),
        "unit_sym": take_pairs(units, sym),
        "units": take(units),
        "sym_units": take(sym_units),
    }


def verify_relations(ring, max_instances: int = 500, seed: int = 0) -> dict:
    """Check the six presentation relations, plus the alternate form of
    the last one, by exact matrix arithmetic.

    Returns a report dict with one entry per relation; failures carry the
    offending parameters.
    """
    rng = random.Random(seed)
    inst = _relation_instances(ring, max_instances, rng)
    H, U, W = StarMatrix.h, StarMatrix.u, StarMatrix.w
    w = W(ring)

    checks = []

    def record(name, cases):
        failures = []
        count = 0
        for params, lhs, rhs in cases:
            count += 1
            if lhs != rhs:
                failures.append({"params": repr(params)})
        checks.append(
            {
                "relation": name,
                "instances": count,
                "failures": failures,
                "passed": not failures,
            }
        )

    record(
        "h(t1)h(t2) = h(t1*t2)",
        (
            ((t1, t2), H(ring, t1) * H(ring, t2), H(ring, ring.mul(t1, t2)))
            for t1, t2 in inst["unit_pairs"]
        ),
    )
    record(
        "u(b1)u(b2) = u(b1+b2)",
        (
            ((b1, b2), U(ring, b1) * U(ring, b2), U(ring, ring.add(b1, b2)))
            for b1, b2 in inst["sym_pairs"]
        ),
    )
    record(
        "h(t)u(b) = u(t b t*)h(t)",
        (
            (
                (t, b),
                H(ring, t) * U(ring, b),
                U(ring, ring.mul(ring.mul(t, b), ring.star(t))) * H(ring, t),
            )
            for t, b in inst["unit_sym"]
        ),
    )
    record("w^2 = h(-1)", [((), w * w, H(ring, ring.neg(ring.one)))])
    record(
        "w h(t) = h((t*)^-1) w",
        (
            ((t,), w * H(ring, t), H(ring, ring.inv(ring.star(t))) * w)
            for t in inst["units"]
        ),
    )
    record(
        "u(t)wu(t^-1)wu(t) = wh(-t^-1)",
        (
            (
                (t,),
                U(ring, t) * w * U(ring, ring.inv(t)) * w * U(ring, t),
                w * H(ring, ring.neg(ring.inv(t))),
            )
            for t in inst["sym_units"]
        ),
    )
    record(
        "wu(t^-1)wu(t)wu(t^-1) = h(t)",
        (
            (
                (t,),
                w * U(ring, ring.inv(t)) * w * U(ring, t) * w * U(ring, ring.inv(t)),
                H(ring, t),
            )
            for t in inst["sym_units"]
        ),
    )

    return {
        "kind": "relations",
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


# -- doubling isomorphism ---------------------------------------------------


def doubling_projection(g: StarMatrix):
    """First-component projection SL_*(2, R(+)R) -> GL(2, R)."""
    ring = g.ring
    if not isinstance(ring, DoublingRing):
        raise ValueError("doubling_projection needs a doubling-ring matrix")
    if not g.is_sl():
        raise ValueError("doubling_projection needs an element of SL_*")
    proj = tuple(entry[0] for entry in g.entries())
    if not _invertible_2x2_over_matrix_ring(ring.base, proj):
        raise RuntimeError("projection of an SL_* element failed invertibility")
    return proj


def _invertible_2x2_over_matrix_ring(base: MatrixRing, quad) -> bool:
    n = base.n
    a, b, c, d = quad
    big = []
    for i in range(n):
        big.append(list(a[i]) + list(b[i]))
    for i in range(n):
        big.append(list(c[i]) + list(d[i]))
    return base._rank(big) == 2 * n
