"""Finite involutive rings: truncated polynomials, matrix rings, doubles.

Three concrete rings with involutive anti-automorphisms are provided:

* ``TruncatedPolynomialRing`` -- A = F_q[x]/(x^m) with either the identity
  involution or the sign involution x |-> -x.  This is the local,
  non-semisimple coefficient ring used for all Weil constructions.
* ``MatrixRing`` -- M(n, F_q) with the transpose, whose 2x2 star-group is
  the symplectic group Sp(2n, q).
* ``DoublingRing`` -- R (+) R with (x, y)* = (y^T, x^T) over a matrix
  ring R, whose star-group is isomorphic to GL(2, R).

Elements are immutable nested tuples of field coefficients, so they hash
and compare structurally; all arithmetic goes through the ring object.
The canonical enumeration order (lexicographic on the flattened
coefficient tuples) is load-bearing: deterministic first-hit searches and
every character-sum order downstream refer to it.
"""

from __future__ import annotations

from itertools import product

from .fields import FieldElt, FiniteField

MAX_ENUM = 10**6

SUBSETS = ("all", "symmetric", "units", "symmetric_units", "central_symmetric_units")


class InvolutiveRing:
    """Shared plumbing for the concrete rings below."""

    size: int
    field: FiniteField

    # concrete rings implement: zero, one, add, neg, mul, star, is_unit,
    # inv, is_central, from_int

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_symmetric(self, a) -> bool:
        return self.star(a) == a

    def elements(self, subset: str = "all") -> list:
        if subset not in SUBSETS:
            raise ValueError(f"unknown subset {subset!r}")
        if self.size > MAX_ENUM:
            raise ValueError(f"ring of size {self.size} exceeds enumeration guard {MAX_ENUM}")
        cache = getattr(self, "_subset_cache", None)
        if cache is None:
            cache = self._subset_cache = {}
        if subset not in cache:
            if subset == "all":
                elems = self._all_elements()
            else:
                pred = {
                    "symmetric": self.is_symmetric,
                    "units": self.is_unit,
                    "symmetric_units": lambda a: self.is_symmetric(a) and self.is_unit(a),
                    "central_symmetric_units": lambda a: self.is_symmetric(a)
                    and self.is_central(a)
                    and self.is_unit(a),
                }[subset]
                elems = [a for a in self.elements("all") if pred(a)]
            cache[subset] = elems
        return list(cache[subset])

    def index(self, a) -> int:
        idx = getattr(self, "_index_cache", None)
        if idx is None:
            idx = self._index_cache = {a: i for i, a in enumerate(self.elements("all"))}
        return idx[a]

    def element_at(self, i: int):
        return self.elements("all")[i]

    def star_commute(self, a, b) -> bool:
        return self.mul(self.star(a), b) == self.mul(self.star(b), a)

    def coprime_reduction(self, a, c):
        """First symmetric s (canonical order) with a + s*c invertible.

        Requires a, c coprime (generating A as a left ideal); existence of
        the shift is guaranteed when they also star-commute, which holds
        for every column of an SL_* matrix.  The scan itself only needs
        coprimality, so star-commutation is reported only on failure.
        """
        if not self._coprime(a, c):
            raise ValueError("coprime_reduction: inputs are not coprime")
        for s in self.elements("symmetric"):
            cand = self.add(a, self.mul(s, c))
            if self.is_unit(cand):
                return s
        raise ValueError(
            "coprime_reduction: no symmetric shift found"
            + ("" if self.star_commute(a, c) else " (inputs do not star-commute)")
        )

    def symmetric_unit_shift(self, a, b):
        """First symmetric unit x with a - x^-1 and b + x both symmetric units."""
        if not (self.is_symmetric(a) and self.is_symmetric(b)):
            raise ValueError("symmetric_unit_shift: inputs must be symmetric")
        if self.is_unit(a) or self.is_unit(b):
            raise ValueError("symmetric_unit_shift: inputs must be non-units")
        for x in self.elements("symmetric_units"):
            u = self.sub(a, self.inv(x))
            v = self.add(b, x)
            if self.is_unit(u) and self.is_unit(v) and self.is_symmetric(u) and self.is_symmetric(v):
                return x
        raise ValueError("symmetric_unit_shift: no shift found")

    def _coprime(self, a, c) -> bool:
        raise NotImplementedError


class TruncatedPolynomialRing(InvolutiveRing):
    """A = F_q[x]/(x^m), elements as length-m tuples of field elements.

    The ring is local: a is a unit iff its constant term is nonzero.
    The sign involution sends x to -x, so symmetric elements are exactly
    those supported in even degrees.
    """

    INVOLUTIONS = ("negate_x", "identity")

    def __init__(self, field: FiniteField, m: int, involution: str = "negate_x"):
        if m < 1:
            raise ValueError("m must be positive")
        if involution not in self.INVOLUTIONS:
            raise ValueError(f"unknown involution {involution!r}")
        self.field = field
        self.m = m
        self.involution = involution
        self.size = field.q**m
        self.zero = (field.zero,) * m
        self.one = (field.one,) + (field.zero,) * (m - 1)

    def __repr__(self):
        return f"TruncatedPolynomialRing(q={self.field.q}, m={self.m}, involution={self.involution!r})"

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedPolynomialRing)
            and self.field == other.field
            and (self.m, self.involution) == (other.m, other.involution)
        )

    def __hash__(self):
        return hash((self.field, self.m, self.involution))

    def _all_elements(self):
        return [tuple(c) for c in product(self.field.elements(), repeat=self.m)]

    def x(self):
        if self.m < 2:
            raise ValueError("x is zero when m = 1")
        return (self.field.zero, self.field.one) + (self.field.zero,) * (self.m - 2)

    def from_int(self, n: int):
        return (self.field.from_int(n),) + (self.field.zero,) * (self.m - 1)

    def from_coeff_ints(self, coeffs) -> tuple:
        cs = [self.field.from_int(c) for c in coeffs]
        if len(cs) > self.m:
            raise ValueError("too many coefficients")
        cs += [self.field.zero] * (self.m - len(cs))
        return tuple(cs)

    def add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.field
        return tuple(F.neg(x) for x in a)

    def mul(self, a, b):
        F = self.field
        m = self.m
        out = [F.zero] * m
        for i, x in enumerate(a):
            if x == F.zero:
                continue
            for j in range(m - i):
                y = b[j]
                if y != F.zero:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def star(self, a):
        if self.involution == "identity":
            return a
        F = self.field
        return tuple(c if i % 2 == 0 else F.neg(c) for i, c in enumerate(a))

    def is_unit(self, a) -> bool:
        return a[0] != self.field.zero

    def is_central(self, a) -> bool:
        return True

    def inv(self, a):
        """Power-series inversion truncated at degree m."""
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit (zero constant term)")
        F = self.field
        c0inv = F.inv(a[0])
        out = [c0inv] + [F.zero] * (self.m - 1)
        for k in range(1, self.m):
            acc = F.zero
            for i in range(1, k + 1):
                acc = F.add(acc, F.mul(a[i], out[k - i]))
            out[k] = F.neg(F.mul(c0inv, acc))
        return tuple(out)

    def _coprime(self, a, c) -> bool:
        # local ring: the ideal (a, c) is everything iff one of them is a unit
        return self.is_unit(a) or self.is_unit(c)

    # -- structures specific to the Weil construction ----------------------

    def tr(self, a) -> FieldElt:
        """Top-coefficient linear form: the x^(m-1) coefficient."""
        return a[self.m - 1]

    def q_form(self, t):
        """Q(t) = t* t."""
        return self.mul(self.star(t), t)

    def b_form(self, t, s):
        """B_Q(t, s) = t* s + t s*."""
        return self.add(self.mul(self.star(t), s), self.mul(t, self.star(s)))

    def psi_bar(self, a) -> complex:
        """Additive character of A: psi composed with the top coefficient."""
        return self.field.psi(self.tr(a))

    def poly_str(self, a) -> str:
        F = self.field
        terms = []
        for i, c in enumerate(a):
            if c == F.zero:
                continue
            if F.e == 1:
                cs = str(c[0])
            else:
                cs = "(" + ":".join(str(d) for d in c) + ")"
            if i == 0:
                terms.append(cs)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                terms.append(xs if cs == "1" else f"{cs}{xs}")
        return " + ".join(terms) if terms else "0"


class MatrixRing(InvolutiveRing):
    """M(n, F_q) with the transpose involution; elements are row tuples."""

    def __init__(self, field: FiniteField, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.field = field
        self.n = n
        self.size = field.q ** (n * n)
        z, o = field.zero, field.one
        self.zero = tuple(tuple(z for _ in range(n)) for _ in range(n))
        self.one = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))

    def __repr__(self):
        return f"MatrixRing(q={self.field.q}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, MatrixRing) and self.field == other.field and self.n == other.n

    def __hash__(self):
        return hash((self.field, self.n))

    def _all_elements(self):
        n = self.n
        flat = product(self.field.elements(), repeat=n * n)
        return [tuple(tuple(t[i * n + j] for j in range(n)) for i in range(n)) for t in flat]

    def from_int(self, k: int):
        c = self.field.from_int(k)
        z = self.field.zero
        n = self.n
        return tuple(tuple(c if i == j else z for j in range(n)) for i in range(n))

    def from_rows(self, rows):
        return tuple(tuple(self.field.from_int(c) for c in row) for row in rows)

    def add(self, a, b):
        F = self.field
        return tuple(tuple(F.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def neg(self, a):
        F = self.field
        return tuple(tuple(F.neg(x) for x in row) for row in a)

    def mul(self, a, b):
        F = self.field
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = F.zero
                for k in range(n):
                    acc = F.add(acc, F.mul(a[i][k], b[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def star(self, a):
        n = self.n
        return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))

    def is_central(self, a) -> bool:
        z = self.field.zero
        c = a[0][0]
        n = self.n
        return all(a[i][j] == (c if i == j else z) for i in range(n) for j in range(n))

    def is_unit(self, a) -> bool:
        return self._rank([list(row) for row in a]) == self.n

    def inv(self, a):
        """Gauss-Jordan inverse over the field."""
        F = self.field
        n = self.n
        aug = [list(a[i]) + list(self.one[i]) for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != F.zero), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            scale = F.inv(aug[col][col])
            aug[col] = [F.mul(scale, v) for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != F.zero:
                    f = aug[r][col]
                    aug[r] = [F.sub(v, F.mul(f, w)) for v, w in zip(aug[r], aug[col])]
        return tuple(tuple(row[n:]) for row in aug)

    def _rank(self, rows) -> int:
        F = self.field
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        rank = 0
        for col in range(ncols):
            piv = next((r for r in range(rank, len(rows)) if rows[r][col] != F.zero), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            scale = F.inv(rows[rank][col])
            rows[rank] = [F.mul(scale, v) for v in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col] != F.zero:
                    f = rows[r][col]
                    rows[r] = [F.sub(v, F.mul(f, w)) for v, w in zip(rows[r], rows[rank])]
            rank += 1
        return rank

    def _coprime(self, a, c) -> bool:
        # (a, c) generate A as a left ideal iff the stacked 2n x n matrix
        # has full column rank
        stacked = [list(row) for row in a] + [list(row) for row in c]
        return self._rank(stacked) == self.n


class DoublingRing(InvolutiveRing):
    """R (+) R with componentwise operations and (x, y)* = (y^T, x^T).

    Supported over matrix-ring bases only; the transpose plays the role of
    the anti-isomorphism between the two summands.  SL_* over this ring is
    isomorphic to GL(2, R) via first-component projection.
    """

    def __init__(self, base: MatrixRing):
        if not isinstance(base, MatrixRing):
            raise TypeError("DoublingRing is supported over MatrixRing bases only")
        self.base = base
        self.field = base.field
        self.size = base.size**2
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.one)

    def __repr__(self):
        return f"DoublingRing(base={self.base!r})"

    def __eq__(self, other):
        return isinstance(other, DoublingRing) and self.base == other.base

    def __hash__(self):
        return hash(("doubling", self.base))

    def _all_elements(self):
        base = self.base.elements("all")
        return [(a, b) for a in base for b in base]

    def from_int(self, k: int):
        c = self.base.from_int(k)
        return (c, c)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def mul(self, a, b):
        return (self.base.mul(a[0], b[0]), self.base.mul(a[1], b[1]))

    def star(self, a):
        return (self.base.star(a[1]), self.base.star(a[0]))

    def is_unit(self, a) -> bool:
        return self.base.is_unit(a[0]) and self.base.is_unit(a[1])

    def is_central(self, a) -> bool:
        return self.base.is_central(a[0]) and self.base.is_central(a[1])

    def inv(self, a):
        return (self.base.inv(a[0]), self.base.inv(a[1]))

    def _coprime(self, a, c) -> bool:
        return self.base._coprime(a[0], c[0]) and self.base._coprime(a[1], c[1])
