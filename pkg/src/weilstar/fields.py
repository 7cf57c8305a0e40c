"""Arithmetic, enumeration and characters for F_q with q = p^e odd.

Elements are plain tuples of ints in [0, p), length e, entry i being the
coefficient of x^i in the residue class mod the defining polynomial.  The
canonical enumeration is lexicographic in those tuples (constant
coefficient most significant); it fixes the summation order of every
character sum downstream.
"""

from __future__ import annotations

from itertools import product

from .scalars import root_of_unity

FieldElt = tuple[int, ...]

MAX_EXT_DEGREE = 3


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FiniteField:
    """F_q, q = p^e, p an odd prime, e <= 3 with a user-supplied modulus.

    For e > 1 the modulus must be monic of degree e and irreducible over
    F_p; irreducibility is checked by brute-force root search, which is
    sufficient for degrees 2 and 3.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not _is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if e < 1 or e > MAX_EXT_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_EXT_DEGREE}], got {e}")
        if e == 1:
            modulus = (0, 1)
        else:
            if modulus is None:
                raise ValueError("extension fields need an explicit modulus")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if self._has_root(modulus, p):
                raise ValueError("modulus is reducible over F_p (has a root)")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self.zero: FieldElt = (0,) * e
        self.one: FieldElt = (1,) + (0,) * (e - 1)
        self._elements = sorted(product(range(p), repeat=e))
        self._index = {a: i for i, a in enumerate(self._elements)}
        self._squares = {self.mul(a, a) for a in self._elements if a != self.zero}
        self._trace_cache = {a: self._trace_raw(a) for a in self._elements}

    @staticmethod
    def _has_root(modulus, p: int) -> bool:
        for t in range(p):
            acc = 0
            for c in reversed(modulus):
                acc = (acc * t + c) % p
            if acc == 0:
                return True
        return False

    def __repr__(self):
        return f"FiniteField(p={self.p}, e={self.e})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # -- element plumbing ------------------------------------------------

    def elements(self) -> list[FieldElt]:
        return list(self._elements)

    def index(self, a: FieldElt) -> int:
        return self._index[a]

    def element_at(self, i: int) -> FieldElt:
        return self._elements[i]

    def from_int(self, n: int) -> FieldElt:
        return (n % self.p,) + (0,) * (self.e - 1)

    def lift(self, a: FieldElt) -> int:
        """Integer lift of a prime-subfield element."""
        if any(c for c in a[1:]):
            raise ValueError(f"{a} is not in the prime subfield")
        return a[0]

    # -- arithmetic ------------------------------------------------------

    def add(self, a: FieldElt, b: FieldElt) -> FieldElt:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: FieldElt, b: FieldElt) -> FieldElt:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: FieldElt) -> FieldElt:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: FieldElt, b: FieldElt) -> FieldElt:
        p, e = self.p, self.e
        if e == 1:
            return ((a[0] * b[0]) % p,)
        prod_ = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] += x * y
        # reduce x^(e+k) using the monic modulus
        for d in range(2 * e - 2, e - 1, -1):
            c = prod_[d] % p
            if c:
                for i in range(e):
                    prod_[d - e + i] -= c * self.modulus[i]
            prod_[d] = 0
        return tuple(c % p for c in prod_[:e])

    def pow(self, a: FieldElt, n: int) -> FieldElt:
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: FieldElt) -> FieldElt:
        if a == self.zero:
            raise ZeroDivisionError("inverting 0 in a finite field")
        if self.e == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self.pow(a, self.q - 2)

    # -- characters and squares -------------------------------------------

    def _trace_raw(self, a: FieldElt) -> int:
        acc = a
        frob = a
        for _ in range(self.e - 1):
            frob = self.pow(frob, self.p)
            acc = self.add(acc, frob)
        if any(c for c in acc[1:]):
            raise RuntimeError("field trace left the prime subfield")
        return acc[0]

    def trace(self, a: FieldElt) -> int:
        """Absolute trace F_q -> F_p, lifted to [0, p)."""
        return self._trace_cache[a]

    def psi(self, a: FieldElt) -> complex:
        """The fixed nontrivial additive character exp(2*pi*i*Tr(a)/p)."""
        return root_of_unity(self.p, self._trace_cache[a])

    def is_square(self, a: FieldElt) -> bool:
        if a == self.zero:
            raise ValueError("quadratic character is undefined at 0")
        return a in self._squares

    def legendre(self, a: FieldElt) -> int:
        return 1 if self.is_square(a) else -1
