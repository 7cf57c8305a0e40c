"""Complex scalar helpers shared by every character sum and operator.

All values produced by the package (characters, Gauss sums, cocycles,
operator entries) are machine-precision complex numbers.  Equality is
always judged against the single global tolerance ``TOL``; sums stay far
below it because every sum in the package has at most q^(2m) unit-modulus
terms.
"""

from __future__ import annotations

import cmath
import math

TOL = 1e-9

_TWO_PI = 2.0 * math.pi


def root_of_unity(n: int, k: int) -> complex:
    """exp(2*pi*i*k/n), reduced mod n first so equal exponents give equal bits."""
    if n < 1:
        raise ValueError(f"root_of_unity needs n >= 1, got {n}")
    k = k % n
    if k == 0:
        return 1.0 + 0.0j
    return cmath.exp(1j * _TWO_PI * k / n)


def sqrt_nonneg_int(n: int) -> float:
    """Square root of a set cardinality; radicands are never negative here."""
    if n < 0:
        raise ValueError(f"sqrt_nonneg_int needs n >= 0, got {n}")
    return math.sqrt(n)


def approx_equal(a: complex, b: complex, tol: float = TOL) -> bool:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return abs(a - b) <= tol


def invert(a: complex) -> complex:
    if a == 0:
        raise ZeroDivisionError("inverting zero scalar (degenerate value)")
    return 1.0 / a
