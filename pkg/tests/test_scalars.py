import math

import pytest

from weilstar.scalars import TOL, approx_equal, invert, root_of_unity, sqrt_nonneg_int


def test_i_squared():
    i = root_of_unity(4, 1)
    assert approx_equal(i * i, -1)


def test_conjugate_of_cube_root():
    z = root_of_unity(3, 1)
    assert approx_equal(z.conjugate(), root_of_unity(3, 2))


def test_cube_roots_sum_to_zero():
    assert approx_equal(1 + root_of_unity(3, 1) + root_of_unity(3, 2), 0)


def test_one_plus_two_zeta3_is_i_sqrt3():
    assert approx_equal(1 + 2 * root_of_unity(3, 1), 1j * math.sqrt(3))


def test_periodicity_exact():
    for n in (2, 3, 5, 12):
        for k in range(-n, 2 * n):
            assert root_of_unity(n, k) == root_of_unity(n, k % n)


def test_identity_case():
    for n in (1, 2, 7, 30):
        assert root_of_unity(n, 0) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 16, 81])
def test_roots_sum_below_tolerance(n):
    total = sum(root_of_unity(n, k) for k in range(n))
    assert abs(total) <= TOL * n


def test_root_of_unity_rejects_zero_order():
    with pytest.raises(ValueError):
        root_of_unity(0, 1)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 27, 10**6])
def test_sqrt_squares_back(n):
    assert approx_equal(sqrt_nonneg_int(n) ** 2, n, tol=TOL * max(n, 1))


def test_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        sqrt_nonneg_int(-1)


def test_approx_equal_tolerance_band():
    assert approx_equal(1.0, 1.0 + 1e-12)
    assert not approx_equal(1j, -1j)
    assert approx_equal(1 + 2 * root_of_unity(3, 1), 1j * math.sqrt(3))


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        invert(0)
    assert approx_equal(invert(2j), -0.5j)
