import math
import random

import numpy as np
import pytest

from weilstar.fields import FiniteField
from weilstar.groups import StarMatrix, bruhat_normal_form, enumerate_group, sample_element
from weilstar.rings import TruncatedPolynomialRing
from weilstar.scalars import approx_equal
from weilstar.symplectic import SelfDualModule, enumerate_lagrangians
from weilstar.bundle import LagrangianBundle
from weilstar.weil import (
    BruhatWeilRepresentation,
    GeometricWeilRepresentation,
    character_inner_product,
    cocycle,
    compare_representations,
    delta,
    gauss_sum_ratio,
    omega,
    quadratic_gauss_sum,
    rep_character,
    sign_character,
    squares_subgroup_character,
    verify_bruhat_homomorphism,
    verify_operator_relations,
    verify_projective_law,
    w_comparison_constant,
)


@pytest.fixture(scope="module")
def geom1(bun1):
    return GeometricWeilRepresentation(bun1)


@pytest.fixture(scope="module")
def geom3(bun3):
    return GeometricWeilRepresentation(bun3)


@pytest.fixture(scope="module")
def rep1(a1):
    return BruhatWeilRepresentation(a1)


@pytest.fixture(scope="module")
def rep3(a3):
    return BruhatWeilRepresentation(a3)


# -- Gauss sums, alpha, omega -----------------------------------------------------


def test_gauss_sum_values_m1(a1):
    assert quadratic_gauss_sum(a1, a1.zero) == 3
    assert approx_equal(quadratic_gauss_sum(a1, a1.from_int(1)), 1j * math.sqrt(3))
    assert approx_equal(quadratic_gauss_sum(a1, a1.from_int(2)), -1j * math.sqrt(3))


def test_gauss_sum_at_zero_is_ring_size(a1, a3, a5):
    for ring in (a1, a3, a5):
        assert quadratic_gauss_sum(ring, ring.zero) == ring.size


def test_alpha_examples(a1, a3):
    assert approx_equal(sign_character(a1, a1.one), 1)
    assert approx_equal(sign_character(a1, a1.from_int(2)), -1)
    value = sign_character(a3, a3.from_coeff_ints([1, 0, 1]))
    assert approx_equal(abs(value), 1)
    with pytest.raises(ValueError):
        sign_character(a3, a3.x())
    with pytest.raises(ValueError):
        sign_character(a3, a3.from_coeff_ints([0, 0, 1]))


@pytest.mark.parametrize("p,m", [(3, 1), (3, 3), (5, 1), (5, 3)])
def test_alpha_is_the_sign_character(p, m):
    ring = TruncatedPolynomialRing(FiniteField(p), m, "negate_x")
    expected = squares_subgroup_character(ring)
    units = ring.elements("symmetric_units")
    for u in units:
        assert approx_equal(sign_character(ring, u), expected[u])
    for u in units:
        for v in units:
            assert approx_equal(
                sign_character(ring, ring.mul(u, v)),
                sign_character(ring, u) * sign_character(ring, v),
            )


def test_omega_values():
    assert approx_equal(omega(FiniteField(3)), 1j)
    assert approx_equal(omega(FiniteField(5)), 1)
    assert approx_equal(omega(FiniteField(7)), 1j)


@pytest.mark.parametrize("p,m", [(3, 1), (3, 3), (5, 1), (5, 3)])
def test_omega_square_is_alpha_minus_one(p, m):
    field = FiniteField(p)
    ring = TruncatedPolynomialRing(field, m, "negate_x")
    om = omega(field)
    assert approx_equal(om**4, 1)
    assert approx_equal(om**2, sign_character(ring, ring.neg(ring.one)))


def test_w_comparison_constant(a1, a3):
    assert approx_equal(w_comparison_constant(a1), 1j)  # omega itself at m=1
    assert approx_equal(w_comparison_constant(a3), -1j)  # alpha(-1) * omega
    ring53 = TruncatedPolynomialRing(FiniteField(5), 3, "negate_x")
    assert approx_equal(w_comparison_constant(ring53), omega(FiniteField(5)))


# -- Bruhat operators --------------------------------------------------------------


def test_op_u_is_diagonal(rep3, a3):
    for b in a3.elements("symmetric")[:4]:
        mat = rep3.op_u(b)
        assert np.allclose(mat, np.diag(np.diag(mat)))
        for i, a in enumerate(rep3.points):
            assert approx_equal(mat[i, i], a3.psi_bar(a3.mul(b, a3.q_form(a))))


def test_op_h_is_signed_permutation(rep3, a3):
    for t in a3.elements("units")[:4]:
        mat = rep3.op_h(t)
        assert np.allclose(np.abs(mat) * (np.abs(mat) > 0), np.abs(mat))
        assert np.count_nonzero(mat) == rep3.dim
        alpha_t = gauss_sum_ratio(a3, t)
        for i, a in enumerate(rep3.points):
            assert approx_equal(mat[i, a3.index(a3.mul(a, t))], alpha_t)


def test_op_w_squares_to_h_minus_one(rep1, rep3, a1, a3):
    for rep, ring in ((rep1, a1), (rep3, a3)):
        lhs = rep.op_w() @ rep.op_w()
        rhs = rep.op_h(ring.neg(ring.one))
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_operators_unitary(rep3, a3):
    rng = random.Random(0)
    eye = np.eye(rep3.dim)
    for _ in range(20):
        g = sample_element(a3, rng)
        mat = rep3.op(g)
        assert np.max(np.abs(mat @ np.conj(mat.T) - eye)) < 1e-9


def test_operator_relations_all_pass(a1, a3):
    for ring in (a1, a3):
        report = verify_operator_relations(ring, max_instances=400, seed=0)
        assert report["passed"], report
        assert len(report["checks"]) == 7


def test_true_representation_exhaustive_m1(a1):
    report = verify_bruhat_homomorphism(a1, "exhaustive", tol=1e-8)
    assert report["passed"]
    assert report["pairs"] == 24 * 24


def test_true_representation_sampled_m3(a3):
    report = verify_bruhat_homomorphism(a3, "sampled", samples=150, seed=0, tol=1e-8)
    assert report["passed"]


def test_same_element_different_words(rep3, a3):
    """Two distinct words for one element give the same operator."""
    t = a3.from_coeff_ints([2, 0, 1])
    b = a3.from_coeff_ints([1, 0, 2])
    word_a = [StarMatrix.h(a3, t), StarMatrix.u(a3, b)]
    word_b = [
        StarMatrix.u(a3, a3.mul(a3.mul(t, b), a3.star(t))),
        StarMatrix.h(a3, t),
    ]
    g_a = word_a[0] * word_a[1]
    g_b = word_b[0] * word_b[1]
    assert g_a == g_b
    op_a = rep3.op_h(t) @ rep3.op_u(b)
    op_b = rep3.op_u(a3.mul(a3.mul(t, b), a3.star(t))) @ rep3.op_h(t)
    assert np.max(np.abs(op_a - op_b)) < 1e-9
    assert np.max(np.abs(rep3.op(g_a) - op_a)) < 1e-9


# -- geometric operators -----------------------------------------------------------


def test_sigma_generator_closed_forms(geom3, a3):
    pts = a3.elements("all")
    qm = len(pts)
    sw = geom3.sigma(StarMatrix.w(a3))
    expect = np.empty((qm, qm), dtype=complex)
    two = a3.from_int(2)
    for i, c in enumerate(pts):
        for j, a in enumerate(pts):
            expect[i, j] = a3.psi_bar(a3.mul(two, a3.mul(a3.star(c), a)))
    assert np.max(np.abs(sw - expect / math.sqrt(qm))) < 1e-9

    t = a3.elements("units")[5]
    sh = geom3.sigma(StarMatrix.h(a3, t))
    perm = np.zeros((qm, qm), dtype=complex)
    for i, c in enumerate(pts):
        perm[i, a3.index(a3.mul(t, c))] = 1.0
    assert np.max(np.abs(sh - perm)) < 1e-9

    b = a3.elements("symmetric")[5]
    su = geom3.sigma(StarMatrix.u(a3, b))
    diag = np.diag([a3.psi_bar(a3.mul(b, a3.mul(c, a3.star(c)))) for c in pts])
    assert np.max(np.abs(su - diag)) < 1e-9


def test_sigma_unitary(geom3, a3):
    rng = random.Random(1)
    eye = np.eye(geom3.dim)
    for _ in range(15):
        mat = geom3.sigma(sample_element(a3, rng))
        assert np.max(np.abs(mat @ np.conj(mat.T) - eye)) < 1e-9


# -- cocycle -----------------------------------------------------------------------


def test_cocycle_identity_cases(geom3, a3):
    e = StarMatrix.identity(a3)
    rng = random.Random(2)
    assert approx_equal(cocycle(geom3, e, e).value, 1)
    for _ in range(10):
        g = sample_element(a3, rng)
        assert approx_equal(cocycle(geom3, e, g).value, 1)
        assert approx_equal(cocycle(geom3, g, e).value, 1)


def test_cocycle_formula_equals_operational(geom1, geom3, a1, a3):
    for geom, ring in ((geom1, a1), (geom3, a3)):
        rng = random.Random(3)
        for _ in range(40):
            g = sample_element(ring, rng)
            h = sample_element(ring, rng)
            formula = cocycle(geom, g, h, "formula").value
            operational = cocycle(geom, g, h, "operational")
            assert abs(formula - operational.value) < 1e-9
            assert operational.residual < 1e-6
            assert abs(abs(formula) - 1) < 1e-9


def test_cocycle_ww_value_m1(geom1, a1):
    w = StarMatrix.w(a1)
    assert approx_equal(cocycle(geom1, w, w, "formula").value, 1)
    assert approx_equal(cocycle(geom1, w, w, "operational").value, 1)


def test_printed_cocycle_display_is_the_conjugate(geom1, a1):
    """The reversed-triple multiplier (the form displayed alongside the
    contraction) is the complex conjugate of the operational cocycle; they
    differ on pairs where the cocycle is not real."""
    elements = enumerate_group(a1)
    differs = 0
    for g in elements:
        for h in elements:
            c = geom1.cocycle_formula(g, h)
            printed = geom1.cocycle_reversed_triple(g, h)
            assert abs(np.conj(printed) - c) < 1e-9
            if abs(printed - c) > 1e-9:
                differs += 1
    assert differs > 0


def test_projective_law(geom1, geom3):
    for geom in (geom1, geom3):
        report = verify_projective_law(geom, samples=120, seed=0)
        assert report["passed"], report


# -- delta and the comparison ------------------------------------------------------


def test_delta_examples_m1(a1):
    om = omega(a1.field)
    assert approx_equal(delta(a1, StarMatrix.identity(a1)), 1)
    assert approx_equal(delta(a1, StarMatrix.w(a1)), om)
    assert approx_equal(delta(a1, StarMatrix.h(a1, a1.from_int(2))), -1)


def test_delta_on_two_w_cell_m3(a3):
    x2 = a3.from_coeff_ints([0, 0, 1])
    g = StarMatrix(a3, a3.from_int(-1), a3.zero, x2, a3.from_int(-1))
    value = delta(a3, g)
    assert abs(abs(value) - 1) < 1e-9
    # the value carries a Gauss-sum factor: it is not alpha(-t) alone
    word = bruhat_normal_form(g)
    bare = gauss_sum_ratio(a3, a3.neg(word.t))
    assert abs(value - bare) > 0.5


def test_comparison_report_m1(a1, bun1):
    report = compare_representations(a1, bun1, samples=200, seed=0)
    assert report["passed"], report
    assert report["w_constant_is_omega"] is True
    assert report["coboundary_orientation"] == "c(g,h) delta(g) delta(h) = delta(gh)"


def test_comparison_report_m3(a3, bun3):
    report = compare_representations(a3, bun3, samples=200, seed=0)
    assert report["passed"], report
    # the w-constant at q = 3, m = 3 is alpha(-1) * omega = -i, not omega
    assert report["w_constant_is_omega"] is False
    assert approx_equal(
        complex(report["w_constant"]["re"], report["w_constant"]["im"]), -1j
    )
    assert report["coboundary_orientation"] == "c(g,h) delta(g) delta(h) = delta(gh)"


def test_rho_w_printed_identity_status(rep1, geom1, rep3, geom3, a1, a3):
    """rho(w) = omega sigma_w holds verbatim at m=1 and fails at m=3 by
    exactly the alpha(-1) factor; the corrected identity holds at both."""
    for rep, geom, ring, printed_holds in (
        (rep1, geom1, a1, True),
        (rep3, geom3, a3, False),
    ):
        om = omega(ring.field)
        wc = w_comparison_constant(ring)
        rho_w = rep.op_w()
        sigma_w = geom.sigma(StarMatrix.w(ring))
        assert np.max(np.abs(rho_w - wc * sigma_w)) < 1e-9
        printed_dev = float(np.max(np.abs(rho_w - om * sigma_w)))
        assert (printed_dev < 1e-9) == printed_holds


# -- characters --------------------------------------------------------------------


def test_characters_m1(a1, rep1, geom1):
    elements = enumerate_group(a1)
    chi = rep_character(rep1.op, elements)
    assert approx_equal(chi[StarMatrix.identity(a1)], 3)
    ip = character_inner_product(chi, chi)
    assert approx_equal(ip, 2)
    for g in elements:
        assert approx_equal(chi[g.inverse()], np.conj(chi[g]))
    chi_geom = rep_character(geom1.sigma, elements)
    assert approx_equal(chi_geom[StarMatrix.identity(a1)], 3)
    assert approx_equal(character_inner_product(chi_geom, chi_geom), 2)


def test_character_inner_product_rejects_mismatched_domains(a1, rep1):
    elements = enumerate_group(a1)
    chi = rep_character(rep1.op, elements)
    partial = {g: chi[g] for g in elements[:10]}
    with pytest.raises(ValueError):
        character_inner_product(chi, partial)
