import math

import numpy as np
import pytest
from scipy import special

from fasthankel import (
    asy_coeff,
    asy_coeffs,
    asy_cutoff,
    asy_error_bound,
    bessel_j,
    bessel_roots_j0,
    hankel_asy_eval,
    neumann_radius,
    taylor_cutoff,
    taylor_eval,
)

# extended-precision references (mpmath, 40 digits)
J0_AT_10 = -0.2459357644513483352
J0_AT_200 = -0.015437439930565091592
J0_AT_0165 = 0.99320532250516262361
J0_FIRST_ROOT = 2.4048255576957727686
J0_SECOND_ROOT = 5.5200781102863106496


def test_asy_coeff_base_values():
    assert asy_coeff(0, 0) == 1.0
    assert asy_coeff(0, 1) == -0.125
    assert asy_coeff(0, 2) == pytest.approx(0.0703125, abs=0)  # 9/128


def test_asy_coeff_product_formula():
    # running product must agree with the explicit factorial form
    for nu in (0, 1, 2, 5, 10):
        for m in range(1, 9):
            num = 1.0
            for i in range(1, m + 1):
                num *= 4.0 * nu * nu - (2 * i - 1) ** 2
            ref = num / (math.factorial(m) * 8.0 ** m)
            assert asy_coeff(nu, m) == pytest.approx(ref, rel=1e-13)


def test_asy_coeff_sign_alternation_nu0():
    signs = np.sign([asy_coeff(0, m) for m in range(1, 10)])
    assert np.array_equal(signs, [(-1.0) ** m for m in range(1, 10)])


def test_hankel_asy_eval_large_z_matches_reference():
    z = np.linspace(17.8, 60.0, 200)
    ref = special.j0(z)
    err = np.abs(hankel_asy_eval(0, 10, z) - ref)
    # truncation <= 1e-15 for z >= 17.8, plus a little roundoff
    assert err.max() <= 1.6e-15


def test_hankel_asy_eval_table_point():
    assert hankel_asy_eval(0, 3, 200.0) == pytest.approx(J0_AT_200, abs=1.1e-15)


def test_hankel_asy_eval_error_bounded_by_first_neglected_terms():
    got = hankel_asy_eval(0, 1, 10.0)
    bound = math.sqrt(2.0 / (10.0 * math.pi)) * (
        abs(asy_coeff(0, 2)) / 100.0 + abs(asy_coeff(0, 3)) / 1000.0
    )
    assert abs(got - J0_AT_10) <= bound


def test_asy_error_bound_values():
    # 17.8 is the tabulated (display-rounded) cutoff, so the bound sits at
    # eps up to rounding of the table entry
    assert asy_error_bound(0, 10, 17.8) == pytest.approx(1e-15, rel=0.10)
    assert asy_error_bound(0, 10, asy_cutoff(0, 10, 1e-15)) <= 1.001e-15
    assert asy_error_bound(10, 3, 2330.7) == pytest.approx(1e-15, rel=0.05)


def test_asy_error_bound_decays_in_z():
    z = np.array([20.0, 40.0, 80.0, 160.0, 320.0])
    vals = asy_error_bound(0, 5, z)
    assert np.all(np.diff(vals) < 0)


def test_asy_cutoff_spot_values():
    assert asy_cutoff(0, 10, 1e-15) == pytest.approx(17.8, abs=0.1)
    assert asy_cutoff(2, 6, 1e-15) == pytest.approx(30.8, abs=0.1)
    assert asy_cutoff(10, 5, 1e-15) == pytest.approx(149.0, abs=0.5)


def test_asy_cutoff_bound_holds_at_cutoff():
    for nu in (0, 1, 2, 10):
        for m in range(3, 13):
            for eps in (1e-3, 1e-8, 1e-15):
                s = asy_cutoff(nu, m, eps)
                assert asy_error_bound(nu, m, s) <= (1.0 + 1e-3) * eps


def test_taylor_eval_at_zero():
    assert taylor_eval(0, 1, 0.0) == 1.0
    assert taylor_eval(1, 1, 0.0) == 0.0


def test_taylor_eval_near_cutoff():
    assert taylor_eval(0, 5, 0.165) == pytest.approx(J0_AT_0165, abs=1e-15)


def test_taylor_cutoff_spot_values():
    assert taylor_cutoff(0, 5, 1e-15) == pytest.approx(0.165, abs=0.005)
    assert taylor_cutoff(10, 1, 1e-15) == pytest.approx(0.484, abs=0.005)
    assert taylor_cutoff(1, 9, 1e-15) == pytest.approx(1.411, abs=0.005)


def test_neumann_radius_spot_values():
    assert neumann_radius(10, 1e-15) == pytest.approx(0.020, rel=0.10)
    assert neumann_radius(3, 1e-15) == pytest.approx(4e-6, rel=0.10)


def test_bessel_j_special_points():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert abs(bessel_j(0, J0_FIRST_ROOT)) <= 1e-13


def test_bessel_j_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, -0.5)


def test_bessel_j_matches_scipy_on_dense_grid():
    z = np.linspace(0.0, 200.0, 4001)
    for nu in (0, 1, 2, 3, 5, 10, 20):
        err = np.abs(bessel_j(nu, z) - special.jv(nu, z))
        assert err.max() <= 1e-14, "nu=%d err=%g" % (nu, err.max())


def test_bessel_j_bounded_by_one():
    rng = np.random.default_rng(1234)
    z = rng.uniform(0.0, 500.0, 20000)
    for nu in (0, 1, 4, 9):
        assert np.max(np.abs(bessel_j(nu, z))) <= 1.0 + 1e-14


def test_bessel_j_consistent_with_branch_expansions():
    # beyond the eps-cutoffs the hybrid evaluator agrees with each branch
    rng = np.random.default_rng(7)
    for nu, m_terms, eps in ((0, 5, 1e-10), (2, 8, 1e-13), (10, 10, 1e-12)):
        s = asy_cutoff(nu, m_terms, eps)
        z = rng.uniform(s, 3 * s, 500)
        assert np.max(np.abs(bessel_j(nu, z) - hankel_asy_eval(nu, m_terms, z))) <= 2 * eps
    for nu, t_terms, eps in ((0, 4, 1e-10), (1, 6, 1e-13)):
        t = taylor_cutoff(nu, t_terms, eps)
        z = rng.uniform(0.0, t, 500)
        assert np.max(np.abs(bessel_j(nu, z) - taylor_eval(nu, t_terms, z))) <= 2 * eps


def test_neumann_addition_formula_bound_sampled():
    # |J_nu(z+dz) - sum_{|s|<K} J_{nu-s}(z) J_s(dz)| <= 5.2 (e|dz|/2)^K
    rng = np.random.default_rng(99)
    for _ in range(300):
        nu = int(rng.integers(-10, 11))
        z = rng.uniform(1e-3, 50.0)
        dz = rng.uniform(-1.0 / math.e, 1.0 / math.e) * 0.999
        k_terms = int(rng.integers(1, 11))
        total = 0.0
        for s in range(-k_terms + 1, k_terms):
            j1 = bessel_j(abs(nu - s), z) * (-1.0) ** (nu - s if nu < s else 0)
            j2 = bessel_j(abs(s), abs(dz))
            if s < 0:
                j2 *= (-1.0) ** s
            if dz < 0:
                j2 *= (-1.0) ** s
            total += j1 * j2
        target = bessel_j(abs(nu), abs(z + dz))
        if nu < 0:
            target *= (-1.0) ** nu
        if z + dz < 0:
            target *= (-1.0) ** nu
        bound = 5.2 * (math.e * abs(dz) / 2.0) ** k_terms
        assert abs(target - total) <= bound + 5e-14


def test_roots_first_two():
    table = bessel_roots_j0(2)
    lo = 3 * math.pi / 4
    assert lo <= table.roots[0] <= lo + 1.0 / (6 * math.pi)
    assert table.roots[1] == pytest.approx(J0_SECOND_ROOT, abs=1e-12)


def test_roots_envelope_and_residuals():
    table = bessel_roots_j0(2000)
    n = np.arange(1, 2001)
    assert np.all(np.diff(table.roots) > 0)
    assert np.max(np.abs(bessel_j(0, table.roots))) <= 1e-13
    # the envelope is sharp to O(n^-3), which beyond n ~ 10^3 is below the
    # ulp of the root itself; allow that much rounding slack
    slack = 4 * np.finfo(float).eps * table.roots
    assert np.all(table.perturbations >= -slack)
    assert np.all(table.perturbations <= 1.0 / (8 * (n - 0.25) * math.pi) + slack)


def test_ratio_perturbation_bound():
    table = bessel_roots_j0(501)
    n = 500
    k = np.arange(1, n + 1)
    e = table.ratio_perturbation(k, n)
    bound = 1.0 / (8 * (n + 0.75) * (k - 0.25) * math.pi ** 2)
    assert np.all(np.abs(e) <= bound)


def test_ratio_perturbation_requires_enough_roots():
    table = bessel_roots_j0(10)
    with pytest.raises(ValueError):
        table.ratio_perturbation(1, 10)


def test_roots_count_validation():
    with pytest.raises(ValueError):
        bessel_roots_j0(0)
