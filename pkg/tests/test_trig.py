import numpy as np
import pytest

from fasthankel import DCT1, DST1, apply, make_plan


def dct1_matrix(n):
    k = np.arange(n)
    return np.cos(np.outer(k, k) * np.pi / (n - 1))


def dst1_matrix(n):
    k = np.arange(1, n + 1)
    return np.sin(np.outer(k, k) * np.pi / (n + 1))


def test_dct1_2x2():
    plan = make_plan(2, DCT1)
    got = np.column_stack([apply(plan, e) for e in np.eye(2)])
    assert np.allclose(got, [[1.0, 1.0], [1.0, -1.0]], atol=1e-15)


def test_dst1_1x1():
    plan = make_plan(1, DST1)
    assert apply(plan, np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-15)


def test_dct1_first_basis_vector_gives_ones():
    plan = make_plan(9, DCT1)
    e0 = np.zeros(9)
    e0[0] = 1.0
    assert np.allclose(apply(plan, e0), np.ones(9), atol=1e-14)


def test_dst1_3x3_first_column():
    plan = make_plan(3, DST1)
    got = apply(plan, np.array([1.0, 0.0, 0.0]))
    ref = np.sin(np.array([1, 2, 3]) * np.pi / 4)
    assert np.allclose(got, ref, atol=1e-15)


@pytest.mark.parametrize("n", list(range(2, 65)))
def test_dct1_matches_matrix_oracle(n):
    plan = make_plan(n, DCT1)
    rng = np.random.default_rng(n)
    v = rng.standard_normal(n)
    err = np.abs(apply(plan, v) - dct1_matrix(n) @ v).max()
    assert err <= 1e-13 * np.abs(v).sum()


@pytest.mark.parametrize("n", list(range(1, 65)))
def test_dst1_matches_matrix_oracle(n):
    plan = make_plan(n, DST1)
    rng = np.random.default_rng(n)
    v = rng.standard_normal(n)
    err = np.abs(apply(plan, v) - dst1_matrix(n) @ v).max()
    assert err <= 1e-13 * np.abs(v).sum()


@pytest.mark.parametrize("n,kind", [(500, DCT1), (500, DST1), (1024, DST1)])
def test_large_sizes_match_oracle(n, kind):
    plan = make_plan(n, kind)
    rng = np.random.default_rng(3 * n)
    v = rng.standard_normal(n)
    mat = dct1_matrix(n) if kind == DCT1 else dst1_matrix(n)
    err = np.abs(apply(plan, v) - mat @ v).max()
    assert err <= 1e-13 * np.abs(v).sum()


def test_linearity():
    plan = make_plan(40, DST1)
    rng = np.random.default_rng(5)
    u = rng.standard_normal(40)
    v = rng.standard_normal(40)
    lhs = apply(plan, 2.5 * u - 1.25 * v)
    rhs = 2.5 * apply(plan, u) - 1.25 * apply(plan, v)
    assert np.abs(lhs - rhs).max() <= 1e-13 * max(1.0, np.abs(rhs).max())


def test_dst1_involution():
    n = 51
    plan = make_plan(n, DST1)
    v = np.random.default_rng(8).standard_normal(n)
    twice = apply(plan, apply(plan, v))
    ref = (n + 1) / 2.0 * v
    assert np.abs(twice - ref).max() <= 1e-12 * np.abs(ref).max()


def test_complex_input():
    n = 33
    rng = np.random.default_rng(44)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    for kind, mat in ((DCT1, dct1_matrix(n)), (DST1, dst1_matrix(n))):
        plan = make_plan(n, kind)
        err = np.abs(apply(plan, v) - mat @ v).max()
        assert err <= 1e-13 * np.abs(v).sum()


def test_batched_rows():
    n = 20
    plan = make_plan(n, DCT1)
    rng = np.random.default_rng(2)
    v = rng.standard_normal((5, n))
    got = apply(plan, v)
    for i in range(5):
        assert np.allclose(got[i], apply(plan, v[i]), atol=1e-14)


def test_plan_validation():
    with pytest.raises(ValueError):
        make_plan(1, DCT1)
    with pytest.raises(ValueError):
        make_plan(0, DST1)
    with pytest.raises(ValueError):
        make_plan(4, "dct2")
    plan = make_plan(4, DCT1)
    with pytest.raises(ValueError):
        apply(plan, np.zeros(5))
