import math

import numpy as np
import pytest

import ncmatsaev as ncm


def test_degree_one_norm_is_coefficient_sum():
    r = ncm.poly_norm("1,1", 2.0, n=32)
    assert abs(r["value"] - 2.0) <= 1e-6


def test_constant_polynomial_at_p3():
    assert abs(ncm.poly_norm("1", 3.0, n=16)["value"] - 1.0) <= 1e-12


def test_chain_is_ordered():
    s, g, v = ncm.norm_chain("1,0.5,-0.25", 3.0, n=8, restarts=4)
    assert s <= g + 1e-9 and g <= v + 1e-9


def test_schatten_norm_of_diagonal():
    a = np.diag([3.0, 4.0]).astype(complex)
    assert abs(ncm.schatten_norm(a, 2.0) - 5.0) <= 1e-12
    assert abs(ncm.schatten_norm(a, math.inf) - 4.0) <= 1e-12


def test_schur_dilation_all_ones():
    r = ncm.dilate_and_verify("schur", a=np.ones((2, 2)), window=3)
    assert r["max_residual"] <= 1e-12


def test_fourier_dilation_cyclic():
    r = ncm.dilate_and_verify("fourier", group=("cyclic", 2), symbol=np.array([1.0, 0.3]), window=2)
    assert r["max_residual"] <= 1e-10


def test_non_psd_symbol_raises_certification():
    with pytest.raises(ncm.NcmError) as info:
        ncm.dilate_and_verify("schur", a=np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert "certification" in info.value.kind


def test_wick_two_vectors_is_inner_product():
    v = np.array([[1.0, 0.5], [0.0, 2.0]])
    assert abs(ncm.wick_trace(v) - 0.5) <= 1e-14


def test_schoenberg_on_squared_distances():
    a = np.array([[0.0, 1.0, 4.0], [1.0, 0.0, 1.0], [4.0, 1.0, 0.0]])
    assert ncm.schoenberg_check(a)["cnd"]


def test_triangle_discretization():
    a = ncm.discretize_kernel("triangle", 1.0, 1.0, n=1)
    assert np.allclose(a, [1 / 6, 2 / 3, 1 / 6], atol=1e-12)


def test_gaussian_dilation_reproducible():
    alphas = np.array([[0.0, 1.0, 2.0]])
    x = np.eye(3, dtype=complex)
    first = ncm.gaussian_semigroup_dilate(alphas, 0.5, x, samples=2000, seed=3)
    second = ncm.gaussian_semigroup_dilate(alphas, 0.5, x, samples=2000, seed=3)
    assert np.array_equal(first[0], second[0])
