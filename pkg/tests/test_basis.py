import numpy as np
import pytest
from numpy.testing import assert_allclose

from penaldg.basis import (barycentric_weights, gauss_lobatto_nodes, gauss_lobatto_rule,
                           lagrange_basis, lagrange_derivative_matrix)
from penaldg.errors import DegenerateNodesError, InvalidOrderError


def test_three_point_rule():
    x, w = gauss_lobatto_nodes(2)
    assert_allclose(x, [-1, 0, 1], atol=1e-15)
    assert_allclose(w, [1 / 3, 4 / 3, 1 / 3], rtol=1e-14)


def test_four_point_rule():
    x, w = gauss_lobatto_nodes(3)
    s = 1 / np.sqrt(5)
    assert_allclose(x, [-1, -s, s, 1], atol=1e-15)
    assert_allclose(w, [1 / 6, 5 / 6, 5 / 6, 1 / 6], rtol=1e-14)


def test_five_point_rule():
    x, w = gauss_lobatto_nodes(4)
    s = np.sqrt(3 / 7)
    assert_allclose(x, [-1, -s, 0, s, 1], atol=1e-15)
    assert_allclose(w, [1 / 10, 49 / 90, 32 / 45, 49 / 90, 1 / 10], rtol=1e-14)


@pytest.mark.parametrize("N", [1, 2, 3, 5, 8, 12])
def test_quadrature_exact_to_degree_2N_minus_1(N):
    rule = gauss_lobatto_rule(N)
    for k in range(2 * N):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert abs(rule.integrate(rule.nodes ** k) - exact) < 1e-13


def test_quadrature_misses_degree_2N():
    rule = gauss_lobatto_rule(3)
    assert abs(rule.integrate(rule.nodes ** 6) - 2 / 7) > 1e-3


def test_derivative_matrix_three_points():
    D = gauss_lobatto_rule(2).deriv_matrix
    assert_allclose(D, [[-1.5, 2, -0.5], [-0.5, 0, 0.5], [0.5, -2, 1.5]], atol=1e-14)


@pytest.mark.parametrize("N", [1, 2, 4, 7])
def test_derivative_exact_for_degree_N(N):
    rule = gauss_lobatto_rule(N)
    x = rule.nodes
    for k in range(N + 1):
        assert_allclose(rule.deriv_matrix @ x ** k, k * x ** max(k - 1, 0) if k else 0 * x, atol=1e-12)


def test_derivative_rows_annihilate_constants():
    D = gauss_lobatto_rule(9).deriv_matrix
    assert np.max(np.abs(D.sum(axis=1))) < 1e-13


def test_lagrange_cardinal_and_partition_of_unity():
    rule = gauss_lobatto_rule(4)
    assert_allclose(rule.lagrange(rule.nodes), np.eye(5), atol=1e-15)
    pts = np.linspace(-1, 1, 17)
    assert_allclose(rule.lagrange(pts).sum(axis=1), 1.0, atol=1e-14)


def test_lagrange_interpolates_polynomial():
    rule = gauss_lobatto_rule(3)
    pts = np.linspace(-1, 1, 11)
    p = lambda x: 2 * x ** 3 - x + 0.5
    assert_allclose(rule.lagrange(pts) @ p(rule.nodes), p(pts), atol=1e-14)


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_invalid_order(bad):
    with pytest.raises(InvalidOrderError):
        gauss_lobatto_nodes(bad)


def test_degenerate_nodes():
    with pytest.raises(DegenerateNodesError):
        barycentric_weights([0.0, 0.5, 0.5])
    with pytest.raises(DegenerateNodesError):
        lagrange_derivative_matrix([0.0, 1.0, 0.5])
    with pytest.raises(DegenerateNodesError):
        lagrange_basis([1.0, 1.0], [0.3])
