import numpy as np
import pytest
from numpy.testing import assert_allclose

from penaldg.basis import gauss_lobatto_rule
from penaldg.errors import ShapeError
from penaldg.operator1d import FluxScheme, Mesh1D, PenalizationConfig, PenalizedOperator1D
from penaldg.solver2d import Mesh2D, Penalization2D, PenalizedOperator2D


def setup(scheme="ldg", K=(5, 4), N=3, physics=(1.0, 0.5, 0.01, 0.02), chi=None, cfg=None):
    rule = gauss_lobatto_rule(N)
    mesh = Mesh2D.uniform(((-1.0, 1.0), (0.0, 0.5)), *K)
    P = N + 1
    chi = np.zeros(K + (P, P)) if chi is None else chi
    cfg = cfg or Penalization2D(1e-2)
    return PenalizedOperator2D(rule, mesh, physics, cfg, FluxScheme.preset(scheme), chi), rule, mesh


@pytest.mark.parametrize("scheme", ["upwind", "br1", "ldg"])
def test_free_stream(scheme):
    op, rule, mesh = setup(scheme)
    u = np.full((5, 4, 4, 4), -2.5)
    assert np.max(np.abs(op.rhs(u))) < 1e-12


@pytest.mark.parametrize("scheme", ["upwind", "br1", "ldg"])
def test_conservation(scheme):
    op, rule, mesh = setup(scheme)
    u = np.random.default_rng(5).normal(size=(5, 4, 4, 4))
    w2 = np.outer(rule.weights, rule.weights)
    assert abs(np.sum(op.rhs(u) * w2)) < 1e-11


def test_x_only_data_reduces_to_1d():
    # data independent of y: the y sweep vanishes and the x sweep is the 1D operator
    op, rule, mesh = setup("br1")
    x1 = Mesh1D.uniform(-1.0, 1.0, 5)
    op1 = PenalizedOperator1D(rule, x1, 1.0, 0.01, PenalizationConfig(1e-2), FluxScheme.preset("br1"),
                              np.zeros((5, 4)))
    X, _ = mesh.nodes(rule)
    u = np.sin(3 * X)
    ref = op1.rhs(np.sin(3 * x1.nodes(rule)))
    assert_allclose(op.rhs(u), np.broadcast_to(ref[:, None, :, None], u.shape), atol=1e-11)


def test_split_parts_sum_to_rhs():
    K, P = (5, 4), 4
    chi = np.zeros(K + (P, P))
    chi[2, 1] = 1.0
    op, rule, mesh = setup("ldg", chi=chi, cfg=Penalization2D(1e-2, -1.0, -2.0, 100.0, 50.0))
    u = np.random.default_rng(6).normal(size=K + (P, P))
    assert_allclose(op.rhs(u), op.x_part(u) + op.y_part(u) + op.reaction(u), atol=1e-13)
    assert_allclose(op.reaction(u)[2, 1], -u[2, 1] / 1e-2)


def test_trivial_solid_element_2d():
    K, P = (5, 4), 4
    chi = np.zeros(K + (P, P))
    chi[2, 1] = 1.0
    solid = chi[..., 0, 0] > 0
    rule = gauss_lobatto_rule(3)
    mesh = Mesh2D.uniform(((-1.0, 1.0), (0.0, 0.5)), *K)
    cfg = Penalization2D(1e-2, -1.0, -1 / 0.5, 1 / 0.01, 1 / 0.02)
    op = PenalizedOperator2D(rule, mesh, (1.0, 0.5, 0.01, 0.02), cfg, FluxScheme.preset("ldg"), chi,
                             solid_elements=solid)
    u = np.random.default_rng(7).normal(size=K + (P, P))
    assert_allclose(op.rhs(u)[2, 1], -u[2, 1] / 1e-2, rtol=1e-12, atol=1e-10)


def test_shape_checks():
    with pytest.raises(ShapeError):
        setup(chi=np.zeros((5, 4, 3, 3)))
    op, rule, mesh = setup()
    with pytest.raises(ShapeError):
        op.rhs(np.zeros((4, 4, 4, 4)))


def test_mesh2d_layout():
    rule = gauss_lobatto_rule(2)
    mesh = Mesh2D.uniform(((0.0, 1.0), (0.0, 2.0)), 2, 4)
    X, Y = mesh.nodes(rule)
    assert X.shape == Y.shape == (2, 4, 3, 3)
    assert X[1, 0, 2, 0] == pytest.approx(1.0) and Y[0, 3, 0, 2] == pytest.approx(2.0)
    cx, cy = mesh.centers()
    assert cx[1, 2] == pytest.approx(0.75) and cy[1, 2] == pytest.approx(1.25)
