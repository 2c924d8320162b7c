"""Gauss-Lobatto quadrature and Lagrange nodal basis on the reference interval [-1, 1]."""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from .errors import DegenerateNodesError, InvalidOrderError

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """(N+1)-point Gauss-Lobatto rule with its Lagrange derivative matrix.

    ``deriv_matrix[i, j]`` is the derivative of the j-th Lagrange polynomial
    evaluated at node i.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    deriv_matrix: np.ndarray

    @property
    def npts(self):
        return self.order + 1

    def lagrange(self, x):
        """Values of every Lagrange polynomial at the points ``x``; shape (len(x), N+1)."""
        return lagrange_basis(self.nodes, x)

    def integrate(self, values):
        return np.dot(self.weights, values)


def _legendre_and_derivative(n, x):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # P_n' = n (x P_n - P_{n-1}) / (x^2 - 1), only used at interior points
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_lobatto_nodes(N):
    """Nodes and weights of the (N+1)-point Gauss-Lobatto rule."""
    if int(N) != N or N < 1:
        raise InvalidOrderError(f"Gauss-Lobatto order must be an integer >= 1, got {N!r}")
    N = int(N)
    x = np.empty(N + 1)
    x[0], x[-1] = -1.0, 1.0
    if N > 1:
        # interior nodes are the roots of P_N'; Newton on P_N' using the Legendre ODE
        # (1 - x^2) P_N'' = 2x P_N' - N(N+1) P_N
        xi = -np.cos(np.pi * np.arange(1, N) / N)
        for _ in range(_NEWTON_MAXITER):
            p, dp = _legendre_and_derivative(N, xi)
            d2p = (2.0 * xi * dp - N * (N + 1) * p) / (1.0 - xi * xi)
            step = dp / d2p
            xi -= step
            if np.max(np.abs(step)) < _NEWTON_TOL:
                break
        # enforce exact symmetry
        xi = 0.5 * (xi - xi[::-1])
        x[1:-1] = xi
    pn = legendre.legval(x, np.eye(N + 1)[N])
    w = 2.0 / (N * (N + 1) * pn * pn)
    return x, w


def barycentric_weights(nodes):
    nodes = np.asarray(nodes, dtype=float)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise DegenerateNodesError("interpolation nodes must be distinct")
    return 1.0 / np.prod(diff, axis=1)


def lagrange_basis(nodes, x):
    """Evaluate all Lagrange polynomials on ``nodes`` at ``x`` (barycentric form)."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lam = barycentric_weights(nodes)
    diff = x[:, None] - nodes[None, :]
    exact = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = lam / diff
        out = t / t.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    out[rows] = exact[rows].astype(float)
    return out


def lagrange_derivative_matrix(nodes):
    """Matrix with entry (i, j) = l_j'(x_i) for the Lagrange basis on ``nodes``."""
    nodes = np.asarray(nodes, dtype=float)
    if np.any(np.diff(nodes) <= 0.0):
        raise DegenerateNodesError("nodes must be strictly ascending")
    lam = barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (lam[None, :] / lam[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    # negative-sum trick: rows of D annihilate constants exactly
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def gauss_lobatto_rule(N):
    x, w = gauss_lobatto_nodes(N)
    return QuadratureRule(order=int(N), nodes=x, weights=w, deriv_matrix=lagrange_derivative_matrix(x))
