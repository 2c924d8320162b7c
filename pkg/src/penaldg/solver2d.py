"""Tensor-product penalized DGSEM on uniform Cartesian meshes.

Fields are stored as ``[ex, ey, ix, iy, *batch]``.  The flux divergence is
separable, so the 2D right-hand side is the 1D penalized operator swept along
every x-line plus the same along every y-line, with the reaction added once.
"""
from dataclasses import dataclass

import numpy as np

from .basis import gauss_lobatto_rule
from .errors import ConfigError, ShapeError
from .operator1d import Mesh1D, PenalizationConfig, PenalizedOperator1D


@dataclass(frozen=True)
class Penalization2D:
    eta1: float
    eta2_x: float = None
    eta2_y: float = None
    eta3_x: float = None
    eta3_y: float = None
    u_s: float = 0.0

    def direction(self, axis):
        """1D penalty for sweeps along ``axis`` (0 = x, 1 = y)."""
        eta2 = self.eta2_x if axis == 0 else self.eta2_y
        eta3 = self.eta3_x if axis == 0 else self.eta3_y
        return PenalizationConfig(self.eta1, eta2, eta3, self.u_s)


@dataclass(frozen=True)
class Mesh2D:
    x: Mesh1D
    y: Mesh1D

    @classmethod
    def uniform(cls, bounds, Kx, Ky):
        (x0, x1), (y0, y1) = bounds
        return cls(Mesh1D.uniform(x0, x1, Kx), Mesh1D.uniform(y0, y1, Ky))

    @property
    def shape(self):
        return self.x.K, self.y.K

    def nodes(self, rule):
        """Node coordinates, each shaped ``[ex, ey, ix, iy]``."""
        xn = self.x.nodes(rule)
        yn = self.y.nodes(rule)
        X = np.broadcast_to(xn[:, None, :, None], (self.x.K, self.y.K, rule.npts, rule.npts))
        Y = np.broadcast_to(yn[None, :, None, :], (self.x.K, self.y.K, rule.npts, rule.npts))
        return X.copy(), Y.copy()

    def centers(self):
        cx, cy = np.meshgrid(self.x.centers, self.y.centers, indexing="ij")
        return cx, cy


@dataclass
class SolutionField2D:
    mesh: Mesh2D
    values: np.ndarray


def _to_xlines(a):
    # [ex, ey, ix, iy, ...] -> [ex, ix, ey, iy, ...]
    return np.swapaxes(a, 1, 2)


def _to_ylines(a):
    # [ex, ey, ix, iy, ...] -> [ey, iy, ex, ix, ...]
    axes = (1, 3, 0, 2) + tuple(range(4, a.ndim))
    return np.transpose(a, axes)


def _from_ylines(a):
    axes = (2, 0, 3, 1) + tuple(range(4, a.ndim))
    return np.transpose(a, axes)


class PenalizedOperator2D:
    """Right-hand side of the 2D penalized advection-diffusion equation.

    ``physics`` is ``(c_x, c_y, nu_x, nu_y)``; ``chi`` is ``[ex, ey, ix, iy]`` and
    ``solid_elements`` is ``[ex, ey]``.  Boundaries are periodic.
    """

    def __init__(self, rule, mesh, physics, cfg, scheme, chi, solid_elements=None,
                 cancel_physical_flux="auto"):
        if isinstance(rule, int):
            rule = gauss_lobatto_rule(rule)
        Kx, Ky = mesh.shape
        P = rule.npts
        chi = np.asarray(chi, dtype=float)
        if chi.shape != (Kx, Ky, P, P):
            raise ShapeError(f"mask shape {chi.shape} does not match mesh {(Kx, Ky, P, P)}")
        if len(physics) != 4:
            raise ConfigError("physics must be (c_x, c_y, nu_x, nu_y)")
        cx, cy, nux, nuy = physics
        self.rule, self.mesh, self.cfg, self.chi = rule, mesh, cfg, chi
        if solid_elements is None:
            sx = sy = None
        else:
            solid = np.asarray(solid_elements, dtype=bool)
            if solid.shape != (Kx, Ky):
                raise ShapeError(f"solid element flags {solid.shape} do not match mesh {(Kx, Ky)}")
            sx = np.broadcast_to(solid[:, :, None], (Kx, Ky, P))           # [ex, ey, iy]
            sy = np.broadcast_to(solid.T[:, :, None], (Ky, Kx, P))         # [ey, ex, ix]
        self.op_x = PenalizedOperator1D(rule, mesh.x, cx, nux, cfg.direction(0), scheme,
                                        _to_xlines(chi), solid_elements=sx,
                                        cancel_physical_flux=cancel_physical_flux, reaction=False)
        self.op_y = PenalizedOperator1D(rule, mesh.y, cy, nuy, cfg.direction(1), scheme,
                                        _to_ylines(chi), solid_elements=sy,
                                        cancel_physical_flux=cancel_physical_flux, reaction=False)

    def x_part(self, u, t=0.0):
        return _to_xlines(self.op_x.rhs(_to_xlines(u), t))

    def y_part(self, u, t=0.0):
        return _from_ylines(self.op_y.rhs(_to_ylines(u), t))

    def reaction(self, u):
        chi = self.chi.reshape(self.chi.shape + (1,) * (np.ndim(u) - 4))
        return -chi / self.cfg.eta1 * (u - self.cfg.u_s)

    def rhs(self, u, t=0.0):
        u = np.asarray(u, dtype=float)
        if u.shape[:4] != self.chi.shape:
            raise ShapeError(f"field shape {u.shape} does not match operator {self.chi.shape}")
        return self.x_part(u, t) + self.y_part(u, t) + self.reaction(u)

    __call__ = rhs


def rhs_2d(field, physics, cfg, scheme, mask, **kwargs):
    rule = gauss_lobatto_rule(field.values.shape[2] - 1)
    op = PenalizedOperator2D(rule, field.mesh, physics, cfg, scheme, mask, **kwargs)
    return SolutionField2D(field.mesh, op.rhs(field.values))
