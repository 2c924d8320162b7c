"""Solid geometries, distances to the solid/fluid interface and the mask function."""
from dataclasses import dataclass

import numpy as np

from .errors import MaskError


@dataclass(frozen=True)
class MaskParams:
    """Mask shape: sharp indicator, or tanh profile of width ``delta``."""

    delta: float = 0.0
    sharp: bool = True

    def __post_init__(self):
        if not self.sharp and not self.delta > 0.0:
            raise MaskError(f"smooth mask needs delta > 0, got {self.delta}")


@dataclass(frozen=True)
class Interval1D:
    """Solid interval [start, start + width]."""

    start: float
    width: float

    @property
    def stop(self):
        return self.start + self.width

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return (x >= self.start) & (x <= self.stop)

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        return np.minimum(np.abs(x - self.start), np.abs(x - self.stop))


@dataclass(frozen=True)
class LShape2D:
    """L-shaped solid: two arms of width ``width`` leaving ``corner``.

    One arm runs along +x up to ``x_end``, the other along +y up to ``y_end``.
    """

    corner: tuple
    width: float
    x_end: float
    y_end: float

    def rectangles(self):
        x0, y0 = self.corner
        w = self.width
        return ((x0, self.x_end, y0, y0 + w), (x0, x0 + w, y0, self.y_end))

    def contains(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        inside = np.zeros(x.shape, dtype=bool)
        for xa, xb, ya, yb in self.rectangles():
            inside |= (x >= xa) & (x <= xb) & (y >= ya) & (y <= yb)
        return inside

    def distance(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        d_out = np.full(x.shape, np.inf)
        d_in = np.zeros(x.shape)
        for xa, xb, ya, yb in self.rectangles():
            dx = np.maximum(np.maximum(xa - x, x - xb), 0.0)
            dy = np.maximum(np.maximum(ya - y, y - yb), 0.0)
            d_out = np.minimum(d_out, np.hypot(dx, dy))
            inside = (x >= xa) & (x <= xb) & (y >= ya) & (y <= yb)
            face = np.minimum.reduce([x - xa, xb - x, y - ya, yb - y])
            d_in = np.where(inside, np.maximum(d_in, face), d_in)
        return np.where(self.contains(x, y), d_in, d_out)


def signed_distance(x, geom):
    """Unsigned distance from point(s) to the nearest solid/fluid interface.

    ``x`` is a scalar/array for 1D geometries and a pair ``(x, y)`` for 2D ones.
    """
    if isinstance(geom, LShape2D):
        return geom.distance(*x)
    return geom.distance(x)


def _inside(x, geom):
    if isinstance(geom, LShape2D):
        return geom.contains(*x)
    return geom.contains(x)


def smooth_mask(d, inside, delta):
    return 0.5 * (np.tanh(np.where(inside, d, -d) / delta) + 1.0)


def mask_value(x, geom, params):
    """Mask in [0, 1]: 1/0 for the sharp variant, tanh profile otherwise."""
    inside = _inside(x, geom)
    if params.sharp:
        return inside.astype(float) if np.ndim(inside) else float(inside)
    d = signed_distance(x, geom)
    out = smooth_mask(d, inside, params.delta)
    return out if np.ndim(out) else float(out)


def interface_node_mask(side, params):
    """Mask value for a duplicated node sitting on a solid/fluid element interface."""
    if side not in ("solid_element", "fluid_element"):
        raise MaskError(f"side must be 'solid_element' or 'fluid_element', got {side!r}")
    solid = side == "solid_element"
    if params.sharp:
        return 1.0 if solid else 0.0
    return 0.5 * (np.tanh((1.0 if solid else -1.0) / params.delta) + 1.0)


def nodal_mask(d, element_solid, params):
    """Mask at DG nodes given their interface distance and owning-element flag.

    Nodes lying on the interface (d == 0) take the interface-node value of their
    own element, so the two copies of a duplicated node differ.
    """
    element_solid = np.asarray(element_solid, dtype=bool)
    if params.sharp:
        return np.broadcast_to(element_solid, np.shape(d)).astype(float)
    d = np.asarray(d, dtype=float)
    on_iface = np.isclose(d, 0.0, atol=1e-13)
    chi = smooth_mask(d, element_solid, params.delta)
    solid_val = interface_node_mask("solid_element", params)
    fluid_val = interface_node_mask("fluid_element", params)
    return np.where(on_iface, np.where(element_solid, solid_val, fluid_val), chi)
