"""Penalized nodal DGSEM operator for 1D advection-diffusion.

The semi-discrete system is

    du_j/dt = -(chi_j/eta1)(u_j - u_s)
              + (2/dx)/w_j [ sum_i w_i l_j'(xi_i) (c_hat_i u_i + f_i)
                             + F_left delta_j0 - F_right delta_jN ]

with the nodal diffusive flux ``f = -d(nu_hat u)/dx`` recovered weakly from the
solution traces ``U``.  Interface values ``F`` and ``U`` come from the W-flux

    W(a, b; lam) = {{a b}} - lam/2 [[|a| b]],   [[q]] = q_left - q_right,

with one switch per flux: alpha (advective), beta/gamma (diffusive), delta (U).
Arrays are indexed ``[element, node, *batch]``; any trailing batch axes are
carried through, which the 2D solver uses to sweep whole families of lines.
"""
from dataclasses import dataclass

import numpy as np

from .basis import gauss_lobatto_rule
from .errors import ConfigError, MeshError, ShapeError

TRIVIAL_TOL = 1e-12


@dataclass(frozen=True)
class PenalizationConfig:
    """Penalty parameters; ``None`` for eta2/eta3 means the term is absent."""

    eta1: float
    eta2: float = None
    eta3: float = None
    u_s: float = 0.0

    def __post_init__(self):
        if not self.eta1 > 0.0:
            raise ConfigError(f"eta1 must be positive, got {self.eta1}")
        for name in ("eta2", "eta3"):
            val = getattr(self, name)
            if val is not None and (val == 0.0 or not np.isfinite(val)):
                raise ConfigError(f"{name} must be a finite nonzero number or None, got {val}")


@dataclass(frozen=True)
class FluxScheme:
    """W-flux switches for advective flux, diffusive flux, inner diffusive trace and U."""

    alpha: float = -1.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    name: str = "custom"

    @classmethod
    def preset(cls, name):
        key = name.lower()
        if key in ("upwind", "br1"):
            return cls(-1.0, 0.0, 0.0, 0.0, name=key)
        if key == "ldg":
            return cls(-1.0, -1.0, -1.0, 1.0, name=key)
        raise ConfigError(f"unknown flux scheme {name!r}; valid: upwind, br1, ldg")


@dataclass(frozen=True)
class Mesh1D:
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise MeshError("mesh needs at least one element")
        if np.any(np.diff(edges) <= 0.0):
            raise MeshError("element sizes must be positive")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def uniform(cls, x0, x1, K):
        if K < 1:
            raise MeshError(f"need K >= 1 elements, got {K}")
        return cls(np.linspace(x0, x1, K + 1))

    @property
    def K(self):
        return self.edges.size - 1

    @property
    def dx(self):
        return np.diff(self.edges)

    @property
    def centers(self):
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    def nodes(self, rule):
        return self.edges[:-1, None] + (rule.nodes[None, :] + 1.0) * self.dx[:, None] / 2.0


@dataclass
class SolutionField1D:
    mesh: Mesh1D
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape[0] != self.mesh.K:
            raise ShapeError(f"values have {self.values.shape[0]} elements, mesh has {self.mesh.K}")


def effective_coefficients(c, nu, chi, cfg):
    """Penalized velocity c + chi/eta2 and viscosity nu - chi/eta3."""
    chi = np.asarray(chi, dtype=float)
    c_hat = c + chi / cfg.eta2 if cfg.eta2 is not None else c + 0.0 * chi
    nu_hat = nu - chi / cfg.eta3 if cfg.eta3 is not None else nu + 0.0 * chi
    if c_hat.ndim == 0:
        return float(c_hat), float(nu_hat)
    return c_hat, nu_hat


def w_flux(aL, bL, aR, bR, lam):
    return 0.5 * (aL * bL + aR * bR) - 0.5 * lam * (np.abs(aL) * bL - np.abs(aR) * bR)


def flux_weights(scheme, c_hat_left, c_hat_right, cancel=False):
    """Linear trace weights of the advective flux F and the solution trace U.

    Returns ``(f_left, f_right, g_left, g_right)`` with ``F = f_left u_left +
    f_right u_right`` and ``U = g_left u_left + g_right u_right``; the g's are the
    literal coefficients, so a plain average gives 1/2 each.  ``cancel`` reports
    the zeroed flux seen by a solid element whose physical terms are removed.
    The diffusive part of F depends on interior values and has no trace weights.
    """
    a = scheme.alpha
    fl = 0.5 * c_hat_left - 0.5 * a * np.abs(c_hat_left)
    fr = 0.5 * c_hat_right + 0.5 * a * np.abs(c_hat_right)
    gl = 0.5 * (1.0 - scheme.delta)
    gr = 0.5 * (1.0 + scheme.delta)
    if cancel:
        fl, fr = 0.0 * fl, 0.0 * fr
    return fl, fr, gl, gr


def _apply_dt(Dm, x):
    """result[k, j, ...] = sum_i Dm[i, j] x[k, i, ...]"""
    return np.moveaxis(np.tensordot(Dm, x, axes=(0, 1)), 0, 1)


def _bshape(arr, ndim):
    """Append singleton axes so per-element arrays broadcast against ``ndim``-d data."""
    arr = np.asarray(arr, dtype=float)
    return arr.reshape(arr.shape + (1,) * (ndim - arr.ndim))


def element_rhs(rule, u, c_hat, nu_hat, chi, dx, F_left, F_right, U_left, U_right,
                eta1=None, u_s=0.0):
    """Element-local part of the semi-discrete system for given interface values.

    ``u``, ``c_hat``, ``nu_hat``, ``chi`` are ``[K, N+1, ...]``; ``F_*``/``U_*`` are
    ``[K, ...]``.  Returns ``(du_dt, f_nodal)``.  With ``eta1=None`` the reaction is
    left out.
    """
    Dm = rule.deriv_matrix
    u = np.asarray(u, dtype=float)
    nd = u.ndim
    w = rule.weights.reshape((1, -1) + (1,) * (nd - 2))
    scale = 2.0 / _bshape(dx, nd)
    c_hat = np.broadcast_to(_bshape(c_hat, nd), u.shape)
    nu_hat = np.broadcast_to(_bshape(nu_hat, nd), u.shape)

    f = _apply_dt(Dm, w * nu_hat * u)
    f[:, -1] -= nu_hat[:, -1] * U_right
    f[:, 0] += nu_hat[:, 0] * U_left
    f *= scale / w

    du = _apply_dt(Dm, w * (c_hat * u + f))
    du[:, 0] += F_left
    du[:, -1] -= F_right
    du *= scale / w
    if eta1 is not None:
        du -= _bshape(chi, nd) / eta1 * (u - u_s)
    return du, f


class PenalizedOperator1D:
    """Matrix-free right-hand side of the penalized DGSEM system on a 1D mesh.

    Parameters
    ----------
    chi : array ``[K, N+1, ...]``
        Mask at every node, interface copies included.
    bc : ``"periodic"`` or ``"dirichlet"``
        Dirichlet closures use exterior ghost traces carrying ``boundary_values``
        (constants or callables of t).
    cancel_physical_flux : ``"auto"``, bool
        Zero the interface fluxes seen by solid elements.  ``"auto"`` does so on
        every element where both c_hat and nu_hat vanish at all nodes.
    solid_elements : bool array ``[K, ...]``, optional
        Restricts cancellation to these elements.
    reaction : bool
        Include -(chi/eta1)(u - u_s); the 2D solver adds it once itself.
    """

    def __init__(self, rule, mesh, c, nu, cfg, scheme, chi, *, bc="periodic",
                 boundary_values=(0.0, 0.0), cancel_physical_flux="auto",
                 solid_elements=None, reaction=True):
        if isinstance(rule, int):
            rule = gauss_lobatto_rule(rule)
        self.rule, self.mesh = rule, mesh
        self.c, self.nu, self.cfg, self.scheme = float(c), float(nu), cfg, scheme
        chi = np.asarray(chi, dtype=float)
        if chi.shape[:2] != (mesh.K, rule.npts):
            raise ShapeError(f"mask shape {chi.shape} does not match mesh ({mesh.K}, {rule.npts})")
        if bc not in ("periodic", "dirichlet"):
            raise ConfigError(f"unknown boundary closure {bc!r}")
        self.chi = chi
        self.bc = bc
        self.boundary_values = boundary_values
        self.reaction = reaction
        self.c_hat, self.nu_hat = effective_coefficients(self.c, self.nu, chi, cfg)
        trivial = np.all((np.abs(self.c_hat) < TRIVIAL_TOL) & (np.abs(self.nu_hat) < TRIVIAL_TOL), axis=1)
        if solid_elements is not None:
            trivial = trivial & np.asarray(solid_elements, dtype=bool)
        if cancel_physical_flux == "auto":
            cancel = trivial
        elif cancel_physical_flux:
            cancel = np.ones_like(trivial) if solid_elements is None else np.asarray(solid_elements, bool)
        else:
            cancel = np.zeros_like(trivial)
        self.cancel = np.asarray(cancel, dtype=bool)
        self._dx = mesh.dx

    def _boundary(self, t):
        g = []
        for v in self.boundary_values:
            g.append(float(v(t)) if callable(v) else float(v))
        return g

    def _interfaces(self, left, right, t, kind):
        """Left/right states at the K+1 interfaces from element-end traces."""
        if self.bc == "periodic":
            ghost_l, ghost_r = left[-1:], right[:1]
        elif kind == "u":
            g0, gL = self._boundary(t)
            ghost_l = np.full_like(left[:1], g0)
            ghost_r = np.full_like(right[:1], gL)
        else:  # copy the interior value
            ghost_l, ghost_r = right[:1], left[-1:]
        return np.concatenate([ghost_l, left]), np.concatenate([right, ghost_r])

    def interface_fluxes(self, u, t=0.0):
        """Return ``(F, U, f_nodal)`` with F and U at the K+1 interfaces."""
        sch = self.scheme
        nd = u.ndim
        aL, bR = self._interfaces(u[:, -1], u[:, 0], t, "u")
        U = w_flux(1.0, aL, 1.0, bR, sch.delta)

        w = self.rule.weights.reshape((1, -1) + (1,) * (nd - 2))
        scale = 2.0 / _bshape(self._dx, nd)
        nu_hat = np.broadcast_to(_bshape(self.nu_hat, nd), u.shape)
        f = _apply_dt(self.rule.deriv_matrix, w * nu_hat * u)
        f[:, -1] -= nu_hat[:, -1] * U[1:]
        f[:, 0] += nu_hat[:, 0] * U[:-1]
        f *= scale / w

        fL, fR = self._interfaces(f[:, -1], f[:, 0], t, "f")
        # inner diffusive trace shared by both copies, then the interface flux
        inner = w_flux(1.0, fL, 1.0, fR, sch.gamma)
        F_diff = w_flux(1.0, inner, 1.0, inner, sch.beta)

        c_hat = np.broadcast_to(_bshape(self.c_hat, nd), u.shape)
        cL, cR = self._interfaces(c_hat[:, -1], c_hat[:, 0], t, "c")
        F_adv = w_flux(cL, aL, cR, bR, sch.alpha)
        return F_adv + F_diff, U, f

    def rhs(self, u, t=0.0):
        u = np.asarray(u, dtype=float)
        if u.shape[:2] != self.chi.shape[:2]:
            raise ShapeError(f"field shape {u.shape} does not match operator {self.chi.shape[:2]}")
        F, U, _ = self.interface_fluxes(u, t)
        cancel = _bshape(self.cancel, F.ndim)
        F_left = np.where(cancel, 0.0, F[:-1])
        F_right = np.where(cancel, 0.0, F[1:])
        du, _ = element_rhs(self.rule, u, self.c_hat, self.nu_hat, self.chi, self._dx,
                            F_left, F_right, U[:-1], U[1:],
                            eta1=self.cfg.eta1 if self.reaction else None, u_s=self.cfg.u_s)
        return du

    __call__ = rhs


def rhs_1d(field, physics, cfg, scheme, mask, **kwargs):
    """Functional form: time derivative of ``field`` under the penalized operator."""
    c, nu = physics
    rule = gauss_lobatto_rule(field.values.shape[1] - 1)
    op = PenalizedOperator1D(rule, field.mesh, c, nu, cfg, scheme, mask, **kwargs)
    return SolutionField1D(field.mesh, op.rhs(field.values))
