"""Modified-equation analysis of the penalized DGSEM for three Gauss-Lobatto points.

Per node j of an element the semi-discrete equation is rewritten as

    du_j/dt + chi_j/eta1 u_j + sum_m ZHE_j^(m)/m! d^m u/dx^m = s_DG,j

by Taylor-expanding the element's own nodal values about x_j.  The effective
advection and diffusion are c~ = ZHE^(1) and nu~ = -ZHE^(2)/2.

Trace weights follow the literal linear form of the interface states:
``F_left = f[0] u2(k-1) + f[1] u0(k)``, ``F_right = f[2] u2(k) + f[3] u0(k+1)``
and likewise ``U`` with ``g``.  Trace vectors are ordered
``(u2(k-1), u0(k), u1(k), u2(k), u0(k+1))``.
"""
from dataclasses import dataclass, field

import numpy as np

from .basis import gauss_lobatto_rule
from .errors import ConfigError

XI = np.array([-1.0, 0.0, 1.0])
WEIGHTS = np.array([1.0, 4.0, 1.0]) / 3.0
TRACE_NAMES = ("u2_prev", "u0", "u1", "u2", "u0_next")
_OWN = (1, 2, 3)        # trace-vector slots of u0, u1, u2
ZERO_TOL = 1e-12

FAMILIES = ("trivial", "case1_upwind", "case1_upwind_dg", "case1_internal", "case1_other",
            "case2_g2", "case2_cg", "case2_constraint")


@dataclass
class MEAInput:
    c_hat: np.ndarray
    nu_hat: np.ndarray
    dx: float
    eta1: float = 1.0
    chi: np.ndarray = field(default_factory=lambda: np.ones(3))
    g_weights: np.ndarray = field(default_factory=lambda: np.zeros(4))
    f_weights: np.ndarray = field(default_factory=lambda: np.zeros(4))
    max_order: int = 8

    def __post_init__(self):
        for name in ("c_hat", "nu_hat", "chi"):
            v = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), (3,)).copy()
            setattr(self, name, v)
        for name in ("g_weights", "f_weights"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (4,):
                raise ConfigError(f"{name} needs 4 entries, got shape {v.shape}")
            setattr(self, name, v)
        if not self.dx > 0:
            raise ConfigError(f"dx must be positive, got {self.dx}")
        if int(self.max_order) < 3:
            raise ConfigError(f"max_order must be >= 3, got {self.max_order}")
        self.max_order = int(self.max_order)

    @property
    def uniform(self):
        return np.ptp(self.c_hat) == 0.0 and np.ptp(self.nu_hat) == 0.0


@dataclass
class MEAReport:
    D: np.ndarray            # D[i, j] multiplies u_i in the equation of node j
    r_tilde: np.ndarray
    zhe: np.ndarray          # zhe[j, m-1]
    c_tilde: np.ndarray
    nu_tilde: np.ndarray
    s_dg: np.ndarray         # 3 x 5 linear forms over the trace vector
    te_order: list

    def summary_rows(self):
        rows = [(j, m, float(self.zhe[j, m - 1])) for j in range(3) for m in range(1, self.zhe.shape[1] + 1)]
        return rows


def vp_dg_matrix_3pt(inp):
    """VP-DG matrix for N=2 from the closed-form blocks; returns D[i, j]."""
    c0, c1, c2 = inp.c_hat
    n0, n1, n2 = inp.nu_hat
    h = 2.0 / inp.dx
    adv = np.array([[-1.5 * c0, -2.0 * c1, 0.5 * c2],
                    [0.5 * c0, 0.0, -0.5 * c2],
                    [-0.5 * c0, 2.0 * c1, 1.5 * c2]])
    dif = np.array([[n0, 4.0 * n1, n2],
                    [-0.5 * n0, -2.0 * n1, -0.5 * n2],
                    [n0, 4.0 * n1, n2]])
    shown = np.diag(inp.chi) / inp.eta1 - h * adv - h * h * dif   # shown[j, i] = D_ij
    return shown.T.copy()


def vp_dg_matrix(rule, c_hat, nu_hat, chi, dx, eta1):
    """General-N VP-DG matrix D[i, j] from the nodal basis (reference for tests)."""
    Dm, w = rule.deriv_matrix, rule.weights
    c_hat, nu_hat, chi = (np.broadcast_to(np.asarray(a, float), (rule.npts,)) for a in (c_hat, nu_hat, chi))
    h = 2.0 / dx
    lap = Dm @ Dm           # lap[i, j] = sum_r l_r'(xi_i) l_j'(xi_r)
    D = (-h * (c_hat * w)[:, None] * Dm - h * h * (nu_hat * w)[:, None] * lap) / w[None, :]
    return D + np.diag(chi / eta1)


def raw_source_coefficients(inp):
    """Numerical source of each node as a 3 x 5 form, own traces kept in place."""
    rule = gauss_lobatto_rule(2)
    lm, lp = np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])   # l_j(-1), l_j(1)
    dlm, dlp = rule.deriv_matrix[0], rule.deriv_matrix[-1]          # l_j'(-1), l_j'(1)
    f2m, f0, f2, f0p = inp.f_weights
    g2m, g0, g2, g0p = inp.g_weights
    Fm = np.array([f2m, f0, 0, 0, 0]); Fp = np.array([0, 0, 0, f2, f0p])
    Um = np.array([g2m, g0, 0, 0, 0]); Up = np.array([0, 0, 0, g2, g0p])
    h = 2.0 / inp.dx
    n0, n2 = inp.nu_hat[0], inp.nu_hat[2]
    S = np.empty((3, 5))
    for j in range(3):
        S[j] = (h * (Fm * lm[j] - Fp * lp[j]) + h * h * (n0 * Um * dlm[j] - n2 * Up * dlp[j])) / WEIGHTS[j]
    return S


def source_coefficients(inp):
    """Numerical source per node with own-element traces collapsed.

    Own-element traces are merged onto u_j (their zeroth Taylor term).
    """
    dx = inp.dx
    f2m, f0, f2, f0p = inp.f_weights
    g2m, g0, g2, g0p = inp.g_weights
    n0, _, n2 = inp.nu_hat
    S = np.zeros((3, 5))
    a = 2.0 / dx
    S[0, 0] = a * (3 * f2m - 9 / dx * n0 * g2m)
    S[0, 4] = a * (-3 / dx * n2 * g0p)
    S[0, 1] = a * (3 * f0 - 3 / dx * (3 * n0 * g0 + n2 * g2))
    b = 6.0 / dx ** 2
    S[1, 0] = b * n0 * g2m
    S[1, 4] = b * n2 * g0p
    S[1, 2] = b * (n0 * g0 + n2 * g2)
    S[2, 0] = -a * (3 / dx * n0 * g2m)
    S[2, 4] = -a * (3 * f0p + 9 / dx * n2 * g0p)
    S[2, 3] = -a * (3 * f2 + 3 / dx * (3 * n2 * g2 + n0 * g0))
    return S


def reactive_and_zhe(inp):
    """Reactive parameters r~_j and the ladder ZHE_j^(m), m = 1..M, from closed forms.

    For uniform coefficients the result is cross-checked against the
    uniform-coefficient specialization.
    """
    c0, c1, c2 = inp.c_hat
    n0, n1, n2 = inp.nu_hat
    _, g0, g2, _ = inp.g_weights
    dx = inp.dx
    sn = n0 + 4 * n1 + n2
    r = np.array([
        (3 * c0 + 4 * c1 - c2) / dx - 4 * sn / dx ** 2,
        -(c0 - c2) / dx + 2 * sn / dx ** 2,
        (c0 - 4 * c1 - 3 * c2) / dx - 4 * sn / dx ** 2,
    ])
    M = inp.max_order
    zhe = np.empty((3, M))
    for m in range(1, M + 1):
        p1, p2 = dx ** (m - 1), dx ** (m - 2)
        q = 2.0 ** (2 - m)
        s = (-1.0) ** m
        zhe[0, m - 1] = (q * c1 - c2) * p1 - 4 * (q * n1 + n2 * (1 - 1.5 * g2)) * p2
        zhe[1, m - 1] = (-(2.0 ** -m) * (s * c0 - c2) * p1
                         + 2.0 ** (1 - m) * (s * n0 * (1 - 3 * g0) + n2 * (1 - 3 * g2)) * p2)
        zhe[2, m - 1] = s * ((c0 - q * c1) * p1 - 4 * (n0 * (1 - 1.5 * g0) + q * n1) * p2)
    if inp.uniform:
        r_u, zhe_u = _reactive_and_zhe_uniform(inp.c_hat[0], inp.nu_hat[0], dx, g0, g2, M)
        scale = max(1.0, np.max(np.abs(zhe)))
        if not (np.allclose(r, r_u, rtol=1e-12, atol=1e-12 * max(1.0, np.max(np.abs(r))))
                and np.allclose(zhe, zhe_u, rtol=1e-12, atol=1e-12 * scale)):
            raise AssertionError("general and uniform-coefficient closed forms disagree")
    return r, zhe


def _reactive_and_zhe_uniform(c, nu, dx, g0, g2, M):
    """Uniform-coefficient closed forms (nu = 0 reduces to the advection-only case)."""
    r = np.array([6 * c / dx - 24 * nu / dx ** 2, 12 * nu / dx ** 2, -6 * c / dx - 24 * nu / dx ** 2])
    zhe = np.empty((3, M))
    for m in range(1, M + 1):
        p1, p2 = dx ** (m - 1), dx ** (m - 2)
        q = 2.0 ** (2 - m)
        s = (-1.0) ** m
        zhe[0, m - 1] = (q - 1) * c * p1 - 4 * (q + 1 - 1.5 * g2) * nu * p2
        zhe[1, m - 1] = (-(2.0 ** -m) * (s - 1) * c * p1
                         + 2.0 ** (1 - m) * (s * (1 - 3 * g0) + 1 - 3 * g2) * nu * p2)
        zhe[2, m - 1] = s * ((1 - q) * c * p1 - 4 * (q + 1 - 1.5 * g0) * nu * p2)
    return r, zhe


def zhe_from_matrix(inp):
    """ZHE ladder straight from the VP-DG matrix and the raw numerical source."""
    D = vp_dg_matrix_3pt(inp)
    S = raw_source_coefficients(inp)
    own_xi = {1: -1.0, 3: 1.0}      # trace slot -> reference coordinate
    zhe = np.empty((3, inp.max_order))
    for j in range(3):
        for m in range(1, inp.max_order + 1):
            val = np.sum(D[:, j] * (XI - XI[j]) ** m)
            for slot, xt in own_xi.items():
                val -= S[j, slot] * (xt - XI[j]) ** m
            zhe[j, m - 1] = (inp.dx / 2.0) ** m * val
    r = D.sum(axis=0) - inp.chi / inp.eta1
    return r, zhe


def dg_source_form(inp, r_tilde=None):
    """s_DG,j = S_j - r~_j u_j as 3 x 5 linear forms over the trace vector."""
    if r_tilde is None:
        r_tilde, _ = reactive_and_zhe(inp)
    form = source_coefficients(inp)
    for j, slot in enumerate(_OWN):
        form[j, slot] -= r_tilde[j]
    return form


def dg_source(inp, traces):
    """DG source values s_DG,j for a trace vector ``(u2_prev, u0, u1, u2, u0_next)``."""
    traces = np.asarray(traces, dtype=float)
    if traces.shape != (5,):
        raise ConfigError(f"expected 5 trace values, got shape {traces.shape}")
    return dg_source_form(inp) @ traces


def _continuous(form):
    # u2(k-1) = u0(k) and u0(k+1) = u2(k)
    out = form.copy()
    out[:, 1] += out[:, 0]
    out[:, 3] += out[:, 4]
    out[:, 0] = out[:, 4] = 0.0
    return out


def classify_te_order(inp, traces=None, continuous=False, tol=ZERO_TOL, report=None):
    """Truncation-error order per node: an integer power of dx or ``"infinite"``.

    Tiers are tested in turn: the DG source, c^ - c~, nu^ - nu~, then ZHE^(m)
    for m = 3..M.  Without ``traces`` the source must vanish identically as a
    linear form (after merging neighbor traces if ``continuous``).
    """
    r, zhe = reactive_and_zhe(inp) if report is None else (report.r_tilde, report.zhe)
    form = dg_source_form(inp, r)
    if continuous:
        form = _continuous(form)
    dx = inp.dx
    c_t, nu_t = zhe[:, 0], -zhe[:, 1] / 2.0
    orders = []
    for j in range(3):
        src = abs(form[j] @ np.asarray(traces, float)) if traces is not None else np.max(np.abs(form[j]))
        if src * dx ** 2 > tol:
            orders.append(0)
            continue
        if abs(inp.c_hat[j] - c_t[j]) * dx > tol or abs(inp.nu_hat[j] - nu_t[j]) > tol:
            orders.append(0)
            continue
        order = "infinite"
        for m in range(3, inp.max_order + 1):
            if abs(zhe[j, m - 1]) * dx ** (2 - m) > tol:
                order = m - 1
                break
        orders.append(order)
    return orders


def analyze(inp, traces=None, continuous=False):
    r, zhe = reactive_and_zhe(inp)
    rep = MEAReport(vp_dg_matrix_3pt(inp), r, zhe, zhe[:, 0].copy(), -zhe[:, 1] / 2.0,
                    dg_source_form(inp, r), [])
    rep.te_order = classify_te_order(inp, traces, continuous, report=rep)
    return rep


def predicted_rates(inp, traces, du, d2u, report=None):
    """du_j/dt predicted by the modified equation for data of degree <= 2.

    ``du``/``d2u`` are the physical first/second derivatives at the three nodes;
    higher Taylor terms vanish for quadratics.
    """
    rep = analyze(inp) if report is None else report
    u = np.asarray(traces, float)[list(_OWN)]
    return (-inp.chi / inp.eta1 * u + rep.s_dg @ np.asarray(traces, float)
            - rep.c_tilde * np.asarray(du) + rep.nu_tilde * np.asarray(d2u))


def constraint_residual(c_hat, nu_hat, dx):
    """Residual of the parameter relation c^ + 4 nu^/dx = 0."""
    return c_hat + 4.0 * nu_hat / dx


def satisfies_constraint(c_hat, nu_hat, dx, tol=ZERO_TOL):
    return abs(constraint_residual(c_hat, nu_hat, dx)) * dx <= tol


def family_input(name, c=1.0, nu=0.001, dx=0.05, eta1=1.0, max_order=8, seed=0):
    """(MEAInput, continuous flag) for a named solution family.

    Upwind weights carry the interior value across each face: F_left = c^ u2(k-1)
    and F_right = c^ u2(k).
    """
    if name not in FAMILIES:
        raise ConfigError(f"unknown family {name!r}; valid: {', '.join(FAMILIES)}")
    rng = np.random.default_rng(seed)
    g_rand = rng.uniform(-1.0, 1.0, 4)
    f_rand = rng.uniform(-1.0, 1.0, 4)
    g_cg = np.array([0.0, 2.0, 2.0, 0.0])
    kw = dict(dx=dx, eta1=eta1, max_order=max_order)
    if name == "trivial":
        if c == 0:
            raise ConfigError("trivial family needs c != 0")
        return MEAInput(0.0, 0.0, f_weights=np.zeros(4), g_weights=g_rand, **kw), False
    if name.startswith("case1"):
        ch = c
        f = {"case1_upwind": [ch, 0, ch, 0], "case1_upwind_dg": [ch, 0, ch, 0],
             "case1_internal": [0, ch, ch, 0], "case1_other": f_rand}[name]
        return (MEAInput(ch, 0.0, f_weights=f, g_weights=g_rand, **kw),
                name == "case1_upwind")
    if name == "case2_g2":
        return MEAInput(c, nu, f_weights=f_rand, g_weights=g_cg, **kw), False
    if name == "case2_cg":
        a = 4.0 * nu / dx
        return MEAInput(c, nu, f_weights=[c + a, 0, c - a, 0], g_weights=g_cg, **kw), True
    # case2_constraint: c^ = -4 nu^/dx, zero advective weights
    return MEAInput(-4.0 * nu / dx, nu, f_weights=np.zeros(4), g_weights=g_cg, **kw), False


@dataclass
class TrivialCheck:
    passed: bool
    offenders: list
    report: MEAReport
    input: MEAInput


def verify_trivial_solution(c, nu, dx, eta1=1.0, max_order=8, eta3="optimal", seed=0, tol=ZERO_TOL):
    """Check that eta2 = -1/c, eta3 = 1/nu and zero f-weights kill every error term.

    ``eta3=None`` drops the second-order penalty (nu^ = nu); any other number is
    used as given.  Offenders are ``(quantity, j, m, value)``.
    """
    if c == 0:
        raise ConfigError("trivial solution needs c != 0 (eta2 = -1/c)")
    if not nu > 0:
        raise ConfigError("trivial solution needs nu > 0 (eta3 = 1/nu)")
    c_hat = c + 1.0 / (-1.0 / c)
    if eta3 == "optimal":
        nu_hat = nu - 1.0 / (1.0 / nu)
    elif eta3 is None:
        nu_hat = nu
    else:
        nu_hat = nu - 1.0 / eta3
    rng = np.random.default_rng(seed)
    inp = MEAInput(c_hat, nu_hat, dx, eta1=eta1, g_weights=rng.uniform(-1, 1, 4),
                   f_weights=np.zeros(4), max_order=max_order)
    rep = analyze(inp)
    traces = rng.uniform(-1, 1, 5)
    off = []
    for j in range(3):
        for m in range(1, max_order + 1):
            if abs(rep.zhe[j, m - 1]) > tol:
                off.append(("zhe", j, m, float(rep.zhe[j, m - 1])))
        if abs(rep.c_tilde[j]) > tol:
            off.append(("c_tilde", j, 1, float(rep.c_tilde[j])))
        if abs(rep.nu_tilde[j]) > tol:
            off.append(("nu_tilde", j, 2, float(rep.nu_tilde[j])))
    s = rep.s_dg @ traces
    off += [("s_dg", j, 0, float(s[j])) for j in range(3) if abs(s[j]) > tol]
    return TrivialCheck(not off, off, rep, inp)


@dataclass
class FourierTaylorResult:
    taylor: float
    fourier: float
    difference: float
    residual: float


def _central_stencil(dx):
    return {-1: -0.5 / dx, 1: 0.5 / dx}


def fourier_taylor_check(c, dx, omegas, n_contour=64):
    """Leading dispersive coefficient of the central difference scheme two ways.

    Taylor: stencil moments give u_t + c u_x = kappa u_xxx with kappa = -c dx^2/6.
    Fourier: the omega^3 coefficient of the symbol c sin(omega dx)/dx, obtained by
    a trapezoidal Cauchy integral of the stencil symbol on |omega| = 1/dx.
    """
    st = _central_stencil(dx)
    mu3 = sum(a * (s * dx) ** 3 for s, a in st.items()) / 6.0
    taylor = -c * mu3

    def symbol(w):     # real-valued symbol: stencil applied to exp(i w x) divided by i exp(i w x)
        return c * sum(a * np.exp(1j * w * s * dx) for s, a in st.items()) / 1j

    rad = 1.0 / dx
    z = rad * np.exp(2j * np.pi * np.arange(n_contour) / n_contour)
    fourier = float(np.real(np.mean(symbol(z) / z ** 3)))

    resid = 0.0
    j = np.arange(-4, 5)
    for w in np.atleast_1d(omegas):
        u = np.exp(1j * w * j * dx)
        applied = sum(a * np.roll(u, -s) for s, a in st.items())[1:-1]
        expected = 1j * np.sin(w * dx) / dx * u[1:-1]
        resid = max(resid, float(np.max(np.abs(c * applied - c * expected))))
    return FourierTaylorResult(taylor, fourier, abs(taylor - fourier), resid)
