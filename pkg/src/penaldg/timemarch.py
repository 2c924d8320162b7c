"""Explicit SSP-RK3 (Shu-Osher) time integration."""
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DivergenceError

CHECK_EVERY = 1000


@dataclass(frozen=True)
class TimeConfig:
    dt: float
    t_final: float
    record_interval: int = None

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        # t_final = 0 is allowed and means no step at all
        if self.t_final < 0.0 or (0.0 < self.t_final < self.dt * (1 - 1e-12)):
            raise ConfigError(f"t_final must be 0 or >= dt, got {self.t_final}")

    def step_sizes(self):
        """(number of full steps, size of the closing partial step or 0)."""
        ratio = self.t_final / self.dt
        n = round(ratio)
        if abs(ratio - n) <= 1e-9 * max(1.0, ratio):
            return int(n), 0.0
        n = math.floor(ratio)
        return n, self.t_final - n * self.dt


BLOWUP = 1e100


def _check(u, step, t):
    # finite but astronomically large states count as diverged too
    if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > BLOWUP:
        finite = u[np.isfinite(u)]
        raise DivergenceError(step, float(np.max(np.abs(finite))) if finite.size else math.nan, t)


def rk3_step(rhs, u, t, dt, step=None):
    u1 = u + dt * rhs(u, t)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1, t + dt))
    out = u / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs(u2, t + 0.5 * dt))
    _check(out, step, t + dt)
    return out


def integrate(rhs, u0, cfg, t0=0.0, callback=None):
    """March ``u' = rhs(u, t)`` from t0 to t0 + t_final; returns the final state."""
    u = np.array(u0, dtype=float)
    n, last = cfg.step_sizes()
    t = t0
    for k in range(n):
        u = rk3_step(rhs, u, t, cfg.dt, step=k + 1)
        t = t0 + (k + 1) * cfg.dt
        if callback is not None and cfg.record_interval and (k + 1) % cfg.record_interval == 0:
            callback(k + 1, t, u)
    if last > 0.0:
        u = rk3_step(rhs, u, t, last, step=n + 1)
        t = t0 + cfg.t_final
    if callback is not None:
        callback(n + (last > 0.0), t, u)
    return u


def assemble_matrix(rhs, shape, chunk=512, t=0.0):
    """Sparse matrix A and vector b with rhs(u) = A u + b (rhs must be affine).

    Columns are probed in batches, so ``rhs`` has to accept a trailing batch axis.
    """
    n = int(np.prod(shape))
    b = np.asarray(rhs(np.zeros(shape), t), dtype=float).reshape(n)
    blocks = []
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        E = np.zeros((n, stop - start))
        E[np.arange(start, stop), np.arange(stop - start)] = 1.0
        cols = np.asarray(rhs(E.reshape(tuple(shape) + (stop - start,)), t)).reshape(n, stop - start)
        cols = cols - b[:, None]
        blocks.append(sp.csc_matrix(cols))
    return sp.hstack(blocks).tocsr(), b


def rk3_propagator(A, dt):
    """Matrix of one SSP-RK3 step for u' = A u: I + dtA + (dtA)^2/2 + (dtA)^3/6."""
    n = A.shape[0]
    if sp.issparse(A):
        I = sp.identity(n, format="csr")
        dA = dt * A
        return (I + dA @ (I + dA @ (I + dA / 3.0) / 2.0)).tocsr()
    dA = dt * np.asarray(A)
    I = np.eye(n)
    return I + dA @ (I + dA @ (I + dA / 3.0) / 2.0)


def _affine_part(A, b, dt):
    """Constant forcing added by one SSP-RK3 step of u' = A u + b."""
    if not np.any(b):
        return None
    v = dt * b
    Av = A @ v
    return v + dt * Av / 2.0 + dt * dt * (A @ Av) / 6.0


def integrate_linear(A, u0, cfg, b=None, callback=None, dense_limit=2000):
    """SSP-RK3 for the autonomous affine system u' = A u + b via its step matrix.

    For linear operators of this kind one step of the three-stage scheme is
    exactly multiplication by :func:`rk3_propagator`.
    """
    shape = np.shape(u0)
    u = np.array(u0, dtype=float).reshape(-1)
    n_dof = u.size
    if sp.issparse(A) and n_dof <= dense_limit:
        A = A.toarray()
    b = np.zeros(n_dof) if b is None else np.asarray(b, dtype=float).reshape(-1)
    n, last = cfg.step_sizes()
    P = rk3_propagator(A, cfg.dt)
    r = _affine_part(A, b, cfg.dt)
    t = 0.0
    for k in range(n):
        # overflow is caught by the periodic check below
        with np.errstate(over="ignore", invalid="ignore"):
            u = P @ u
            if r is not None:
                u += r
        t = (k + 1) * cfg.dt
        if (k + 1) % CHECK_EVERY == 0:
            _check(u, k + 1, t)
        if callback is not None and cfg.record_interval and (k + 1) % cfg.record_interval == 0:
            callback(k + 1, t, u.reshape(shape))
    if last > 0.0:
        u = rk3_propagator(A, last) @ u
        r_last = _affine_part(A, b, last)
        if r_last is not None:
            u += r_last
        t = cfg.t_final
    _check(u, n + (last > 0.0), t)
    if callback is not None:
        callback(n + (last > 0.0), t, u.reshape(shape))
    return u.reshape(shape)
