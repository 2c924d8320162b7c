"""Error norms over fluid/solid regions, eta1 decay fits and CSV output."""
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RegionError

CSV_COLUMNS = ("case_id", "K", "N", "dt", "t_final", "eta1", "eta2", "eta3",
               "scheme", "mask_delta", "error_fluid", "error_solid")


@dataclass
class ErrorReport:
    error_fluid: float
    error_solid: float
    fluid_region: tuple = None
    solid_region: tuple = None
    n_fluid: int = 0
    n_solid: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("error_fluid", "error_solid"):
            v = getattr(self, name)
            if not (v >= 0.0 or math.isnan(v)):
                raise ValueError(f"{name} must be non-negative, got {v}")

    def row(self):
        """CSV row (dict keyed by :data:`CSV_COLUMNS`)."""
        out = {k: self.metadata.get(k, "") for k in CSV_COLUMNS}
        out["error_fluid"] = self.error_fluid
        out["error_solid"] = self.error_solid
        return out


def _is_box(region):
    return len(region) == 2 and all(np.ndim(r) == 1 and len(r) == 2 for r in region)


def region_nodes(coords, centers, region, tol=1e-12):
    """Boolean node mask for ``region``.

    A node belongs to the region when it lies inside the closed region and its
    owning element's center does too, so duplicated interface nodes are
    assigned to exactly one side.

    ``coords``/``centers`` are ``x`` arrays in 1D (``[K, N+1]`` and ``[K]``) or
    tuples ``(X, Y)`` in 2D (``[Kx, Ky, P, P]`` and ``[Kx, Ky]``).
    ``region`` is ``(a, b)`` in 1D or ``((x0, x1), (y0, y1))`` in 2D.
    """
    if _is_box(region):
        (x0, x1), (y0, y1) = region
        X, Y = coords
        cx, cy = centers
        inside = ((X >= x0 - tol) & (X <= x1 + tol) & (Y >= y0 - tol) & (Y <= y1 + tol))
        own = (cx > x0) & (cx < x1) & (cy > y0) & (cy < y1)
        return inside & own[:, :, None, None]
    a, b = region
    x = np.asarray(coords)
    c = np.asarray(centers)
    inside = (x >= a - tol) & (x <= b + tol)
    own = (c > a) & (c < b)
    return inside & own[:, None]


def l2_error_region(values, coords, centers, region, exact=0.0):
    """RMS nodal deviation from ``exact`` over the nodes of ``region``.

    Normalized by the number of nodes in the region.  ``exact`` may be a
    constant or a callable of the node coordinates.
    """
    sel = region_nodes(coords, centers, region)
    n = int(np.count_nonzero(sel))
    if n == 0:
        raise RegionError(f"region {region} contains no nodes")
    values = np.asarray(values, dtype=float)
    if callable(exact):
        ref = exact(*coords) if _is_box(region) else exact(np.asarray(coords))
    else:
        ref = exact
    dev = np.broadcast_to(values - ref, sel.shape)[sel]
    return float(np.sqrt(np.mean(dev * dev)))


def error_report(values, coords, centers, fluid_region, solid_region, exact=0.0, metadata=None):
    ef = l2_error_region(values, coords, centers, fluid_region, exact)
    es = l2_error_region(values, coords, centers, solid_region, exact)
    return ErrorReport(
        ef, es, fluid_region, solid_region,
        int(np.count_nonzero(region_nodes(coords, centers, fluid_region))),
        int(np.count_nonzero(region_nodes(coords, centers, solid_region))),
        dict(metadata or {}),
    )


@dataclass
class DecayFit:
    slope: float
    table: list  # (eta1, error_fluid or None, status)


def fit_decay(eta1_values, errors):
    """Log-log slope of error versus eta1 over the finite, positive entries."""
    eta = np.asarray(eta1_values, dtype=float)
    err = np.asarray(errors, dtype=float)
    ok = np.isfinite(err) & (err > 0) & (eta > 0)
    eta, err = eta[ok], err[ok]
    if eta.size < 2 or np.ptp(np.log10(eta)) == 0.0:
        raise ValueError("decay slope undefined: need at least two distinct eta1 values")
    return float(np.polyfit(np.log10(eta), np.log10(err), 1)[0])


def eta1_decay_sweep(run_case, ladder):
    """Run ``run_case(eta1) -> ErrorReport`` over ``ladder`` and fit the decay.

    Diverged runs (any exception from the solver side) are kept in the table
    with their status and left out of the fit.
    """
    from .errors import DivergenceError

    ladder = [float(v) for v in ladder]
    if len(set(ladder)) < 2:
        raise ValueError("decay slope undefined: eta1 ladder has fewer than two distinct values")
    table = []
    for eta1 in ladder:
        try:
            rep = run_case(eta1)
            table.append((eta1, rep.error_fluid, "ok"))
        except DivergenceError as exc:
            table.append((eta1, None, f"diverged: {exc}"))
    good = [(e, v) for e, v, s in table if s == "ok"]
    slope = fit_decay([e for e, _ in good], [v for _, v in good]) if len(good) >= 2 else math.nan
    return DecayFit(slope, table)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(rows, fh=None, columns=CSV_COLUMNS):
    """Write rows (dicts) with a header; returns the text when ``fh`` is None."""
    own = fh is None
    fh = io.StringIO() if own else fh
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r.get(c)) for c in columns])
    return fh.getvalue() if own else None
