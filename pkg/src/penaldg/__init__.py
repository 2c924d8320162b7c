"""Penalized nodal DG solver for advection-diffusion with immersed solids, and an N=2 modified-equation analysis."""
from .basis import QuadratureRule, gauss_lobatto_nodes, gauss_lobatto_rule, lagrange_derivative_matrix
from .config import RunConfig, load_config
from .diagnostics import ErrorReport, l2_error_region, write_csv
from .errors import (ConfigError, DivergenceError, MaskError, MeshError, PenalDGError,
                     RegionError, ShapeError)
from .geometry import Interval1D, LShape2D, MaskParams, nodal_mask
from .operator1d import FluxScheme, Mesh1D, PenalizationConfig, PenalizedOperator1D
from .solver2d import Mesh2D, Penalization2D, PenalizedOperator2D
from .timemarch import TimeConfig, integrate, integrate_linear

__version__ = "0.1.0"
