"""Run configuration and its INI representation."""
import ast
import configparser
import dataclasses
import math
import operator
from dataclasses import dataclass, fields

from .errors import ConfigError

_SECTIONS = {
    "case": ("case_id", "dimension"),
    "mesh": ("x_bounds", "y_bounds", "K", "Ky", "N"),
    "physics": ("c", "nu", "c_y", "nu_y"),
    "penalization": ("eta1", "eta2", "eta3", "eta2_y", "eta3_y", "u_s"),
    "mask": ("solid_start", "solid_start_y", "solid_width", "mask_delta", "cancel_physical_flux"),
    "scheme": ("scheme", "flux"),
    "time": ("dt", "t_final"),
    "initial": ("ic", "omega", "ic_phase"),
    "regions": ("fluid_region", "fluid_region_y"),
}


@dataclass
class RunConfig:
    """One simulation: mesh, physics, penalty, mask, flux scheme, time and regions.

    2D runs use the ``*_y`` fields for the second direction; the solid is an
    L-shape whose corner sits at ``(solid_start, solid_start_y)`` and whose arms
    reach the upper domain bounds.
    """

    case_id: str = "run"
    dimension: int = 1
    x_bounds: tuple = (-1.0, 1.0)
    y_bounds: tuple = (-0.1, 0.1)
    K: int = 40
    Ky: int = None
    N: int = 3
    c: float = 1.0
    nu: float = 0.0
    c_y: float = 1.0
    nu_y: float = 0.0
    eta1: float = 1e-3
    eta2: float = None
    eta3: float = None
    eta2_y: float = None
    eta3_y: float = None
    u_s: float = 0.0
    solid_start: float = 0.0
    solid_start_y: float = 0.0
    solid_width: float = None          # default: one element
    mask_delta: float = 0.0            # 0 selects the sharp mask
    cancel_physical_flux: str = "auto"
    scheme: str = "upwind"
    flux: tuple = None                 # explicit (alpha, beta, gamma, delta)
    dt: float = 1e-5
    t_final: float = 1.1
    ic: str = "sin"
    omega: float = 8 * math.pi
    ic_phase: float = 0.0
    fluid_region: tuple = None         # default: from the solid's far face to the upper bound
    fluid_region_y: tuple = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.dimension not in (1, 2):
            raise ConfigError(f"dimension must be 1 or 2, got {self.dimension}")
        if int(self.K) < 1 or int(self.N) < 1:
            raise ConfigError("K and N must be positive integers")
        if self.Ky is not None and int(self.Ky) < 1:
            raise ConfigError("Ky must be a positive integer")
        for name in ("x_bounds", "y_bounds"):
            a, b = getattr(self, name)
            if not b > a:
                raise ConfigError(f"{name} must be increasing, got {(a, b)}")
        if not self.eta1 > 0:
            raise ConfigError(f"eta1 must be positive, got {self.eta1}")
        if self.mask_delta < 0:
            raise ConfigError(f"mask_delta must be >= 0, got {self.mask_delta}")
        if self.scheme not in ("upwind", "br1", "ldg", "custom"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.scheme == "custom" and (self.flux is None or len(self.flux) != 4):
            raise ConfigError("scheme 'custom' needs flux = alpha, beta, gamma, delta")
        if self.ic not in ("sin", "cos"):
            raise ConfigError(f"unknown initial condition {self.ic!r}")
        if not self.dt > 0 or self.t_final < 0:
            raise ConfigError("dt must be positive and t_final non-negative")
        if self.cancel_physical_flux not in ("auto", True, False):
            raise ConfigError("cancel_physical_flux must be auto, true or false")

    @property
    def dx(self):
        return (self.x_bounds[1] - self.x_bounds[0]) / int(self.K)

    @property
    def dy(self):
        return (self.y_bounds[1] - self.y_bounds[0]) / int(self.Ky or self.K)

    @property
    def width(self):
        return self.dx if self.solid_width is None else self.solid_width

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_ini(self):
        cp = configparser.ConfigParser()
        cp.optionxform = str
        for sec, keys in _SECTIONS.items():
            cp[sec] = {k: _format(getattr(self, k)) for k in keys}
        import io
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def _eval_num(text):
    """Evaluate a numeric literal or simple arithmetic with ``pi``."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.Name) and node.id in ("inf", "infinity"):
            return math.inf
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(text)
    return ev(ast.parse(text.strip(), mode="eval").body)


def _format(v):
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ", ".join(_format(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v).lower() if isinstance(v, bool) else str(v)


_TYPES = {f.name: f for f in fields(RunConfig)}
_TUPLES = {"x_bounds", "y_bounds", "flux", "fluid_region", "fluid_region_y"}
_INTS = {"dimension", "K", "Ky", "N"}
_STRS = {"case_id", "scheme", "ic"}


def parse_value(key, text):
    if key not in _TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    t = text.strip()
    if t.lower() in ("none", ""):
        return None
    try:
        if key in _STRS:
            return t
        if key == "cancel_physical_flux":
            low = t.lower()
            if low == "auto":
                return "auto"
            if low in ("true", "false"):
                return low == "true"
            raise ValueError(t)
        if key in _TUPLES:
            return tuple(float(_eval_num(p)) for p in t.split(","))
        if key in _INTS:
            return int(t)
        v = float(_eval_num(t))
        # infinite penalty parameters mean "term absent"
        return None if key.startswith(("eta2", "eta3")) and math.isinf(v) else v
    except (ValueError, SyntaxError) as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def from_mapping(values, base=None):
    """RunConfig from a flat ``key -> text`` mapping layered over ``base``."""
    parsed = {k: parse_value(k, v) for k, v in values.items()}
    base = base or RunConfig()
    try:
        return dataclasses.replace(base, **parsed)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path):
    """Read an INI file; section names only group keys and are otherwise ignored."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    flat = {}
    for sec in cp.sections():
        for k, v in cp[sec].items():
            if k in flat:
                raise ConfigError(f"key {k!r} given twice")
            flat[k] = v
    return from_mapping(flat)
