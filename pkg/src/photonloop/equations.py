"""Discretization of integral and differential equations into linear
systems, solved end to end through the tiled loop engine.

Three families are covered: second-kind integral equations via the
rectangular (midpoint) rule, second-order two-point boundary problems via
central differences, and the Poisson equation on the unit square via the
five-point stencil with zero Dirichlet boundaries.
"""

import math
from dataclasses import dataclass

import numpy as np

from .blocks import (
    assemble,
    block_invert,
    block_multiply,
    pad,
    partition,
    pow2_scale,
)
from .errors import ZeroReference
from .linalg import accuracy_percent, as_matrix, as_vector, dense_solve
from .loop import LoopConfig


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid; midpoint flavour for integral equations,
    interior-node flavour for boundary-value problems."""

    a: float
    b: float
    n: int
    kind: str = "midpoint"

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("need b > a")
        if self.n < 2:
            raise ValueError("need at least two points")
        if self.kind not in ("midpoint", "interior"):
            raise ValueError("kind must be 'midpoint' or 'interior'")

    @property
    def h(self):
        if self.kind == "midpoint":
            return (self.b - self.a) / self.n
        return (self.b - self.a) / (self.n + 1)

    @property
    def points(self):
        if self.kind == "midpoint":
            return self.a + (np.arange(self.n) + 0.5) * self.h
        return self.a + (np.arange(1, self.n + 1)) * self.h


@dataclass(frozen=True)
class Grid2D:
    """Interior nodes of the unit square, n per side, zero boundary."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two interior points per side")

    @property
    def h(self):
        return 1.0 / (self.n + 1)

    @property
    def points(self):
        return (np.arange(1, self.n + 1)) * self.h

    def index(self, i, j):
        """Flat unknown index of interior node (i, j), both 0-based."""
        return j * self.n + i


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    provenance: str

    def __post_init__(self):
        m = as_matrix(self.matrix, "system matrix")
        r = as_vector(self.rhs, "rhs")
        if m.shape[0] != m.shape[1]:
            raise ValueError("system matrix must be square")
        if r.shape[0] != m.shape[0]:
            raise ValueError("rhs length must match the system dimension")


def assemble_fredholm(kernel, source, grid):
    """Second-kind integral equation on [a, b] by the midpoint rule.

    Unknown samples f(t_i) satisfy (I - h*K) f = c with K_ij = kernel(t_i, s_j)
    and c_i = source(t_i), the same midpoints on both axes.
    """
    if grid.kind != "midpoint":
        raise ValueError("integral equations use the midpoint grid")
    pts = grid.points
    sampled = np.array([[kernel(ti, sj) for sj in pts] for ti in pts])
    matrix = np.eye(grid.n) - grid.h * sampled
    rhs = np.array([source(ti) for ti in pts])
    return LinearSystem(matrix, rhs, f"fredholm n={grid.n} on [{grid.a}, {grid.b}]")


def assemble_ode(p, q, r, interval, boundary, n):
    """Two-point boundary problem y'' + p y' + q y = r, Dirichlet ends.

    Central differences on n evenly spaced interior nodes; the boundary
    values fold into the first and last right-hand entries.
    """
    x0, x1 = interval
    y0, y1 = boundary
    grid = Grid1D(x0, x1, n, kind="interior")
    h = grid.h
    pts = grid.points
    matrix = np.zeros((n, n))
    rhs = np.zeros(n)
    for i in range(n):
        x = pts[i]
        lower = 1.0 / h**2 - p(x) / (2.0 * h)
        diag = -2.0 / h**2 + q(x)
        upper = 1.0 / h**2 + p(x) / (2.0 * h)
        matrix[i, i] = diag
        rhs[i] = r(x)
        if i > 0:
            matrix[i, i - 1] = lower
        else:
            rhs[i] -= lower * y0
        if i < n - 1:
            matrix[i, i + 1] = upper
        else:
            rhs[i] -= upper * y1
    return LinearSystem(matrix, rhs, f"ode n={n} on [{x0}, {x1}]")


def assemble_poisson(source, n):
    """Five-point Laplacian on the unit square with zero boundary values.

    Unknowns are the n*n interior values ordered by index(i, j) = j*n + i;
    solving gives u with laplacian(u) = source.
    """
    grid = Grid2D(n)
    h = grid.h
    pts = grid.points
    dim = n * n
    matrix = np.zeros((dim, dim))
    rhs = np.zeros(dim)
    for j in range(n):
        for i in range(n):
            row = grid.index(i, j)
            matrix[row, row] = -4.0 / h**2
            rhs[row] = source(pts[i], pts[j])
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                ni, nj = i + di, j + dj
                if 0 <= ni < n and 0 <= nj < n:
                    matrix[row, grid.index(ni, nj)] = 1.0 / h**2
                # off-grid neighbours are zero Dirichlet values: no term
    return LinearSystem(matrix, rhs, f"poisson n={n} ({dim}x{dim})")


@dataclass
class SolveOutcome:
    solution: np.ndarray
    diagnostics: dict | None = None


def solve_system(system, cfg=None, cals=None, diagnostics=False, stream=()):
    """Solve a linear system end to end on the tiled loop engine.

    The matrix is sign-normalized (stationary iteration with a positive
    relaxation factor needs the spectrum in the right half plane, and the
    discretized Laplacians here are negative definite), rescaled by an
    exact power of two into the encodable range, identity-padded, block
    inverted, and applied to the right-hand side with a block multiply.
    """
    cfg = cfg or LoopConfig()
    matrix = as_matrix(system.matrix)
    rhs = as_vector(system.rhs)
    n = matrix.shape[0]

    sign = -1.0 if float(np.trace(matrix)) < 0.0 else 1.0
    work = sign * matrix
    factor = pow2_scale(work)
    work = work / factor

    padded = pad(work, "identity")
    dim = padded.shape[0]
    grid = partition(padded, n_orig=n)
    inverse = block_invert(grid, cfg, cals=cals, stream=(*stream, 1))

    rhs_matrix = np.zeros((dim, dim))
    rhs_matrix[:n, 0] = rhs
    rhs_grid = partition(rhs_matrix, n_orig=n)
    product = block_multiply(inverse, rhs_grid, cfg, cals=cals, stream=(*stream, 2))
    solution = (sign / factor) * assemble(product)[:n, 0]

    outcome = SolveOutcome(solution=solution)
    if diagnostics:
        reference = dense_solve(matrix, rhs)
        try:
            acc_fro = accuracy_percent(solution, reference, "fro")
            acc_spec = accuracy_percent(solution, reference, "spectral")
        except ZeroReference:
            # a legitimately zero solution has no relative-error score
            acc_fro = acc_spec = None
        outcome.diagnostics = {
            "dense_reference": reference,
            "accuracy_fro_percent": acc_fro,
            "accuracy_spectral_percent": acc_spec,
            "scale_factor": factor,
            "sign_flipped": sign < 0,
        }
    return outcome


# ---------------------------------------------------------------------------
# Named function registry for config-driven problem definitions.

def _poly(coeffs):
    coeffs = [float(c) for c in coeffs]

    def f(x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    return f


FUNCTIONS_1D = {
    "zero": lambda x: 0.0,
    "one": lambda x: 1.0,
    "identity": lambda x: x,
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sin_pi": lambda x: math.sin(math.pi * x),
}

KERNELS_2D = {
    "product": lambda t, s: t * s,
    "constant": lambda t, s: 1.0,
    "exp_product": lambda t, s: math.exp(t * s),
}

SOURCES_2D = {
    "zero": lambda x, y: 0.0,
    "one": lambda x, y: 1.0,
    "product_sine": lambda x, y: math.sin(math.pi * x) * math.sin(math.pi * y),
}


def _scaled(f, scale):
    if scale == 1.0:
        return f
    return lambda *args: scale * f(*args)


def make_function(spec, registry=FUNCTIONS_1D):
    """Build a callable from a config entry.

    Accepts a registry name, a number (constant), {"poly": [c0, c1, ...]},
    or {"name": ..., "scale": s}.
    """
    if isinstance(spec, (int, float)):
        value = float(spec)
        return lambda *args: value
    if isinstance(spec, str):
        if spec not in registry:
            raise KeyError(f"unknown function {spec!r}; have {sorted(registry)}")
        return registry[spec]
    if isinstance(spec, dict):
        if "poly" in spec:
            return _scaled(_poly(spec["poly"]), float(spec.get("scale", 1.0)))
        if "name" in spec:
            return _scaled(make_function(spec["name"], registry), float(spec.get("scale", 1.0)))
    raise KeyError(f"cannot interpret function spec {spec!r}")
