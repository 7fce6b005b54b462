"""Closed-form paraxial Laguerre-Gauss fields and their analytic derivatives.

A mode is fixed by four numbers: radial index n, azimuthal index l,
wavenumber k and focal waist w0.  Fields here are pure spatial mode
functions (the carrier exp(i(kz - w t)) is stripped); time dependence only
exists in the exact-solution module.

Sign conventions, fixed once and used everywhere:
  * azimuthal phase  exp(+i l phi)
  * curvature phase  exp(+i k r^2 / (2 R_z)), stored as inverse curvature
    so the focal plane is regular
  * Gouy factor      exp(-i (2n+|l|+1) arctan(z/z_R))
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DiagnosticError, GridError
from .specfun import laguerre, laguerre_derivative, make_rule

__all__ = [
    "LGParams",
    "BeamGeometry",
    "PolarGrid",
    "FieldGrid",
    "beam_geometry",
    "lg_field",
    "sample",
    "norm",
    "inner",
    "lg_partials",
    "quadrature_polar_grid",
    "uniform_polar_grid",
    "thread_count",
]


@dataclass(frozen=True)
class LGParams:
    """The four numbers defining a paraxial Laguerre-Gauss mode."""

    n: int       # radial index, >= 0
    l: int       # azimuthal index (orbital angular momentum), any integer
    k: float     # wavenumber, rad/m
    w0: float    # waist at z = 0, m

    def __post_init__(self):
        if self.n < 0:
            raise DiagnosticError(f"radial index must be >= 0, got {self.n}")
        if self.k <= 0 or self.w0 <= 0:
            raise DiagnosticError("k and w0 must be positive")

    @property
    def rayleigh_range(self):
        return self.k * self.w0**2 / 2

    @property
    def paraxiality(self):
        """k*w0; the small-angle assumption is strained when this is small."""
        return self.k * self.w0

    @property
    def paraxial_strained(self):
        return self.paraxiality < 20.0

    @property
    def norm_constant(self):
        """Prefactor sqrt(2 n! / (pi (n+|l|)!)); lgamma keeps large n exact enough."""
        return math.sqrt(2.0 / math.pi
                         * math.exp(math.lgamma(self.n + 1) - math.lgamma(self.n + abs(self.l) + 1)))


@dataclass(frozen=True)
class BeamGeometry:
    """Derived beam geometry at a plane z."""

    w_z: float       # waist at z, m
    inv_R_z: float   # inverse radius of curvature, 1/m (0 at focus)
    phi_g: float     # Gouy phase, rad
    z: float         # m


def beam_geometry(params: LGParams, z: float) -> BeamGeometry:
    """Waist, inverse curvature and Gouy phase at propagation distance z."""
    zr = params.rayleigh_range
    w_z = params.w0 * math.sqrt(1.0 + (z / zr) ** 2)
    inv_r = z / (z * z + zr * zr)
    phi_g = math.atan2(z, zr)
    return BeamGeometry(w_z=w_z, inv_R_z=inv_r, phi_g=phi_g, z=z)


@dataclass(frozen=True)
class PolarGrid:
    """Polar sampling of a transverse plane at fixed z (and optional t).

    r_nodes must be strictly increasing and positive; phi_nodes uniformly
    spaced on [0, 2pi).  r_weights, when present, are quadrature weights for
    integrals in dr (the r of the area measure r dr dphi is applied by the
    norm/inner routines, not folded into the weights).
    """

    r_nodes: np.ndarray
    phi_nodes: np.ndarray
    z: float = 0.0
    t: float = 0.0
    r_weights: np.ndarray | None = None

    def __post_init__(self):
        r = np.asarray(self.r_nodes, dtype=float)
        p = np.asarray(self.phi_nodes, dtype=float)
        object.__setattr__(self, "r_nodes", r)
        object.__setattr__(self, "phi_nodes", p)
        r.setflags(write=False)
        p.setflags(write=False)
        if r.ndim != 1 or p.ndim != 1:
            raise GridError("grid node arrays must be 1-D")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise GridError("r_nodes must be positive and strictly increasing")
        if len(p) > 1:
            dp = np.diff(p)
            if not np.allclose(dp, dp[0], rtol=1e-12, atol=1e-15):
                raise GridError("phi_nodes must be uniformly spaced")
        if self.r_weights is not None:
            w = np.asarray(self.r_weights, dtype=float)
            object.__setattr__(self, "r_weights", w)
            w.setflags(write=False)
            if w.shape != r.shape:
                raise GridError("r_weights shape must match r_nodes")

    @property
    def shape(self):
        return (len(self.r_nodes), len(self.phi_nodes))

    @property
    def dphi(self):
        return 2.0 * math.pi / len(self.phi_nodes)

    @property
    def phi_uniform_period(self):
        """True when phi_nodes are j*dphi for j = 0..N-1 (full circle)."""
        n = len(self.phi_nodes)
        expect = np.arange(n) * (2.0 * math.pi / n) + self.phi_nodes[0]
        return bool(np.allclose(self.phi_nodes, expect, rtol=0, atol=1e-12))

    def mesh(self):
        return np.meshgrid(self.r_nodes, self.phi_nodes, indexing="ij")


@dataclass(frozen=True)
class FieldGrid:
    """Complex scalar field sampled on a PolarGrid, indexed [r, phi]."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", v)
        if v.shape != self.grid.shape:
            raise GridError(f"values shape {v.shape} does not match grid {self.grid.shape}")


def lg_field(params: LGParams, r, phi, z):
    """Complex LG amplitude at (r, phi, z); r and phi broadcast as arrays.

    Includes the normalization prefactor, so the mode has unit L2 norm under
    the transverse measure r dr dphi at every z.
    """
    geo = beam_geometry(params, z)
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    al = abs(params.l)
    wz = geo.w_z
    u = 2.0 * r**2 / wz**2
    radial = (params.norm_constant / wz
              * (math.sqrt(2.0) * r / wz) ** al
              * laguerre(params.n, al, u))
    envelope = np.exp(-(r**2) / wz**2
                      + 1j * (params.l * phi
                              + 0.5 * params.k * r**2 * geo.inv_R_z
                              - (2 * params.n + al + 1) * geo.phi_g))
    out = radial * envelope
    return out[()] if out.ndim == 0 else out


def thread_count():
    """Worker count for grid sampling, capped by LG_RADIAL_THREADS (0 = auto)."""
    raw = os.environ.get("LG_RADIAL_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 0:
        cap = 0
    auto = min(os.cpu_count() or 1, 8)
    return auto if cap == 0 else min(cap, auto)


def sample(params: LGParams, grid: PolarGrid) -> FieldGrid:
    """Sample a mode on a grid, parallelizing over radial blocks."""
    r, phi = grid.mesh()
    workers = thread_count()
    nr = len(grid.r_nodes)
    if workers <= 1 or nr < 4 * workers:
        values = lg_field(params, r, phi, grid.z)
    else:
        values = np.empty(grid.shape, dtype=complex)
        blocks = np.array_split(np.arange(nr), workers)
        def fill(idx):
            values[idx] = lg_field(params, r[idx], phi[idx], grid.z)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, blocks))
    return FieldGrid(grid=grid, values=values)


def _require_weights(grid: PolarGrid):
    if grid.r_weights is None:
        raise GridError("grid carries no radial quadrature weights; "
                        "build it with quadrature_polar_grid or uniform_polar_grid")
    return grid.r_weights


def inner(a: FieldGrid, b: FieldGrid) -> complex:
    """<a|b> = integral of conj(a) b under r dr dphi on a's grid."""
    w = _require_weights(a.grid)
    rad = np.sum(np.conj(a.values) * b.values, axis=1) * a.grid.dphi
    return complex(np.sum(w * a.grid.r_nodes * rad))


def norm(field: FieldGrid) -> float:
    """sqrt of the field's squared L2 norm under r dr dphi."""
    w = _require_weights(field.grid)
    rad = np.sum(np.abs(field.values) ** 2, axis=1) * field.grid.dphi
    return float(np.sqrt(np.sum(w * field.grid.r_nodes * rad)))


def lg_partials(params: LGParams, r, phi, z):
    """Analytic partial derivatives (d_r, d2_r, d_phi, d2_phi) of the mode.

    Valid for r > 0 only; the operator modules never touch the origin.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DiagnosticError("lg_partials requires r > 0")
    phi = np.asarray(phi, dtype=float)
    geo = beam_geometry(params, z)
    n, al = params.n, abs(params.l)
    wz = geo.w_z
    u = 2.0 * r**2 / wz**2
    du = 4.0 * r / wz**2
    ddu = 4.0 / wz**2
    c = -1.0 / wz**2 + 0.5j * params.k * geo.inv_R_z  # exponent coefficient of r^2

    P = (math.sqrt(2.0) * r / wz) ** al
    dP = al * P / r
    d2P = al * (al - 1) * P / r**2
    L = laguerre(n, al, u)
    Lu = laguerre_derivative(n, al, u)
    Luu = laguerre(n - 2, al + 2, u) if n >= 2 else np.zeros_like(u)
    dL = Lu * du
    d2L = Luu * du**2 + Lu * ddu
    E = np.exp(c * r**2)
    dE = 2.0 * c * r * E
    d2E = (2.0 * c + 4.0 * c**2 * r**2) * E

    pref = (params.norm_constant / wz
            * np.exp(1j * (params.l * phi - (2 * n + al + 1) * geo.phi_g)))
    value = pref * P * L * E
    d_r = pref * (dP * L * E + P * dL * E + P * L * dE)
    d2_r = pref * (d2P * L * E + P * d2L * E + P * L * d2E
                   + 2.0 * (dP * dL * E + dP * L * dE + P * dL * dE))
    d_phi = 1j * params.l * value
    d2_phi = -(params.l ** 2) * value
    return d_r, d2_r, d_phi, d2_phi


def _radial_extent(params: LGParams, z: float, n_max=None, l_max=None):
    n_max = params.n if n_max is None else n_max
    l_max = abs(params.l) if l_max is None else abs(l_max)
    wz = beam_geometry(params, z).w_z
    # 1.5x the classical turning radius, floored at 4.5 w_z so the Gaussian
    # tail beyond the edge stays below 1e-17 even for the lowest modes
    return wz * max(1.5 * math.sqrt(2.0 * (2 * n_max + l_max + 1)), 4.5)


def quadrature_polar_grid(params: LGParams, z=0.0, *, n_max=None, l_max=None,
                          nphi=32, order=None, t=0.0):
    """Gauss-Legendre polar grid sized for modes up to (n_max, l_max).

    The radial extent covers the classical turning radius of the largest
    requested mode with a 1.5x margin (floored at 4.5 w_z for the lowest
    modes); when `order` is not given the rule order is doubled until the
    sampled norm of that mode changes by < 1e-10.
    """
    n_max = params.n if n_max is None else n_max
    l_max = params.l if l_max is None else l_max
    rmax = _radial_extent(params, z, n_max, l_max)
    phi = np.arange(nphi) * (2.0 * math.pi / nphi)
    probe = LGParams(n_max, l_max, params.k, params.w0)

    def build(m):
        rule = make_rule("legendre", m, interval=(0.0, rmax))
        return PolarGrid(rule.nodes, phi, z=z, t=t, r_weights=rule.weights)

    if order is not None:
        return build(order)
    m = 64
    grid = build(m)
    prev = norm(sample(probe, grid))
    while m < 4096:
        m *= 2
        grid_next = build(m)
        cur = norm(sample(probe, grid_next))
        if abs(cur - prev) < 1e-10:
            return grid_next
        grid, prev = grid_next, cur
    raise DiagnosticError(f"polar grid norm did not settle by order {m}")


def uniform_polar_grid(params: LGParams, z=0.0, *, n_max=None, l_max=None,
                       nr=768, nphi=32, t=0.0):
    """Uniform radial grid (origin excluded) with midpoint weights.

    Suited to finite-difference operator application; the first node sits at
    half a step so 1/r terms stay bounded.  The midpoint rule is second
    order, ample for the norm ratios the FD paths need.
    """
    rmax = _radial_extent(params, z, n_max, l_max)
    h = rmax / nr
    r = (np.arange(nr) + 0.5) * h
    w = np.full(nr, h)
    phi = np.arange(nphi) * (2.0 * math.pi / nphi)
    return PolarGrid(r, phi, z=z, t=t, r_weights=w)
