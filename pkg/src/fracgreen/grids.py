"""Quadrature grids on the unit ball and half-space slabs, plus sampled fields.

Ball grids are tensor products of a Gauss--Legendre radial rule (mapped to
(0, 1), weighted by r^{n-1}) with an angular set.  In n = 3 the angular set
is an exact equal-area partition: uniform bands in cos(theta) crossed with
uniform phi, so every angular cell carries the same solid angle and the grid
is exactly invariant under phi-rotations by multiples of 2*pi/n_phi.  For
n > 3 no equal-area product rule is attempted; a seeded pseudo-random
direction set with equal weights stands in, which downgrades angular accuracy
from spectral to ~K^{-1/2} -- acceptable because only n = 3 is exercised at
tight tolerances.

Slab grids are plain midpoint tensor grids on an axis-aligned box inside the
upper half-space.

Both grids carry per-point quadrature weights that sum to the covered volume
and a volume-equivalent cell radius used by the self-interaction terms of the
nonlocal operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ParameterError
from .params import HALF_SPACE, UNIT_BALL, DomainKind, ModelParams


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return 2.0 * np.pi ** (0.5 * n) / special.gamma(0.5 * n)


def ball_volume(n: int, radius: float = 1.0) -> float:
    return np.pi ** (0.5 * n) / special.gamma(0.5 * n + 1.0) * radius ** n


@dataclass(frozen=True)
class Grid:
    kind: str
    domain: DomainKind
    points: np.ndarray        # (N, n)
    weights: np.ndarray       # (N,)
    cell_radius: np.ndarray   # (N,)
    shape: tuple = ()         # constructor-specific counts, for refinement

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _angular_set(n: int, k_angular: int):
    """Directions and weights summing to the sphere area."""
    if n == 3:
        # factor k_angular = n_theta * n_phi with n_phi/n_theta ~ 2..3
        k_theta = max(1, int(np.sqrt(k_angular / 2.0)))
        while k_angular % k_theta:
            k_theta -= 1
        k_phi = k_angular // k_theta
        c = 1.0 - (2.0 * np.arange(k_theta) + 1.0) / k_theta  # band centers
        phi = 2.0 * np.pi * (np.arange(k_phi) + 0.5) / k_phi
        cs, ps = np.meshgrid(c, phi, indexing="ij")
        sn = np.sqrt(1.0 - cs ** 2)
        dirs = np.stack([sn * np.cos(ps), sn * np.sin(ps), cs], axis=-1)
        dirs = dirs.reshape(-1, 3)
        w = np.full(dirs.shape[0], 4.0 * np.pi / dirs.shape[0])
        return dirs, w, (k_theta, k_phi)
    # n > 3: seeded equal-weight directions (documented accuracy downgrade)
    rng = np.random.default_rng(1030 + 7 * n + k_angular)
    v = rng.standard_normal((k_angular, n))
    dirs = v / np.linalg.norm(v, axis=1, keepdims=True)
    w = np.full(k_angular, sphere_area(n) / k_angular)
    return dirs, w, (k_angular,)


def ball_grid(params: ModelParams, n_radial: int, n_angular: int,
              domain: DomainKind = UNIT_BALL) -> Grid:
    """Quadrature grid on a ball.

    domain may be the unit ball or ball_of_radius(R); in the latter case the
    points live on the ball of radius R centered at (0, ..., 0, R).
    """
    if n_radial < 2 or n_angular < 1:
        raise ParameterError("ball_grid needs n_radial >= 2, n_angular >= 1")
    if not domain.is_ball:
        raise ParameterError("ball_grid requires a ball domain")
    n = params.n
    R = domain.radius if domain.radius is not None else 1.0
    xg, wg = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * (xg + 1.0)
    wr = 0.5 * wg * r ** (n - 1)          # includes the volume element
    dirs, wa, ashape = _angular_set(n, n_angular)
    pts = (R * r[:, None, None]) * dirs[None, :, :]
    wts = (R ** n * wr[:, None]) * wa[None, :]
    pts = pts.reshape(-1, n) + domain.center(n)
    wts = wts.reshape(-1)
    cellr = (wts / ball_volume(n)) ** (1.0 / n)
    return Grid("ball", domain, pts, wts, cellr, (n_radial,) + ashape)


def slab_grid(params: ModelParams, box, counts) -> Grid:
    """Midpoint tensor grid on an axis-aligned box in the upper half-space.

    box: sequence of (lo, hi) per axis; the last axis must have lo >= 0.
    counts: cells per axis.
    """
    n = params.n
    box = [(float(lo), float(hi)) for lo, hi in box]
    counts = [int(c) for c in counts]
    if len(box) != n or len(counts) != n:
        raise ParameterError(f"box and counts must have length n = {n}")
    if any(c < 1 for c in counts):
        raise ParameterError("counts must be >= 1")
    if any(hi <= lo for lo, hi in box):
        raise ParameterError("box sides must satisfy lo < hi")
    if box[-1][0] < 0.0:
        raise ParameterError("slab must lie in the half-space: lo_n >= 0")
    axes = [lo + (hi - lo) * (np.arange(c) + 0.5) / c
            for (lo, hi), c in zip(box, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    cellvol = float(np.prod([(hi - lo) / c for (lo, hi), c in zip(box, counts)]))
    wts = np.full(pts.shape[0], cellvol)
    cellr = np.full(pts.shape[0], (cellvol / ball_volume(n)) ** (1.0 / n))
    return Grid("slab", HALF_SPACE, pts, wts, cellr, tuple(counts))


@dataclass(frozen=True)
class Field:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.size,):
            raise ParameterError(
                f"field has {vals.shape} values for a grid of size {self.grid.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise ParameterError("field values must be finite")

    @classmethod
    def from_function(cls, grid: Grid, f) -> "Field":
        return cls(grid, np.asarray(f(grid.points), dtype=float))

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.size))


def lp_norm(f: Field, p: float) -> float:
    """Grid-quadrature L^p norm."""
    if not (p > 0):
        raise ParameterError(f"p must be positive, got {p}")
    return float(np.sum(f.grid.weights * np.abs(f.values) ** p) ** (1.0 / p))
