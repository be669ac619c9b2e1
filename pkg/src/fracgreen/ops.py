r"""Discretized nonlocal operators.

Three operators live here:

* `riesz_apply` / `riesz_value` -- the Riesz potential
      Tg(x) = \int |x-y|^{alpha-n} g(y) dy
  over a grid's covered region, with the self-interaction of each cell
  replaced by the exact integral of the kernel over the volume-equivalent
  ball (g(x) * sigma_{n-1} * r^alpha / alpha for cell radius r).

* `frac_laplacian_pv` -- the principal-value fractional Laplacian
      C_{n,alpha} * PV \int (u(x) - u(z)) |x-z|^{-n-alpha} dz
  evaluated by splitting at inner_radius (second-order Taylor term with a
  finite-difference Laplacian) and outer_radius (closed-form u(x) tail plus
  a power-law extrapolation model for u, whose worst case is reported as an
  error estimate).  C_{n,alpha} is the Fourier-symbol normalization, so the
  operator inverts A * riesz_apply; that consistency is tested, not assumed.

* `hls_ratio` -- the Hardy--Littlewood--Sobolev quotient
      ||Tg||_{L^p} / ||g||_{L^{np/(n+alpha p)}}
  used to probe boundedness of T between the conjugate Lebesgue spaces.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import special

from . import _accel
from .errors import ParameterError, TruncationError
from .grids import Field, Grid, lp_norm, sphere_area
from .params import ModelParams


def pv_constant(params: ModelParams) -> float:
    """Normalization C_{n,alpha} making the Fourier symbol |xi|^alpha."""
    n, a = params.n, params.alpha
    return (2.0 ** a * special.gamma(0.5 * (n + a))
            / (np.pi ** (0.5 * n) * abs(special.gamma(-0.5 * a))))


# ---------------------------------------------------------------------------
# Riesz potential


def riesz_apply(g: Field, params: ModelParams) -> Field:
    """Tg sampled on g's own grid (dense all-pairs, backend-accelerated)."""
    grid = g.grid
    out = _accel.ACTIVE.riesz_apply(
        np.ascontiguousarray(grid.points), grid.weights, grid.cell_radius,
        g.values, params.alpha, params.n, sphere_area(params.n))
    return Field(grid, out)


def riesz_value(g: Field, x, params: ModelParams, block: int = 256):
    """Tg at arbitrary points x (single point or (M, n) array).

    Evaluation points inside a source cell's equivalent ball (radius rho,
    center distance d) see a continuous surrogate for the cell's kernel
    integral: the exact value g*sigma*rho^alpha/alpha at d = 0, blended
    quadratically in d so it meets the point-kernel value at d = rho.
    """
    grid = g.grid
    X = np.atleast_2d(np.asarray(x, dtype=float))
    n, alpha = params.n, params.alpha
    ex = 0.5 * (alpha - n)
    sig = sphere_area(n)
    vn = sig / n                       # volume of the unit ball
    rho = grid.cell_radius
    at_center = sig * rho ** alpha / alpha
    at_edge = vn * rho ** alpha        # = weight * rho^{alpha-n}
    out = np.empty(X.shape[0])
    for lo in range(0, X.shape[0], block):
        hi = min(lo + block, X.shape[0])
        diff = X[lo:hi, None, :] - grid.points[None, :, :]
        s = np.einsum("ijk,ijk->ij", diff, diff)
        frac = s / rho[None, :] ** 2
        near = frac < 1.0
        s[near] = 1.0
        K = s ** ex * grid.weights[None, :]
        K[near] = 0.0
        incell = near * (at_center[None, :]
                         + (at_edge - at_center)[None, :] * frac)
        out[lo:hi] = (K + incell) @ g.values
    return out[0] if np.asarray(x).ndim == 1 else out


# ---------------------------------------------------------------------------
# principal-value fractional Laplacian


class PVResult(NamedTuple):
    value: float
    tail_bound: float


def _pv_angular_set(n: int, n_polar: int):
    if n == 3:
        c, wc = np.polynomial.legendre.leggauss(n_polar)
        n_phi = 2 * n_polar
        phi = 2.0 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
        cs, ps = np.meshgrid(c, phi, indexing="ij")
        sn = np.sqrt(1.0 - cs ** 2)
        dirs = np.stack([sn * np.cos(ps), sn * np.sin(ps), cs], axis=-1)
        w = np.broadcast_to(wc[:, None] * (2.0 * np.pi / n_phi),
                            cs.shape).copy()
        return dirs.reshape(-1, 3), w.reshape(-1)
    rng = np.random.default_rng(4099 + 13 * n + n_polar)
    k = 2 * n_polar * n_polar
    v = rng.standard_normal((k, n))
    dirs = v / np.linalg.norm(v, axis=1, keepdims=True)
    return dirs, np.full(k, sphere_area(n) / k)


def frac_laplacian_pv(u, x, params: ModelParams, inner_radius: float,
                      outer_radius: float, growth: float = 0.0,
                      n_polar: int = 16, n_radial: int = 16,
                      panels_per_decade: int = 4) -> PVResult:
    """(-Delta)^{alpha/2} u at x by principal-value quadrature.

    u must be a vectorized evaluator: u(Z) for Z of shape (M, n).  growth is
    a decay/growth hint, |u(z)| = O(|z - x|^growth) for |z - x| beyond
    outer_radius; the principal value only converges for growth < alpha, and
    growth >= alpha raises TruncationError.  Returns the value together with
    a conservative bound on the modeled far-field contribution.
    """
    x = np.asarray(x, dtype=float)
    n, alpha = params.n, params.alpha
    if not (0.0 < inner_radius < outer_radius):
        raise ParameterError("need 0 < inner_radius < outer_radius")
    if growth >= alpha:
        raise TruncationError(
            f"far-field hint growth={growth} >= alpha={alpha}: "
            "the principal value does not converge")
    sig = sphere_area(n)
    u0 = float(u(x[None, :])[0])

    # inner ball: second-order Taylor; odd term integrates to zero, the
    # quadratic term leaves -lap(u) * sigma/(2n) * r^{2-alpha}/(2-alpha)
    h = 0.5 * inner_radius
    steps = np.concatenate([np.eye(n), -np.eye(n)]) * h
    uu = u(x[None, :] + steps)
    lap = float(np.sum(uu - u0)) / h ** 2
    inner = -lap * sig / (2.0 * n) * inner_radius ** (2.0 - alpha) / (2.0 - alpha)

    # middle shell: geometric log-radius panels x angular rule
    dirs, aw = _pv_angular_set(n, n_polar)
    n_panels = max(1, int(np.ceil(
        panels_per_decade * np.log10(outer_radius / inner_radius))))
    edges = np.exp(np.linspace(np.log(inner_radius), np.log(outer_radius),
                               n_panels + 1))
    xg, wg = np.polynomial.legendre.leggauss(n_radial)
    middle = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        rho = 0.5 * (np.log(a) + np.log(b)) + 0.5 * (np.log(b) - np.log(a)) * xg
        wr = 0.5 * (np.log(b) - np.log(a)) * wg
        r = np.exp(rho)
        Z = x[None, None, :] + r[:, None, None] * dirs[None, :, :]
        uz = u(Z.reshape(-1, n)).reshape(len(r), -1)
        shell = (u0 - uz) @ aw                       # angular sums
        middle += float(np.sum(wr * r ** (-alpha) * shell))

    # far field: exact u(x) term plus power-law extrapolation of the
    # outermost angular average of u
    Zs = x[None, :] + outer_radius * dirs
    us = u(Zs)
    ubar = float(us @ aw) / sig
    umax = float(np.max(np.abs(us)))
    tail = sig * u0 * outer_radius ** (-alpha) / alpha \
        - sig * ubar * outer_radius ** (-alpha) / (alpha - growth)
    bound = sig * umax * outer_radius ** (-alpha) / (alpha - growth)

    C = pv_constant(params)
    return PVResult(C * (inner + middle + tail), C * bound)


# ---------------------------------------------------------------------------
# Hardy--Littlewood--Sobolev quotient


def hls_ratio(g: Field, p: float, params: ModelParams) -> float:
    """||Tg||_p / ||g||_q with the conjugate source exponent q = np/(n+alpha*p).

    The operator is bounded between these spaces only for p > n/(n-alpha);
    smaller p raises ParameterError.
    """
    n, alpha = params.n, params.alpha
    p_min = n / (n - alpha)
    if not (p > p_min):
        raise ParameterError(
            f"hls_ratio requires p > n/(n-alpha) = {p_min}, got {p}")
    q = n * p / (n + alpha * p)
    denom = lp_norm(g, q)
    if denom == 0.0:
        raise ParameterError("hls_ratio of the zero field is undefined")
    return lp_norm(riesz_apply(g, params), p) / denom
