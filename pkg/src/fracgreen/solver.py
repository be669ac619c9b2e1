"""Integral-equation solvers and the moving-plane / Liouville diagnostics.

The linear problem u = int G(x,y) g(y) dy is a dense quadrature sum; the
kernel matrix carries the quadrature weights and a self-cell correction
using the interior form A |x-y|^{alpha-n} of the kernel, integrated exactly
over the volume-equivalent cell ball.

The power problem u = int G u^p is solved by normalized fixed-point
iteration: v <- T(v^p)/max T(v^p).  The pure power nonlinearity makes the
rescaling exact: if v = T(v^p)/lambda at the fixed point, then
u = lambda^{-1/(p-1)} v solves the unnormalized equation identically.  On
ball grids a second stage restricts to the radial ansatz -- the kernel is
shell-averaged into a small matrix over radii -- which removes the angular
quadrature anisotropy of the full grid and converges to machine precision;
the returned residual is measured in the system the final stage solved,
and the full-grid residual is reported alongside as a discretization
diagnostic.

Moving-plane sweeps evaluate w_lambda = u(x^lambda) - u(x) over the swept
cap for a ladder of plane positions.  Reflected points are interpolated:
monotone radial interpolation per angular column with nearest-direction
lookup on ball grids, multilinear interpolation on slab grids.  The
interpolation error proxy (spline vs linear at the queried radii) is
reported with each plane so conclusions can be weighed against it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate

from . import _accel
from .errors import (
    DegenerateError,
    NonConvergenceError,
    ParameterError,
    SingularityError,
)
from .grids import Field, Grid, sphere_area
from .kernel import green_constants, kernel_tables
from .params import DomainKind, ModelParams


# ---------------------------------------------------------------------------
# kernel matrix assembly


def _reduced_coords(grid: Grid, params: ModelParams):
    """Normalized points, boundary factors, and the kernel prefactor scale."""
    dom = grid.domain
    if dom.kind == "half_space":
        X = grid.points
        fx = 2.0 * X[:, -1]
        return X, fx, 1.0
    R = dom.radius if dom.radius is not None else 1.0
    X = (grid.points - dom.center(grid.dim)) / R
    fx = 1.0 - np.einsum("ij,ij->i", X, X)
    return X, fx, R ** (params.alpha - params.n)


def green_matrix(grid: Grid, params: ModelParams) -> np.ndarray:
    """Dense solve matrix M[i,j] = w_j G~(x_i, x_j).

    G~ is the in-cell regularized kernel of the accelerated backend: near
    pairs (closer than a cell radius) get the quadratic blend between the
    exact cell-ball average and the edge value, which covers the diagonal
    (s=0 reproduces the classical self-cell term A*sigma*rho^alpha/alpha
    per unit weight) and keeps boundary-layer rows bounded.
    """
    X, fx, scale = _reduced_coords(grid, params)
    dom = grid.domain
    R = dom.radius if (dom.is_ball and dom.radius is not None) else 1.0
    con = green_constants(params)
    tab = kernel_tables(params)
    half_nma = 0.5 * (params.n - params.alpha)
    X = np.ascontiguousarray(X)
    G = _accel.ACTIVE.green_matrix(X, X, fx, fx, grid.cell_radius / R, tab,
                                   con.A, half_nma, params.alpha)
    return scale * G * grid.weights[None, :]


def dirichlet_solve(grid: Grid, g: Field, params: ModelParams) -> Field:
    """u(x_i) = sum_j w_j G(x_i, y_j) g(y_j) on the grid."""
    if g.grid is not grid:
        raise ParameterError("field must live on the grid being solved on")
    return Field(grid, green_matrix(grid, params) @ g.values)


def dirichlet_value(g: Field, x, params: ModelParams, block: int = 2048):
    """The solution integral int G(z, y) g(y) dy at arbitrary points z.

    Continuous in z: inside a source cell's equivalent ball the kernel is
    replaced by a quadratic blend between the exact cell self-integral at
    the center and the point-kernel value at the cell edge, so evaluators
    built on this are safe to feed to the principal-value operator.
    """
    grid = g.grid
    X, fx, scale = _reduced_coords(grid, params)
    dom = grid.domain
    R = dom.radius if (dom.is_ball and dom.radius is not None) else 1.0
    Zin = np.atleast_2d(np.asarray(x, dtype=float))
    if dom.kind == "half_space":
        Z = Zin
        fz = 2.0 * Z[:, -1]
    else:
        Z = np.ascontiguousarray((Zin - dom.center(grid.dim)) / R)
        fz = 1.0 - np.einsum("ij,ij->i", Z, Z)
    con = green_constants(params)
    tab = kernel_tables(params)
    half_nma = 0.5 * (params.n - params.alpha)
    rho = grid.cell_radius / R             # cell radii in reduced units
    wv = grid.weights * g.values / R ** grid.dim
    X = np.ascontiguousarray(X)
    out = np.empty(Z.shape[0])
    for lo in range(0, Z.shape[0], block):
        hi = min(lo + block, Z.shape[0])
        G = _accel.ACTIVE.green_matrix(Z[lo:hi], X, fz[lo:hi], fx, rho, tab,
                                       con.A, half_nma, params.alpha)
        out[lo:hi] = G @ wv
    out *= R ** grid.dim * scale
    return out[0] if np.asarray(x).ndim == 1 else out


# ---------------------------------------------------------------------------
# nonlinear power solve


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for the normalized power iteration.

    damping defaults to 1/2: the superlinear nonlinearity makes the
    undamped normalized map overshoot and lock into a two-cycle (the
    iterate bounces between an over- and an under-concentrated profile);
    averaging with the previous iterate restores geometric convergence.
    """

    max_iter: int = 300
    tol: float = 1e-11
    damping: float = 0.5
    init: object = "flat"     # "flat", "bump", or a Field

    def __post_init__(self):
        if self.max_iter < 1:
            raise ParameterError("max_iter must be >= 1")
        if not (self.tol > 0.0):
            raise ParameterError("tol must be positive")
        if not (0.0 < self.damping <= 1.0):
            raise ParameterError("damping must lie in (0, 1]")
        if isinstance(self.init, str) and self.init not in ("flat", "bump"):
            raise ParameterError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class SolveResult:
    u: Field
    lambda_star: float
    iters: int
    residual: float            # in the system the final stage solved
    fullgrid_residual: float   # diagnostic: same u against the full matrix
    stage: str                 # "full" or "radial"
    history: tuple = field(default_factory=tuple)


def _initial_iterate(grid: Grid, init) -> np.ndarray:
    if isinstance(init, Field):
        v = np.array(init.values, dtype=float)
    elif init == "flat":
        v = np.ones(grid.size)
    else:  # "bump"
        dom = grid.domain
        if dom.is_ball:
            R = dom.radius if dom.radius is not None else 1.0
            r2 = np.einsum("ij,ij->i", grid.points - dom.center(grid.dim),
                           grid.points - dom.center(grid.dim)) / R ** 2
            v = np.maximum(1.0 - r2, 0.0)
        else:
            xn = grid.points[:, -1]
            v = xn * np.exp(-np.einsum("ij,ij->i", grid.points, grid.points))
    if np.any(v < 0.0) or not np.any(v > 0.0):
        raise DegenerateError("initial iterate must be nonnegative and nonzero")
    return v


def _power_iterate(apply_T, v, p, tol, max_iter, damping):
    """Normalized fixed-point loop; returns (v, lambda, iters, history)."""
    hist = []
    for k in range(max_iter):
        Tv = apply_T(v ** p)
        lam = float(np.max(Tv))
        if not np.isfinite(lam) or lam <= 0.0:
            raise DegenerateError(
                f"iterate degenerated at step {k}: max T(v^p) = {lam}")
        vn = Tv / lam
        if damping < 1.0:
            vn = (1.0 - damping) * v + damping * vn
        delta = float(np.max(np.abs(vn - v)) / np.max(np.abs(vn)))
        hist.append(delta)
        v = vn
        if delta <= tol:
            return v, lam, k + 1, hist
    raise NonConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} steps "
        f"(last delta {hist[-1]:.3e})", history=hist)


class _RadialKernel:
    """k(r, r') = r'^{n-1} * integral of the kernel over the direction sphere.

    Reducing the angular integral to the squared-distance variable s (the
    boundary product t is constant on a shell pair) gives

        k = sigma_{n-2} r'^{n-1} (2 r r')^{-(n-2)}
            * int_a^b [(s-a)(b-s)]^{(n-3)/2} s^{-(n-alpha)/2} bracket(s/t) ds

    with a = (r-r')^2, b = (r+r')^2.  The s-integral runs over geometric
    panels in log s with fixed Gauss nodes; for n = 3 the endpoint factors
    drop out and the rule is spectrally accurate, for higher n the mild
    algebraic endpoints cost a few digits (only diagnostics use those).
    """

    PANELS = 16
    NODES = 8

    def __init__(self, params: ModelParams):
        self.params = params
        self.tab = kernel_tables(params)
        self.A = green_constants(params).A
        x, w = np.polynomial.legendre.leggauss(self.NODES)
        self.gx = 0.5 * (x + 1.0)
        self.gw = 0.5 * w
        self.q = 0.5 * (params.n - params.alpha)
        self.edge_pow = 0.5 * (params.n - 3.0)

    def __call__(self, r, rp):
        """Vectorized over matching arrays r, rp (values in [0, 1))."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        rp = np.atleast_1d(np.asarray(rp, dtype=float))
        n = self.params.n
        t = (1.0 - r * r) * (1.0 - rp * rp)
        a = (r - rp) ** 2
        b = (r + rp) ** 2
        out = np.zeros(np.broadcast(r, rp).shape)
        center = (r == 0.0) | (rp == 0.0)
        # concentric limit: the sphere integral is a single kernel value
        cmask = center & (b > 0.0)
        if np.any(cmask):
            S = b[cmask] / np.maximum(t[cmask], 1e-300)
            _, br = _accel.ACTIVE.bracket_batch(S, self.tab)
            rr = np.broadcast_to(rp, out.shape)[cmask]
            out[cmask] = (sphere_area(n) * rr ** (n - 1)
                          * self.A * b[cmask] ** (-self.q) * br)
        gen = ~center
        if np.any(gen):
            av, bv = a[gen], b[gen]
            if np.any(av <= 0.0):
                raise SingularityError(
                    "radial kernel evaluated on its diagonal r == r'")
            tv = np.maximum(t[gen], 1e-300)
            la, lb = np.log(av), np.log(bv)
            # geometric panels in log s
            edges = la[:, None] + (lb - la)[:, None] * np.linspace(
                0.0, 1.0, self.PANELS + 1)[None, :]
            lo = edges[:, :-1, None]
            width = (edges[:, 1:] - edges[:, :-1])[:, :, None]
            ls = lo + width * self.gx[None, None, :]
            s = np.exp(ls)
            _, br = _accel.ACTIVE.bracket_batch((s / tv[:, None, None]).ravel(),
                                                self.tab)
            br = br.reshape(s.shape)
            f = s ** (1.0 - self.q) * br
            if n != 3:
                f = f * ((s - av[:, None, None])
                         * (bv[:, None, None] - s)) ** self.edge_pow
            integral = np.einsum("ipk,ipk->i", f,
                                 width * self.gw[None, None, :])
            rv = np.broadcast_to(r, out.shape)[gen]
            rpv = np.broadcast_to(rp, out.shape)[gen]
            pref = (sphere_area(n - 1) * rpv ** (n - 1)
                    * (2.0 * rv * rpv) ** (2 - n) if n != 3
                    else np.pi * rpv / rv)
            out[gen] = pref * self.A * integral
        return out


_RADIAL_OP_CACHE = {}


def radial_operator(nodes: np.ndarray, params: ModelParams,
                    R: float = 1.0) -> np.ndarray:
    """Product-integration matrix of the radial solve operator.

    nodes must be an increasing grid on [0, 1) in reduced coordinates
    (node values are solution samples; piecewise-linear in between, zero
    beyond the last node).  Entry [i, k] integrates the radial kernel at
    r_i against the hat function of node k; the integrable kernel
    singularity at r' = r_i is handled by adaptive quadrature on the
    adjacent segments.  A ball of radius R scales the operator by R^alpha.
    Matrices are cached per (nodes, n, alpha, R).
    """
    from scipy import integrate

    key = (params.n, params.alpha, float(R), nodes.tobytes())
    hit = _RADIAL_OP_CACHE.get(key)
    if hit is not None:
        return hit

    ker = _RadialKernel(params)
    m = len(nodes)
    segs = np.append(nodes, 1.0)
    K = np.zeros((m, m))
    gx, gw = np.polynomial.legendre.leggauss(8)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for i in range(m):
            ri = nodes[i]

            def kval(rp):
                return float(ker(np.array([ri]), np.array([rp]))[0])

            for kseg in range(m):
                lo, hi = segs[kseg], segs[kseg + 1]
                width = hi - lo
                if width <= 0.0:
                    continue
                # hat weights: on [r_k, r_{k+1}] the left hat is
                # (hi - r')/width, the right hat (r' - lo)/width; beyond the
                # last node the field tapers linearly to zero at r = 1
                if abs(kseg - i) <= 1 or kseg == i - 2:
                    # kernel singular at r' = ri (on or next to this segment)
                    pts = [ri] if lo < ri < hi else None
                    wl = integrate.quad(
                        lambda rp: kval(rp) * (hi - rp) / width,
                        lo, hi, points=pts, limit=200)[0]
                    wr = integrate.quad(
                        lambda rp: kval(rp) * (rp - lo) / width,
                        lo, hi, points=pts, limit=200)[0]
                else:
                    rp = lo + width * gx
                    kv = ker(np.full_like(rp, ri), rp)
                    wl = float(np.sum(gw * kv * (hi - rp)))
                    wr = float(np.sum(gw * kv * (rp - lo)))
                K[i, kseg] += wl
                if kseg + 1 < m:
                    K[i, kseg + 1] += wr
    K *= R ** params.alpha
    K.setflags(write=False)
    _RADIAL_OP_CACHE[key] = K
    return K


def shell_structure(grid: Grid):
    """(n_radial, n_angular, radii) of a ball grid's tensor layout."""
    if grid.kind != "ball":
        raise ParameterError("shell structure requires a ball grid")
    nr = grid.shape[0]
    k = grid.size // nr
    dom = grid.domain
    c = dom.center(grid.dim)
    radii = np.linalg.norm(grid.points.reshape(nr, k, grid.dim)[:, 0, :] - c,
                           axis=1)
    return nr, k, radii


def radial_matrix(M: np.ndarray, grid: Grid) -> np.ndarray:
    """Shell average of the solve matrix: maps radial profiles to the
    shell-mean of the full operator applied to the shell-constant field.

    Diagnostic quality only -- the angular point quadrature leaves a noisy
    per-shell error; radial_operator is the accurate radial discretization.
    """
    nr, k, _ = shell_structure(grid)
    return M.reshape(nr, k, nr, k).sum(axis=(1, 3)) / k


def radial_profile(f: Field):
    """(radii, shell means, max deviation from the mean) of a ball field."""
    nr, k, radii = shell_structure(f.grid)
    v = f.values.reshape(nr, k)
    mean = v.mean(axis=1)
    dev = float(np.max(np.abs(v - mean[:, None])))
    return radii, mean, dev


def nonlinear_power_solve(grid: Grid, p: float, opts: SolveOptions,
                          params: ModelParams) -> SolveResult:
    """Positive solution of u = int G u^p by normalized power iteration.

    Ball grids get a radial second stage: the shell-averaged kernel is
    iterated to machine precision, which makes the output exactly radial.
    If the full-grid loop stalls, the radial stage still runs (the radial
    ansatz is the fallback); NonConvergenceError is raised only when no
    stage converges.
    """
    if not (1.0 < p):
        raise ParameterError(f"power solve needs p > 1, got {p}")
    M = green_matrix(grid, params)
    v = _initial_iterate(grid, opts.init)
    v = v / np.max(v)
    # on ball grids the full-grid loop only seeds the radial stage, so a
    # loose tolerance suffices there; elsewhere it must meet opts.tol itself
    loose = max(opts.tol, 1e-6) if grid.kind == "ball" else opts.tol
    full_err = None
    try:
        v, lam, iters, hist = _power_iterate(
            lambda w: M @ w, v, p, loose, opts.max_iter, opts.damping)
    except NonConvergenceError as e:
        if grid.kind != "ball":
            raise
        full_err, iters, hist = e, opts.max_iter, list(e.history)

    if grid.kind == "ball":
        nr, k, radii = shell_structure(grid)
        dom = grid.domain
        R = dom.radius if dom.radius is not None else 1.0
        m_nodes = max(48, 2 * nr)
        nodes = np.linspace(0.0, 1.0, m_nodes + 1)[:-1]
        Kr = radial_operator(nodes, params, R=R)
        shell_means = v.reshape(nr, k).mean(axis=1)
        order = np.argsort(radii)
        vr = np.interp(nodes, radii[order] / R, shell_means[order])
        if not np.any(vr > 0.0):
            raise DegenerateError("radial stage received a zero profile")
        try:
            # the radial system is tiny, so its iteration cap is generous
            vr, lam, it2, hist2 = _power_iterate(
                lambda w: Kr @ w, vr / np.max(vr), p, opts.tol,
                max(opts.max_iter, 2000), opts.damping)
        except NonConvergenceError:
            if full_err is not None:
                raise
            # fall back to the full-grid answer below
            scale = lam ** (-1.0 / (p - 1.0))
            u = scale * v
            res = float(np.max(np.abs(u - M @ u ** p)) / np.max(np.abs(u)))
            return SolveResult(Field(grid, u), lam, iters, res, res,
                               "full", tuple(hist))
        scale = lam ** (-1.0 / (p - 1.0))
        ur = scale * vr
        res = float(np.max(np.abs(ur - Kr @ ur ** p)) / np.max(np.abs(ur)))
        prof = interpolate.PchipInterpolator(
            np.append(nodes, 1.0), np.append(ur, 0.0))(radii / R)
        u = np.repeat(prof, k)
        fres = float(np.max(np.abs(u - M @ u ** p)) / np.max(np.abs(u)))
        return SolveResult(Field(grid, u), lam, iters + it2, res, fres,
                           "radial", tuple(hist) + tuple(hist2))

    scale = lam ** (-1.0 / (p - 1.0))
    u = scale * v
    res = float(np.max(np.abs(u - M @ u ** p)) / np.max(np.abs(u)))
    return SolveResult(Field(grid, u), lam, iters, res, res, "full",
                       tuple(hist))


# ---------------------------------------------------------------------------
# moving-plane sweeps


@dataclass(frozen=True)
class SweepReport:
    axis: int
    side: str
    lambda_values: np.ndarray
    min_w: np.ndarray
    violation_counts: np.ndarray
    skipped: np.ndarray
    interp_error: np.ndarray
    lambda0_estimate: float
    tol: float


class _BallInterp:
    """Radial interpolation per angular column + nearest-direction lookup."""

    def __init__(self, f: Field):
        grid = f.grid
        nr, k, radii = shell_structure(grid)
        dom = grid.domain
        self.center = dom.center(grid.dim)
        vals = f.values.reshape(nr, k)
        order = np.argsort(radii)
        self.radii = radii[order]
        pts0 = grid.points.reshape(nr, k, grid.dim)[0] - self.center
        self.dirs = pts0 / np.linalg.norm(pts0, axis=1, keepdims=True)
        v = vals[order]
        self.smooth = interpolate.PchipInterpolator(self.radii, v, axis=0,
                                                    extrapolate=True)
        self.linear = interpolate.interp1d(self.radii, v, axis=0, kind="linear",
                                           bounds_error=False,
                                           fill_value=(v[0], v[-1]))

    def __call__(self, X):
        D = X - self.center
        r = np.linalg.norm(D, axis=1)
        safe = np.maximum(r, 1e-300)
        col = np.argmax((D / safe[:, None]) @ self.dirs.T, axis=1)
        sm = self.smooth(r)[np.arange(len(r)), col]
        ln = self.linear(np.clip(r, self.radii[0], self.radii[-1]))
        ln = ln[np.arange(len(r)), col]
        return sm, np.abs(sm - ln)


class _SlabInterp:
    """Multilinear interpolation on the tensor axes of a slab grid."""

    def __init__(self, f: Field):
        grid = f.grid
        counts = grid.shape
        axes = [np.unique(grid.points[:, i]) for i in range(grid.dim)]
        vals = f.values.reshape(counts)
        self.box = [(a[0], a[-1]) for a in axes]
        self.interp = interpolate.RegularGridInterpolator(
            axes, vals, method="linear", bounds_error=False, fill_value=None)

    def inside(self, X):
        ok = np.ones(X.shape[0], dtype=bool)
        for i, (lo, hi) in enumerate(self.box):
            ok &= (X[:, i] >= lo) & (X[:, i] <= hi)
        return ok

    def __call__(self, X):
        return self.interp(X), np.zeros(X.shape[0])


def _sigma_mask(grid: Grid, axis: int, lam: float, side: str) -> np.ndarray:
    c = grid.points[:, axis]
    return c < lam if side == "low" else c > lam


def moving_plane_sweep(u: Field, plane_axis: int, lambda_grid, params: ModelParams,
                       domain: DomainKind = None, side: str = "low",
                       tol: float = 1e-6, refine_levels: int = 3) -> SweepReport:
    """min over the swept cap of w_lambda = u(x^lambda) - u(x), per plane.

    side="low" sweeps the cap {x_axis < lambda} (planes advancing upward);
    side="high" sweeps {x_axis > lambda}.  lambda0 is the furthest plane,
    in the sweep direction, for which every plane behind it kept
    min_w >= -tol*||u||_inf; it is refined by bisection past the grid.
    """
    if side not in ("low", "high"):
        raise ParameterError(f"side must be 'low' or 'high', got {side!r}")
    grid = u.grid
    domain = domain if domain is not None else grid.domain
    lam_grid = np.sort(np.asarray(lambda_grid, dtype=float))
    if side == "high":
        lam_grid = lam_grid[::-1]
    interp = _BallInterp(u) if grid.kind == "ball" else _SlabInterp(u)
    scale = float(np.max(np.abs(u.values)))
    thresh = -tol * scale

    def eval_plane(lam):
        mask = _sigma_mask(grid, plane_axis, lam, side)
        if not np.any(mask):
            return np.nan, 0, np.nan, True
        X = grid.points[mask]
        Xr = X.copy()
        Xr[:, plane_axis] = 2.0 * lam - X[:, plane_axis]
        if grid.kind != "ball":
            ok = interp.inside(Xr)
            if not np.any(ok):
                return np.nan, 0, np.nan, True
            X, Xr = X[ok], Xr[ok]
            mask_vals = u.values[mask][ok]
        else:
            mask_vals = u.values[mask]
        ur, ierr = interp(Xr)
        w = ur - mask_vals
        return float(np.min(w)), int(np.sum(w < thresh)), float(np.max(ierr)), False

    mins, counts, ierrs, skips = [], [], [], []
    for lam in lam_grid:
        mn, ct, ie, sk = eval_plane(lam)
        mins.append(mn)
        counts.append(ct)
        ierrs.append(ie)
        skips.append(sk)

    # furthest plane with a clean record behind it
    lo_pass = None
    hi_fail = None
    for lam, mn, sk in zip(lam_grid, mins, skips):
        if sk or mn >= thresh:
            lo_pass = lam
        else:
            hi_fail = lam
            break
    if lo_pass is None:
        lam0 = float(lam_grid[0])
    elif hi_fail is None:
        lam0 = float(lo_pass)
    else:
        a, b = lo_pass, hi_fail
        for _ in range(refine_levels):
            mid = 0.5 * (a + b)
            mn, _, _, sk = eval_plane(mid)
            if sk or mn >= thresh:
                a = mid
            else:
                b = mid
        lam0 = float(a)

    return SweepReport(plane_axis, side, lam_grid, np.array(mins),
                       np.array(counts), np.array(skips), np.array(ierrs),
                       lam0, tol)


# ---------------------------------------------------------------------------
# Liouville exponent cascade


@dataclass(frozen=True)
class CascadeReport:
    m_min: int
    exponents: np.ndarray   # e_0 .. e_m with e_0 = alpha/2 - 1
    tau_p: float
    f_p: float
    fprime_p: float

    @property
    def final_exponent(self) -> float:
        return float(self.exponents[-1])


def cascade_m_min(alpha: float) -> int:
    """Smallest bootstrap depth making the final comparison exponent work."""
    return max(1, int(np.floor((3.0 - alpha * alpha) / alpha)) + 1)


def liouville_cascade(params: ModelParams) -> CascadeReport:
    """Exponent bookkeeping of the half-space bootstrap.

    Starting from e_0 = alpha/2 - 1 the iteration sharpens the lower-bound
    exponent by e_{k+1} = p e_k + alpha, whose closed form is
    e_k = p^k (alpha/2 - 1) + alpha (p^k - 1)/(p - 1).  After m = m_min
    steps, tau(p) = p e_m + alpha/2 is nonnegative and
    f(p) = tau(p) (p - 1) has f(1) = 0 and f'(p) > 0 on the subcritical
    range, which is what rules out nontrivial solutions.
    """
    if params.p is None:
        raise ParameterError("liouville_cascade requires params.p")
    a, p = params.alpha, params.p
    m = cascade_m_min(a)
    ks = np.arange(m + 1)
    pk = p ** ks
    exps = pk * (0.5 * a - 1.0) + a * (pk - 1.0) / (p - 1.0)
    tau = p * exps[-1] + 0.5 * a
    f = tau * (p - 1.0)
    fp = p ** m * ((m + 2) * (0.5 * a - 1.0) * p
                   + (m + 1) * (0.5 * a + 1.0)) - 0.5 * a
    return CascadeReport(m, exps, float(tau), float(f), float(fp))


# ---------------------------------------------------------------------------
# half-space profile lower bound


class NodeExclusionWarning(UserWarning):
    """The evaluation height hit a profile node; that node was dropped."""


def halfspace_profile_lowerbound(y, u, params: ModelParams, x_n: float,
                                 c0: float = 1.0) -> float:
    """C0 * x_n^{alpha/2} * int u^p(y) y^{alpha/2} / |x_n - y| dy.

    y, u sample the profile on (0, Y]; trapezoid weights on the given nodes.
    Nodes equal to x_n are excluded (the continuum integral is a convergent
    principal-value-free bound; the grid merely must not divide by zero) and
    a NodeExclusionWarning is emitted.
    """
    if params.p is None:
        raise ParameterError("halfspace_profile_lowerbound requires params.p")
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    if y.shape != u.shape or y.ndim != 1 or y.size < 2:
        raise ParameterError("profile needs matching 1-d y and u arrays")
    if np.any(np.diff(y) <= 0.0) or y[0] <= 0.0:
        raise ParameterError("profile nodes must be positive and increasing")
    if np.any(u < 0.0):
        raise ParameterError("profile must be nonnegative")
    if not (x_n > 0.0):
        raise ParameterError("x_n must be positive")
    w = np.empty_like(y)
    w[0] = 0.5 * (y[1] - y[0])
    w[-1] = 0.5 * (y[-1] - y[-2])
    w[1:-1] = 0.5 * (y[2:] - y[:-2])
    d = np.abs(x_n - y)
    hit = d == 0.0
    if np.any(hit):
        warnings.warn("evaluation height coincides with profile node(s); "
                      "excluded from the quadrature", NodeExclusionWarning)
        w = np.where(hit, 0.0, w)
        d = np.where(hit, 1.0, d)
    a = params.alpha
    integral = float(np.sum(w * u ** params.p * y ** (0.5 * a) / d))
    return c0 * x_n ** (0.5 * a) * integral
