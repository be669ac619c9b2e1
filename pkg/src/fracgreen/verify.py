"""Machine-verification suites for the kernel, operators, and solver.

Each suite draws randomized or gridded probes, evaluates a family of strict
inequalities or quantitative error bounds, and returns a SuiteReport carrying
the violation count and the worst relative margin observed.  The margin
convention is shared by every suite: a strict inequality left > right is
scored as (left - right) / max(|left|, |right|) and must exceed MARGIN_TOL;
probes that land within DEGENERACY_FLOOR of the kernel diagonal or of the
boundary are redrawn and counted, never silently dropped.

Suites are deterministic for a fixed (seed, sample_count): rerunning one
reproduces the same counts and margins bit for bit.  Reports serialize to
plain dicts so the command-line runner can emit them as JSON.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import geom, ops, solver
from .errors import DegenerateError, ParameterError, UsageError
from .grids import Field, ball_grid, sphere_area
from .kernel import (KernelCoords, asymptotic_ratio, green, green_constants,
                     green_partials, green_scaled, green_values,
                     kernel_bracket, kernel_h)
from .params import HALF_SPACE, ModelParams
from .quadrature import adaptive_quad

MARGIN_TOL = 1e-10        # strictness floor: "holds" means margin > this
DEGENERACY_FLOOR = 1e-12  # s or t below this triggers a redraw


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    n: int
    alpha: float
    p: float | None
    samples: int
    violations: int
    worst_margin: float
    empirical_constants: dict
    criterion: str
    seed: int
    runtime_ms: int

    @property
    def passed(self) -> bool:
        return self.violations == 0 and math.isfinite(self.worst_margin)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "alpha": self.alpha,
            "p": self.p,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "empirical_constants": dict(self.empirical_constants),
            "criterion": self.criterion,
            "seed": self.seed,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms,
        }


def _rel_margin(left, right):
    """(left - right) scaled by the larger magnitude; > 0 iff left > right."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    scale = np.maximum(np.abs(left), np.abs(right))
    scale = np.where(scale > 0.0, scale, 1.0)
    return (left - right) / scale


# ---------------------------------------------------------------------------
# reflection-inequality suites (shared engine, two geometries)


def _reflect_axis(pts, lam, axis):
    out = pts.copy()
    out[:, axis] = 2.0 * lam - pts[:, axis]
    return out


def _st_ball(a, b):
    s = np.sum((a - b) ** 2, axis=1)
    t = (1.0 - np.sum(a * a, axis=1)) * (1.0 - np.sum(b * b, axis=1))
    return s, t


def _st_half(a, b):
    s = np.sum((a - b) ** 2, axis=1)
    return s, 4.0 * a[:, -1] * b[:, -1]


def _ball_slice(rng, lo, hi, nd):
    """Random interior points of the unit ball with x_1 in (lo, hi)."""
    x1 = lo + (hi - lo) * rng.random(lo.size)
    rmax = np.sqrt(np.maximum(1.0 - x1 * x1, 0.0))
    v = rng.standard_normal((lo.size, nd - 1))
    nv = np.linalg.norm(v, axis=1, keepdims=True)
    nv[nv == 0.0] = 1.0
    rad = rmax * rng.random(lo.size) ** (1.0 / (nd - 1))
    return np.concatenate([x1[:, None], rad[:, None] * (v / nv)], axis=1)


def _half_slab(rng, lo, hi, nd):
    """Random half-space points with x_n in (lo, hi), lateral span [-2, 2]."""
    xn = lo + (hi - lo) * rng.random(lo.size)
    lat = -2.0 + 4.0 * rng.random((lo.size, nd - 1))
    return np.concatenate([lat, xn[:, None]], axis=1)


def _draw_ball(rng, m, nd):
    lam = -0.99 + 0.98 * rng.random(m)
    x = _ball_slice(rng, np.full(m, -1.0), lam, nd)
    y = _ball_slice(rng, np.full(m, -1.0), lam, nd)
    yc = _ball_slice(rng, lam, np.full(m, 1.0), nd)
    return lam, x, y, yc


def _draw_half(rng, m, nd):
    lam = 0.05 + 1.95 * rng.random(m)
    x = _half_slab(rng, np.zeros(m), lam, nd)
    y = _half_slab(rng, np.zeros(m), lam, nd)
    yc = _half_slab(rng, lam, lam + 2.0, nd)
    return lam, x, y, yc


def _lemma_engine(params, count, seed, draw, st, axis, tag):
    """Sample (lambda, x, y, y') tuples and score the three reflection
    inequalities on each: reflect-both dominates reflect-one, the
    reflect-both gap dominates the single-reflection imbalance, and the
    kernel increases against points beyond the plane."""
    rng = np.random.default_rng((seed, tag))
    nd = params.n
    lam_l, x_l, y_l, yc_l = [], [], [], []
    have = 0
    redrawn = 0
    rounds = 0
    while have < count:
        rounds += 1
        if rounds > 200:
            raise DegenerateError("reflection sampler could not fill its quota")
        m = max(64, 2 * (count - have))
        lam, x, y, yc = draw(rng, m, nd)
        xl = _reflect_axis(x, lam, axis)
        yl = _reflect_axis(y, lam, axis)
        ok = np.ones(m, dtype=bool)
        for a, b in ((xl, yl), (xl, y), (x, yl), (x, y), (xl, yc), (x, yc)):
            s, t = st(a, b)
            ok &= (s >= DEGENERACY_FLOOR) & (t >= DEGENERACY_FLOOR)
        redrawn += int(m - np.count_nonzero(ok))
        keep = np.flatnonzero(ok)[:count - have]
        lam_l.append(lam[keep])
        x_l.append(x[keep])
        y_l.append(y[keep])
        yc_l.append(yc[keep])
        have += keep.size
    lam = np.concatenate(lam_l)
    x = np.vstack(x_l)
    y = np.vstack(y_l)
    yc = np.vstack(yc_l)
    xl = _reflect_axis(x, lam, axis)
    yl = _reflect_axis(y, lam, axis)
    pairs = ((xl, yl), (xl, y), (x, yl), (x, y), (xl, yc), (x, yc))
    ss = np.empty((6, count))
    tt = np.empty((6, count))
    for k, (a, b) in enumerate(pairs):
        ss[k], tt[k] = st(a, b)
    G = green_values(ss.ravel(), tt.ravel(), params).reshape(6, count)
    g_ll, g_ly, g_xl, g_xy, g_lc, g_xc = G
    m_pair = _rel_margin(g_ll, np.maximum(g_ly, g_xl))
    m_diff = _rel_margin(g_ll - g_xy, np.abs(g_ly - g_xl))
    m_comp = _rel_margin(g_lc, g_xc)
    viol = (int(np.count_nonzero(m_pair <= MARGIN_TOL))
            + int(np.count_nonzero(m_diff <= MARGIN_TOL))
            + int(np.count_nonzero(m_comp <= MARGIN_TOL)))
    worst = float(min(m_pair.min(), m_diff.min(), m_comp.min()))
    constants = {
        "min_margin_pair": float(m_pair.min()),
        "min_margin_difference": float(m_diff.min()),
        "min_margin_complement": float(m_comp.min()),
        "redrawn": float(redrawn),
    }
    return count, viol, worst, constants


def _suite_ball_lemma(params, count, seed):
    crit = ("on random caps {x_1 < lambda}, lambda in (-1, 0), of the unit "
            "ball: reflecting both kernel arguments across the plane strictly "
            "dominates reflecting either one; the reflected-minus-original "
            "gap strictly dominates the single-reflection imbalance; and the "
            "kernel strictly increases under reflecting the cap argument "
            "against any point beyond the plane -- every sample with "
            "relative margin > 1e-10")
    out = _lemma_engine(params, count, seed, _draw_ball, _st_ball, 0, 3)
    return out + (crit,)


def _suite_half_lemma(params, count, seed):
    crit = ("on random slabs {0 < x_n < lambda} of the half-space: "
            "reflecting both kernel arguments across {x_n = lambda} strictly "
            "dominates reflecting either one; the reflected-minus-original "
            "gap strictly dominates the single-reflection imbalance; and the "
            "kernel strictly increases under reflecting the slab argument "
            "against any point above the plane -- every sample with "
            "relative margin > 1e-10")
    out = _lemma_engine(params, count, seed, _draw_half, _st_half,
                        params.n - 1, 5)
    return out + (crit,)


# ---------------------------------------------------------------------------
# kernel-shape suites


def _suite_monotonicity(params, count, seed):
    """H decreases in s, increases in t, and has negative mixed curvature."""
    crit = ("on a log-spaced (s, t) grid spanning [1e-3, 1e3]^2: the analytic "
            "partials satisfy dH/ds < 0 and dH/dt > 0, fourth-order central "
            "differences reproduce them within 1e-4 relative, and the "
            "positive t-increments of H strictly decrease in s on every grid "
            "cell (negative mixed curvature) with relative margin > 1e-10")
    k = max(4, int(round(math.sqrt(count))))
    ss = np.logspace(-3.0, 3.0, k)
    tt = np.logspace(-3.0, 3.0, k)
    S, T = np.meshgrid(ss, tt, indexing="ij")
    Sf, Tf = S.ravel(), T.ravel()

    def h_at(fs, ft):
        return kernel_h(Sf * fs, Tf * ft, params).reshape(k, k)

    H = h_at(1.0, 1.0)
    # five-point stencils at relative step 1e-3: truncation ~ 1e-12 while the
    # wide step keeps cancellation noise harmless even where dH/dt is tiny
    hstep = 1e-3
    fd_s = (h_at(1.0 - 2 * hstep, 1.0) - 8.0 * h_at(1.0 - hstep, 1.0)
            + 8.0 * h_at(1.0 + hstep, 1.0) - h_at(1.0 + 2 * hstep, 1.0)) \
        / (12.0 * hstep * S)
    fd_t = (h_at(1.0, 1.0 - 2 * hstep) - 8.0 * h_at(1.0, 1.0 - hstep)
            + 8.0 * h_at(1.0, 1.0 + hstep) - h_at(1.0, 1.0 + 2 * hstep)) \
        / (12.0 * hstep * T)
    an_s = np.empty((k, k))
    an_t = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            ds, dt = green_partials(KernelCoords(ss[i], tt[j]), params)
            an_s[i, j] = ds
            an_t[i, j] = dt
    rel_s = np.abs(fd_s - an_s) / np.abs(an_s)
    rel_t = np.abs(fd_t - an_t) / np.abs(an_t)
    sign_viol = int(np.count_nonzero(an_s >= 0.0)
                    + np.count_nonzero(an_t <= 0.0))
    fd_viol = int(np.count_nonzero(rel_s > 1e-4)
                  + np.count_nonzero(rel_t > 1e-4))
    # the mixed second difference is scored against the t-increments it is
    # built from, not against H itself (which dwarfs it where the bracket
    # saturates): negativity means those increments strictly shrink in s
    tdiff = H[:, 1:] - H[:, :-1]
    m_mixed = _rel_margin(tdiff[:-1, :], tdiff[1:, :])
    mixed_viol = int(np.count_nonzero(m_mixed <= MARGIN_TOL))
    fd_headroom = (1e-4 - np.maximum(rel_s, rel_t)) / 1e-4
    worst = float(min(m_mixed.min(), fd_headroom.min()))
    constants = {
        "grid_side": float(k),
        "max_fd_rel_err": float(np.maximum(rel_s, rel_t).max()),
        "min_mixed_margin": float(m_mixed.min()),
    }
    return k * k, sign_viol + fd_viol + mixed_viol, worst, constants, crit


def _suite_limits(params, count, seed):
    crit = ("the kernel bracket stays strictly inside (0, 1) and strictly "
            "decreases across S in [1e-6, 1e6], exceeds 0.99 at S = 1e-6, "
            "falls below 0.01 once S reaches 10^ceil(6/alpha) (= 1e6 at "
            "alpha = 1), and its log-log approach rates at the two ends "
            "match the sharp exponents ((n - alpha)/2 below, alpha/2 above) "
            "within a factor of 3; the ratios to the reference rates "
            "1 - alpha/2 and alpha/2 are recorded")
    n, a = params.n, params.alpha
    one = np.ones(1)
    # the decay exponent alpha/2 sets how far out 1% saturation happens
    s_hi_exp = max(6.0, math.ceil(6.0 / a))
    br_lo = float(kernel_bracket(np.array([1e-6]), one, params)[0])
    br_hi = float(kernel_bracket(np.array([10.0 ** s_hi_exp]), one, params)[0])
    viol = int(not (br_lo > 0.99)) + int(not (br_hi < 0.01))
    margins = [(br_lo - 0.99) / 0.99, (0.01 - br_hi) / 0.01]

    Sg = np.logspace(-6.0, 6.0, max(int(count), 16))
    br = kernel_bracket(Sg, np.ones_like(Sg), params)
    viol += int(np.count_nonzero((br <= 0.0) | (br >= 1.0)))
    margins.append(float(np.min(np.minimum(br, 1.0 - br))))
    m_dec = _rel_margin(br[:-1], br[1:])
    viol += int(np.count_nonzero(m_dec <= MARGIN_TOL))
    margins.append(float(m_dec.min()))

    Slo = np.logspace(-8.0, -5.0, 7)
    gap = 1.0 - kernel_bracket(Slo, np.ones_like(Slo), params)
    Shi = np.logspace(5.0, 8.0, 7)
    tail = kernel_bracket(Shi, np.ones_like(Shi), params)
    # a broken bracket can push gap/tail nonpositive; the nan slope then
    # fails the ratio window below rather than warning here
    with np.errstate(invalid="ignore", divide="ignore"):
        slope_lo = float(np.polyfit(np.log(Slo), np.log(gap), 1)[0])
        slope_hi = float(-np.polyfit(np.log(Shi), np.log(tail), 1)[0])
    for r in (slope_lo / (0.5 * (n - a)), slope_hi / (0.5 * a)):
        viol += int(not (1.0 / 3.0 <= r <= 3.0))
        margins.append(min(3.0 - r, r - 1.0 / 3.0) / 3.0)
    constants = {
        "bracket_low_end": br_lo,
        "bracket_high_end": br_hi,
        "high_probe_exponent": s_hi_exp,
        "slope_low": slope_lo,
        "slope_high": slope_hi,
        "rate_ratio_low_reference": slope_lo / (1.0 - 0.5 * a),
        "rate_ratio_high_reference": slope_hi / (0.5 * a),
        "sharp_low_exponent": 0.5 * (n - a),
    }
    return int(Sg.size), viol, float(min(margins)), constants, crit


def _suite_asymptotics(params, count, seed):
    crit = ("with t = 1 and s log-spaced over [1e2, 1e6], the compensated "
            "kernel G * s^{n/2} / t^{alpha/2} is positive, finite, and stays "
            "within a factor-2 band, pinning the far-field decay "
            "t^{alpha/2} / s^{n/2}")
    k = max(int(count), 8)
    ss = np.logspace(2.0, 6.0, k)
    ratio = asymptotic_ratio(ss, np.ones_like(ss), params)
    finite = bool(np.all(np.isfinite(ratio)) and np.all(ratio > 0.0))
    band = float(ratio.max() / ratio.min()) if finite else float("inf")
    viol = int(not finite) + int(not (band <= 2.0))
    con = green_constants(params)
    constants = {
        "band": band,
        "ratio_min": float(ratio.min()) if finite else float("nan"),
        "ratio_max": float(ratio.max()) if finite else float("nan"),
        "tail_constant": float(ratio[-1] / con.A) if finite else float("nan"),
    }
    return k, viol, (2.0 - band) / 2.0, constants, crit


def _suite_scaling(params, count, seed):
    crit = ("the kernel of the radius-R ball tangent to the boundary plane "
            "converges to the half-space kernel at the fixed pair x = e_n, "
            "y = 2 e_n: relative gap strictly decreasing over R in "
            "{10, 100, 1000} and <= 1e-2 at R = 1000")
    nd = params.n
    x = np.zeros(nd)
    x[-1] = 1.0
    y = np.zeros(nd)
    y[-1] = 2.0
    g_inf = green(HALF_SPACE, x, y, params)
    rels = [abs(green_scaled(R, x, y, params) - g_inf) / g_inf
            for R in (10.0, 100.0, 1000.0)]
    viol = int(not (rels[2] <= 1e-2))
    viol += int(not (rels[0] > rels[1] > rels[2]))
    worst = float(min((1e-2 - rels[2]) / 1e-2,
                      float(_rel_margin(rels[0], rels[1])),
                      float(_rel_margin(rels[1], rels[2]))))
    constants = {"rel_err_10": rels[0], "rel_err_100": rels[1],
                 "rel_err_1000": rels[2]}
    return 3, viol, worst, constants, crit


# ---------------------------------------------------------------------------
# identity and operator suites


def _suite_kelvin(params, count, seed):
    crit = ("inversion covariance of the half-space kernel: mapping both "
            "arguments through a unit sphere inversion centered at a random "
            "boundary point multiplies the kernel by "
            "(|x - z0| |y - z0|)^{n - alpha}, to relative residual <= 1e-8 "
            "on every sampled triple")
    nd = params.n
    viol = 0
    redrawn = 0
    max_res = 0.0
    worst = math.inf
    for i in range(count):
        rng = np.random.default_rng((seed, 11, i))
        for _ in range(100):
            z0 = np.zeros(nd)
            z0[:-1] = -1.5 + 3.0 * rng.random(nd - 1)
            x = np.concatenate([-1.5 + 3.0 * rng.random(nd - 1),
                                [0.1 + 2.0 * rng.random()]])
            y = np.concatenate([-1.5 + 3.0 * rng.random(nd - 1),
                                [0.1 + 2.0 * rng.random()]])
            s_xy = float(np.sum((x - y) ** 2))
            if (s_xy >= DEGENERACY_FLOOR
                    and np.sum((x - z0) ** 2) >= 0.04
                    and np.sum((y - z0) ** 2) >= 0.04):
                break
            redrawn += 1
        else:
            raise DegenerateError("kelvin sampler could not leave the center")
        res = geom.kelvin_kernel_residual(x, y, z0, params)
        max_res = max(max_res, res)
        viol += int(not (res <= 1e-8))
        worst = min(worst, (1e-8 - res) / 1e-8)
    constants = {"max_residual": max_res, "redrawn": float(redrawn)}
    return count, viol, float(worst), constants, crit


def _suite_alpha_harmonic(params, count, seed):
    """The boundary-power profile is annihilated by the fractional operator."""
    crit = ("the principal-value fractional Laplacian of the profile "
            "x_n^{alpha/2} vanishes in the half-space: at random heights the "
            "defect stays below 5% of the local scale u(x) / x_n^alpha, and "
            "refining the truncation radii shrinks it on the probe subset")
    a = params.alpha
    nd = params.n
    rng = np.random.default_rng((seed, 13))
    hgt = np.exp(math.log(0.5) + math.log(4.0) * rng.random(count))
    lat = -1.0 + 2.0 * rng.random((count, nd - 1))

    def u(Z):
        zn = np.asarray(Z, dtype=float)[:, -1]
        return np.where(zn > 0.0, zn, 0.0) ** (0.5 * a)

    ratios = np.empty(count)
    for i in range(count):
        x = np.concatenate([lat[i], [hgt[i]]])
        res = ops.frac_laplacian_pv(u, x, params, 1e-3 * hgt[i],
                                    100.0 * hgt[i], growth=0.5 * a,
                                    n_polar=10)
        ratios[i] = abs(res.value) / hgt[i] ** (-0.5 * a)
    viol = int(np.count_nonzero(ratios > 0.05))
    margins = [float(np.min((0.05 - ratios) / 0.05))]
    fine_max = 0.0
    for i in range(min(3, count)):
        x = np.concatenate([lat[i], [hgt[i]]])
        res = ops.frac_laplacian_pv(u, x, params, 1e-3 * hgt[i],
                                    800.0 * hgt[i], growth=0.5 * a,
                                    n_polar=32)
        fine = abs(res.value) / hgt[i] ** (-0.5 * a)
        fine_max = max(fine_max, fine)
        viol += int(not (fine < ratios[i]))
        margins.append(float(_rel_margin(ratios[i], fine)))
    constants = {"max_defect_coarse": float(ratios.max()),
                 "max_defect_fine": fine_max}
    return count, viol, float(min(margins)), constants, crit


def _suite_harnack(params, count, seed):
    crit = ("records the oscillation of G(., y0) / x_n^{alpha/2} over a "
            "lateral box separated from the pole y0 = e_n; statistics only, "
            "no inequality is asserted")
    nd = params.n
    rng = np.random.default_rng((seed, 29))
    pts = np.empty((count, nd))
    pts[:, 0] = 2.0 + 2.0 * rng.random(count)
    if nd > 2:
        pts[:, 1:-1] = -1.0 + 2.0 * rng.random((count, nd - 2))
    pts[:, -1] = 0.5 * (1.0 - rng.random(count))
    y0 = np.zeros(nd)
    y0[-1] = 1.0
    s = np.sum((pts - y0) ** 2, axis=1)
    t = 4.0 * pts[:, -1]
    ratio = green_values(s, t, params) / pts[:, -1] ** (0.5 * params.alpha)
    constants = {
        "ratio_sup": float(ratio.max()),
        "ratio_inf": float(ratio.min()),
        "oscillation": float(ratio.max() / ratio.min()),
        "pole_gap": float(np.sqrt(s.min())),
    }
    return count, 0, 0.0, constants, crit


def _bump(X, w, c=None):
    X = np.asarray(X, dtype=float)
    d = X if c is None else X - np.asarray(c, dtype=float)
    r2 = np.sum(d * d, axis=1)
    out = np.zeros(r2.shape)
    inside = r2 < w
    out[inside] = np.exp(-1.0 / (w - r2[inside]))
    return out


def _suite_hls(params, count, seed):
    crit = ("the norm quotient ||Tg||_p / ||g||_q at the conjugate exponent "
            "pair q = np / (n + alpha p) stays within a factor-3 band over "
            "rescaled and translated bumps -- the discrete signature of the "
            "operator's sharp-norm boundedness")
    n, a = params.n, params.alpha
    pexp = n / (n - a) + 2.5
    grid = ball_grid(params, 12, 72)
    off = np.zeros(n)
    off[0] = 0.2
    family = ((None, 0.36), (None, 0.16), (None, 0.09), (off, 0.16))
    ratios = []
    for c, w in family:
        g = Field.from_function(grid, lambda X, w=w, c=c: _bump(X, w, c))
        ratios.append(ops.hls_ratio(g, pexp, params))
    ratios = np.asarray(ratios)
    finite = bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0.0))
    band = float(ratios.max() / ratios.min()) if finite else float("inf")
    viol = int(not finite) + int(not (band <= 3.0))
    constants = {
        "band": band,
        "ratio_min": float(ratios.min()) if finite else float("nan"),
        "ratio_max": float(ratios.max()) if finite else float("nan"),
        "exponent_p": pexp,
        "exponent_q": n * pexp / (n + a * pexp),
    }
    return len(family), viol, (3.0 - band) / 3.0, constants, crit


def _suite_green_oracle(params, count, seed):
    """Two independent routes to the ball kernel must meet."""
    crit = ("dual-route agreement for the unit-ball kernel: the gridded "
            "boundary-value solve of the polynomial source r^2 (1 - r^2)^2 "
            "reproduces an adaptive radial quadrature of the kernel at the "
            "center within 1e-3 relative, and the product-integration radial "
            "operator applied to the unit source matches the closed-form "
            "profile c (1 - r^2)^{alpha/2} within 5e-2 on r <= 0.9")
    n, a = params.n, params.alpha
    con = green_constants(params)
    grid = ball_grid(params, 16, 72)
    # polynomial source r^2 (1 - r^2)^2: vanishing quadratically at the
    # center keeps the kernel-weighted integrand r^{alpha+1} there, and the
    # absence of interior kinks keeps the radial rule accurate in any alpha
    psi = Field.from_function(
        grid, lambda X: np.sum(X * X, axis=1)
        * (1.0 - np.sum(X * X, axis=1)) ** 2)
    u0_grid = solver.dirichlet_value(psi, np.zeros(n), params)
    area = sphere_area(n)

    def integrand(r):
        r = np.asarray(r, dtype=float)
        s = r * r
        return (area * con.A * r ** (a + 1.0) * (1.0 - s) ** 2
                * kernel_bracket(s, 1.0 - s, params))

    u0_ref = adaptive_quad(integrand, 0.0, 1.0, tol=1e-12)
    err_center = abs(u0_grid - u0_ref) / abs(u0_ref)
    viol = int(not (err_center <= 1e-3))

    nodes = np.linspace(0.0, 1.0, 25)[:-1]
    K = solver.radial_operator(nodes, params)
    got = K @ np.ones(nodes.size)
    c_t = math.gamma(0.5 * n) / (2.0 ** a * math.gamma(1.0 + 0.5 * a)
                                 * math.gamma(0.5 * (n + a)))
    want = c_t * (1.0 - nodes ** 2) ** (0.5 * a)
    mask = nodes <= 0.9
    err_torsion = float(np.max(np.abs(got[mask] - want[mask]) / want[mask]))
    viol += int(not (err_torsion <= 5e-2))
    worst = float(min((1e-3 - err_center) / 1e-3,
                      (5e-2 - err_torsion) / 5e-2))
    constants = {
        "center_rel_err": float(err_center),
        "center_value": float(u0_grid),
        "center_reference": float(u0_ref),
        "torsion_rel_err": err_torsion,
        "torsion_constant": c_t,
    }
    return 2, viol, worst, constants, crit


# ---------------------------------------------------------------------------
# solver-level suites


def _suite_symmetry(params, count, seed):
    crit = ("the positive power-nonlinearity ground state on the unit ball "
            "is radial (deviation <= 1e-3 of its sup), strictly radially "
            "decreasing, solves its integral fixed point to 1e-8, and "
            "reflection sweeps along every axis report no positivity "
            "violations (floor 1e-6 of the sup) with the critical plane "
            "within one grid step of the center")
    if params.p is None:
        raise ParameterError("the symmetry suite needs params.p set")
    grid = ball_grid(params, 16, 72)
    res = solver.nonlinear_power_solve(grid, params.p, solver.SolveOptions(),
                                       params)
    u = res.u
    umax = float(np.max(u.values))
    margins = [(1e-8 - res.residual) / 1e-8]
    viol = int(not (res.residual <= 1e-8))
    radii, prof, dev = solver.radial_profile(u)
    rdev = dev / umax
    viol += int(not (rdev <= 1e-3))
    margins.append((1e-3 - rdev) / 1e-3)
    order = np.argsort(radii)
    viol += int(not np.all(np.diff(prof[order]) < 0.0))
    planes = max(8, int(count))
    lams = np.linspace(-0.9, 0.0, planes)
    step = lams[1] - lams[0]
    floor = 1e-6 * umax
    constants = {
        "lambda_star": float(res.lambda_star),
        "residual": float(res.residual),
        "fullgrid_residual": float(res.fullgrid_residual),
        "radial_deviation": float(rdev),
    }
    for ax in range(params.n):
        rep = solver.moving_plane_sweep(u, ax, lams, params)
        live = ~rep.skipped
        viol += int(np.count_nonzero(rep.min_w[live] < -floor))
        viol += int(np.sum(rep.violation_counts[live]))
        margins.append(float(np.min((rep.min_w[live] + floor) / floor)))
        viol += int(not (abs(rep.lambda0_estimate) <= step + 1e-12))
        constants[f"lambda0_axis{ax}"] = float(rep.lambda0_estimate)
    return planes * params.n, viol, float(min(margins)), constants, crit


def _suite_liouville(params, count, seed):
    crit = ("exponent bookkeeping of the half-space nonexistence bootstrap "
            "over n in {3, 4, 5}, alpha in [0.2, 1.8], and the full "
            "subcritical range 1 < p <= (n + alpha)/(n - alpha): the cascade "
            "starts at alpha/2 - 1, each step maps e to p e + alpha, the "
            "terminal comparison exponent tau(p) = p e_m + alpha/2 is "
            "nonnegative, tau(p)(p - 1) vanishes as p -> 1 and its "
            "derivative stays strictly positive; one integer anchor is "
            "pinned exactly")
    steps = max(10, min(int(count), 200))
    viol = 0
    margins = []
    checked = 0
    min_tau = math.inf
    for nd in (3, 4, 5):
        for a in np.linspace(0.2, 1.8, 9):
            a = float(a)
            tau_crit = (nd + a) / (nd - a)
            near1 = solver.liouville_cascade(ModelParams(nd, a, p=1.0 + 1e-9))
            viol += int(not (abs(near1.f_p) <= 1e-6))
            for j in range(1, steps + 1):
                p = min(1.0 + (tau_crit - 1.0) * j / steps, tau_crit)
                rep = solver.liouville_cascade(ModelParams(nd, a, p=p))
                checked += 1
                e = rep.exponents
                viol += int(not (abs(e[0] - (0.5 * a - 1.0)) <= 1e-12))
                rec_err = float(np.max(np.abs(e[1:] - (p * e[:-1] + a))
                                       / np.maximum(1.0, np.abs(e[1:]))))
                viol += int(rec_err > 1e-12)
                f_err = abs(rep.f_p - rep.tau_p * (p - 1.0)) \
                    / max(1.0, abs(rep.f_p))
                viol += int(f_err > 1e-12)
                tau_m = rep.tau_p / max(1.0, abs(rep.tau_p))
                fp_m = rep.fprime_p / max(1.0, abs(rep.fprime_p))
                viol += int(tau_m < -MARGIN_TOL)  # nonnegative: zero allowed
                viol += int(not (fp_m > MARGIN_TOL))
                margins.append(min(tau_m, fp_m))
                min_tau = min(min_tau, rep.tau_p)
    anchor = solver.liouville_cascade(ModelParams(3, 1.0, p=2.0))
    anchor_ok = (anchor.m_min == 3
                 and np.allclose(anchor.exponents, [-0.5, 0.0, 1.0, 3.0],
                                 rtol=0.0, atol=1e-12)
                 and abs(anchor.tau_p - 6.5) <= 1e-12
                 and abs(anchor.f_p - 6.5) <= 1e-12
                 and abs(anchor.fprime_p - 7.5) <= 1e-12)
    viol += int(not anchor_ok)
    constants = {
        "tuples": float(checked),
        "min_tau": min_tau,
        "min_margin": float(min(margins)),
        "anchor_ok": float(anchor_ok),
    }
    return checked, viol, float(min(margins)), constants, crit


# ---------------------------------------------------------------------------
# registry and entry point


_SUITES = {
    "ball-lemma21": _suite_ball_lemma,
    "half-lemma51": _suite_half_lemma,
    "monotonicity": _suite_monotonicity,
    "limits": _suite_limits,
    "asymptotics": _suite_asymptotics,
    "scaling-R": _suite_scaling,
    "kelvin": _suite_kelvin,
    "alpha-harmonic": _suite_alpha_harmonic,
    "harnack": _suite_harnack,
    "hls": _suite_hls,
    "green-oracle": _suite_green_oracle,
    "symmetry": _suite_symmetry,
    "liouville": _suite_liouville,
}

SUITE_NAMES = tuple(_SUITES)

DEFAULT_SAMPLES = {
    "ball-lemma21": 2000,
    "half-lemma51": 2000,
    "monotonicity": 400,
    "limits": 64,
    "asymptotics": 33,
    "scaling-R": 3,
    "kelvin": 200,
    "alpha-harmonic": 12,
    "harnack": 400,
    "hls": 4,
    "green-oracle": 2,
    "symmetry": 24,
    "liouville": 50,
}


def run_suite(name: str, params: ModelParams, sample_count: int = None,
              seed: int = 0) -> SuiteReport:
    """Run one verification suite and return its report.

    sample_count scales the probe budget (each suite documents how); None
    picks the suite's default.  Deterministic for fixed (seed, sample_count).
    """
    if name not in _SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from: "
                         + ", ".join(SUITE_NAMES))
    count = DEFAULT_SAMPLES[name] if sample_count is None else int(sample_count)
    if count < 1:
        raise ParameterError("sample_count must be >= 1")
    t0 = time.perf_counter()
    samples, violations, worst, constants, criterion = \
        _SUITES[name](params, count, seed)
    runtime_ms = int(round((time.perf_counter() - t0) * 1000.0))
    return SuiteReport(
        suite=name, n=params.n, alpha=params.alpha, p=params.p,
        samples=int(samples), violations=int(violations),
        worst_margin=float(worst),
        empirical_constants={k: float(v) for k, v in constants.items()},
        criterion=criterion, seed=int(seed), runtime_ms=runtime_ms)
