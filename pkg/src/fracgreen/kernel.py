r"""Explicit Green's function of (-Delta)^(alpha/2) on the ball and half-space.

The kernel has a single closed form in the reduced coordinates

    s = |x - y|^2,
    t = (1 - |x|^2)(1 - |y|^2)      (unit ball)
    t = 4 x_n y_n                   (half-space),

namely G(x, y) = A * H(s, t) with

    H(s, t) = s^{-(n-alpha)/2} * [1 - B * I1(s, t)],
    I1(s, t) = (s+t)^{-(n-2)/2} \int_0^{s/t} (s - t b)^{(n-2)/2}
                                   b^{-alpha/2} (1+b)^{-1} db.

I1 depends on (s, t) only through S = s/t.  B is pinned by the boundary
condition H -> 0 as t -> 0 (B = 1 / \int_0^inf b^{-alpha/2}(1+b)^{-1} db
= sin(pi*alpha/2)/pi), and A is the Riesz normalization
Gamma((n-alpha)/2) / (2^alpha pi^{n/2} Gamma(alpha/2)) fixed by the
interior singularity G ~ A s^{-(n-alpha)/2}.  Both constants are validated
by quadrature invariants in the test suite rather than trusted.

The ball of radius R centered at P_R = (0,...,0,R) uses the same H after
the affine change of variables x -> (x - P_R)/R, which rescales the
coordinates to s_R = s/R^2 and t_R computed from the shifted points; the
kernel itself picks up the factor R^{alpha-n}.  As R -> infinity these
converge to the half-space kernel.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _accel
from ._accel import KernelTables, S_SPLIT
from .errors import DegenerateError, DomainError, SingularityError
from .params import DomainKind, ModelParams
from .quadrature import jacobi_rule

DEFAULT_NODES = 48


class BoundaryLimitWarning(UserWarning):
    """Raised-to-warn when a kernel quantity is returned as a boundary limit."""


@dataclass(frozen=True)
class KernelCoords:
    """Reduced coordinates of a point pair; both are nonnegative, and t = 0
    exactly when a point sits on the boundary (or outside, clamped by the
    caller)."""

    s: float
    t: float

    def __post_init__(self):
        if not (self.s >= 0.0) or not (self.t >= 0.0):
            raise DegenerateError(f"reduced coordinates must be >= 0, got {self}")


@dataclass(frozen=True)
class GreenConstants:
    A: float
    B: float


def green_constants(params: ModelParams) -> GreenConstants:
    n, a = params.n, params.alpha
    B = math.sin(math.pi * a / 2.0) / math.pi
    A = math.gamma((n - a) / 2.0) / (2.0 ** a * math.pi ** (n / 2.0)
                                     * math.gamma(a / 2.0))
    return GreenConstants(A=A, B=B)


@lru_cache(maxsize=32)
def _tables(n: int, alpha: float, m: int) -> KernelTables:
    nu = (n - 2) / 2.0
    ha = alpha / 2.0
    r1 = jacobi_rule(m, -ha, nu)
    r2 = jacobi_rule(m, ha - 1.0, 0.0)
    r3 = jacobi_rule(2 * m, -ha, 0.0)
    inv_B = math.pi / math.sin(math.pi * ha)
    # fault-injection hook: skews the kernel constant so the CLI tests can
    # exercise the nonzero-exit failure path end to end; never set otherwise
    tamper = os.environ.get("FRACGREEN_TAMPER_B")
    if tamper is not None:
        inv_B *= float(tamper)
    c_beta = math.gamma(1.0 - ha) * math.gamma(nu + 1.0) / math.gamma(nu + 2.0 - ha)
    return KernelTables(u1=r1.nodes, w1=r1.weights, v2=r2.nodes, w2=r2.weights,
                        u3=r3.nodes, w3=r3.weights, nu=nu, ha=ha,
                        inv_B=inv_B, c_beta=c_beta, s_split=S_SPLIT)


def kernel_tables(params: ModelParams, m: int = DEFAULT_NODES) -> KernelTables:
    return _tables(params.n, params.alpha, m)


# ---------------------------------------------------------------------------
# reduced coordinates


def coords(domain: DomainKind, x, y, params: ModelParams) -> KernelCoords:
    """Reduced coordinates (s, t) of a pair in the closed domain.

    Raises DomainError when either point lies outside the closure.  For
    BallRadiusR the coordinates are those of the unit-ball pair after the
    centering/rescaling map, i.e. s_R = |x-y|^2 / R^2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (params.n,) or y.shape != (params.n,):
        raise DomainError(f"points must have shape ({params.n},)")
    if not domain.contains(x, open_set=False) or not domain.contains(y, open_set=False):
        raise DomainError("point outside the closed domain")
    if domain.kind == "half_space":
        s = float(np.sum((x - y) ** 2))
        t = 4.0 * float(x[-1]) * float(y[-1])
        return KernelCoords(s=s, t=max(t, 0.0))
    R = domain.radius if domain.kind == "ball_radius" else 1.0
    c = domain.center(params.n)
    xs = (x - c) / R
    ys = (y - c) / R
    s = float(np.sum((xs - ys) ** 2))
    t = (1.0 - float(np.dot(xs, xs))) * (1.0 - float(np.dot(ys, ys)))
    return KernelCoords(s=s, t=max(t, 0.0))


# ---------------------------------------------------------------------------
# kernel integral and bracket


def _bracket_arrays(S, params: ModelParams, m: int = DEFAULT_NODES):
    tab = kernel_tables(params, m)
    return _accel.ACTIVE.bracket_batch(S, tab)


def inner_integral(c: KernelCoords, params: ModelParams,
                   m: int = DEFAULT_NODES) -> float:
    """The kernel integral I1(s, t); a function of S = s/t alone.

    Limits: s = 0 gives 0 (empty integration range); t = 0 returns the
    boundary limit 1/B with a BoundaryLimitWarning.
    """
    if c.s == 0.0:
        return 0.0
    if c.t == 0.0:
        warnings.warn("t = 0: returning the boundary limit 1/B",
                      BoundaryLimitWarning, stacklevel=2)
        return kernel_tables(params, m).inv_B
    i1, _ = _bracket_arrays(np.array([c.s / c.t]), params, m)
    return float(i1[0])


def kernel_bracket(s, t, params: ModelParams, m: int = DEFAULT_NODES):
    """The factor [1 - B*I1](s/t) in (0, 1); vectorized over s, t arrays.

    Evaluated in a cancellation-free form near both limits, so the result
    keeps relative accuracy even where it vanishes (t/s -> 0)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    S = np.where(t > 0.0, s / np.where(t > 0.0, t, 1.0), np.inf)
    S = np.where(s == 0.0, 0.0, S)
    _, br = _bracket_arrays(S, params, m)
    return br.reshape(np.broadcast(s, t).shape) if br.ndim else br


def kernel_h(s, t, params: ModelParams, m: int = DEFAULT_NODES):
    """H(s, t) = s^{-(n-alpha)/2} * bracket; vectorized."""
    s = np.asarray(s, dtype=float)
    br = kernel_bracket(s, t, params, m)
    return s ** (-(params.n - params.alpha) / 2.0) * br


# ---------------------------------------------------------------------------
# Green's function


def green(domain: DomainKind, x, y, params: ModelParams,
          m: int = DEFAULT_NODES) -> float:
    """Green's function value for the pair (x, y).

    Returns 0 when either point lies outside the *open* domain (the kernel
    vanishes there); raises SingularityError on the diagonal x == y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (params.n,) or y.shape != (params.n,):
        raise DomainError(f"points must have shape ({params.n},)")
    if np.array_equal(x, y):
        raise SingularityError("green is singular on the diagonal x == y")
    if not domain.contains(x) or not domain.contains(y):
        return 0.0
    c = coords(domain, x, y, params)
    con = green_constants(params)
    _, br = _bracket_arrays(np.array([c.s / c.t]), params, m)
    value = con.A * c.s ** (-(params.n - params.alpha) / 2.0) * float(br[0])
    if domain.kind == "ball_radius":
        value *= domain.radius ** (params.alpha - params.n)
    return value


def green_scaled(R: float, x, y, params: ModelParams,
                 m: int = DEFAULT_NODES) -> float:
    """Kernel of the ball of radius R tangent to {x_n = 0} at the origin:
    R^{alpha-n} * G_1((x - P_R)/R, (y - P_R)/R)."""
    return green(DomainKind.ball_of_radius(R), x, y, params, m)


def green_values(s, t, params: ModelParams, m: int = DEFAULT_NODES):
    """Vectorized Green's values from reduced coordinates (half-space/ball
    share this form; any domain scaling is the caller's bookkeeping)."""
    con = green_constants(params)
    s = np.asarray(s, dtype=float)
    return con.A * kernel_h(s, t, params, m)


# ---------------------------------------------------------------------------
# partial derivatives


def green_partials(c: KernelCoords, params: ModelParams,
                   m: int = DEFAULT_NODES) -> tuple[float, float]:
    r"""(dH/ds, dH/dt) at interior coordinates s, t > 0.

    Differentiating I1 under the integral sign leaves
        dI1/ds = (n-2)/2 * t/(s+t)^{n/2} * \int_0^{s/t} (s-tb)^{(n-4)/2} b^{-a/2} db,
        dI1/dt = -(s/t) * dI1/ds,
    and the remaining integral reduces by b = (s/t) u to a pure Beta
    integral -- the Jacobi rule with exp_at_one = (n-4)/2 reproduces it
    exactly (it is the rule's own weight mass), so no quadrature error
    enters the derivatives at all.
    """
    n, a = params.n, params.alpha
    s, t = c.s, c.t
    if s <= 0.0 or t <= 0.0:
        raise DegenerateError("green_partials requires s > 0 and t > 0")
    # Beta(1 - a/2, (n-2)/2) via the derivative rule's weight mass.
    rule_d = jacobi_rule(m, -a / 2.0, (n - 4) / 2.0)
    d_beta = rule_d.beta_mass()
    S = s / t
    di1_ds = 0.5 * (n - 2) * t / (s + t) ** (n / 2.0) \
        * S ** (1.0 - a / 2.0) * s ** ((n - 4) / 2.0) * d_beta
    di1_dt = -S * di1_ds
    _, br = _bracket_arrays(np.array([S]), params, m)
    B = green_constants(params).B
    pref = s ** (-(n - a) / 2.0)
    dh_ds = -0.5 * (n - a) * pref / s * float(br[0]) - B * pref * di1_ds
    dh_dt = -B * pref * di1_dt
    return dh_ds, dh_dt


# ---------------------------------------------------------------------------
# half-space asymptotics


def asymptotic_ratio(s, t, params: ModelParams, m: int = DEFAULT_NODES):
    """G_inf(s,t) * s^{n/2} / t^{alpha/2}; tends to a constant for t/s -> 0.

    Simplifies to A * (s/t)^{alpha/2} * bracket(s/t), so the large-s
    behavior G_inf ~ t^{alpha/2}/s^{n/2} is visible as a bounded band.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    con = green_constants(params)
    br = kernel_bracket(s, t, params, m)
    return con.A * (s / t) ** (params.alpha / 2.0) * br
