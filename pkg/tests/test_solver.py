import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from fracgreen import solver
from fracgreen.errors import (
    DegenerateError,
    NonConvergenceError,
    ParameterError,
)
from fracgreen.grids import Field, ball_grid, slab_grid
from fracgreen.kernel import green_constants, kernel_bracket
from fracgreen.params import DomainKind, ModelParams
from fracgreen.quadrature import adaptive_quad

P31 = ModelParams(3, 1.0, p=1.8)

# center value of the solution for the bump source (1/4 - |x|^2)_+^2 at
# n=3, alpha=1; the 1-d radial oracle (2/pi) * int_0^{1/2}
# sqrt(1-r^2) (1/4-r^2)^2 dr evaluates to exactly 1/96
U0_BUMP = 0.010416666666666666


def bump(X):
    return np.maximum(0.25 - np.einsum("ij,ij->i", X, X), 0.0) ** 2


@pytest.fixture(scope="module")
def grid24():
    return ball_grid(P31, 24, 96)


@pytest.fixture(scope="module")
def grid16():
    return ball_grid(P31, 16, 72)


@pytest.fixture(scope="module")
def solved24(grid24):
    return solver.nonlinear_power_solve(grid24, 1.8, solver.SolveOptions(), P31)


@pytest.fixture(scope="module")
def solved16(grid16):
    return solver.nonlinear_power_solve(grid16, 1.8, solver.SolveOptions(), P31)


# ---------------------------------------------------------------------------
# linear solve


def test_green_matrix_kernel_symmetry(grid16):
    # the point kernel is symmetric; the in-cell regularization is not
    # (each column uses its own cell radius), so test pairs farther apart
    # than either cell radius
    M = solver.green_matrix(grid16, P31)
    G = M / grid16.weights[None, :]
    D = grid16.points[:, None, :] - grid16.points[None, :, :]
    s = np.einsum("ijk,ijk->ij", D, D)
    rho2 = grid16.cell_radius ** 2
    far = (s >= rho2[None, :]) & (s >= rho2[:, None])
    assert np.max(np.abs((G - G.T)[far])) <= 1e-15 * np.max(G[far])


def test_dirichlet_zero_source(grid16):
    u = solver.dirichlet_solve(grid16, Field.zeros(grid16), P31)
    assert np.all(u.values == 0.0)


def test_dirichlet_linearity(grid16):
    rng = np.random.default_rng(7)
    f = Field(grid16, rng.random(grid16.size))
    g = Field(grid16, rng.random(grid16.size))
    lhs = solver.dirichlet_solve(
        grid16, Field(grid16, 2.0 * f.values - 3.0 * g.values), P31).values
    rhs = (2.0 * solver.dirichlet_solve(grid16, f, P31).values
           - 3.0 * solver.dirichlet_solve(grid16, g, P31).values)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


def test_dirichlet_positivity(grid16):
    u = solver.dirichlet_solve(grid16, Field.from_function(grid16, bump), P31)
    assert np.all(u.values > 0.0)


def test_dirichlet_radial_source_ring_constant(grid16):
    u = solver.dirichlet_solve(grid16, Field.from_function(grid16, bump), P31)
    v = u.values.reshape(grid16.shape)
    spread = (v.max(axis=2) - v.min(axis=2)).max()
    assert spread <= 1e-10 * np.abs(v).max()


def test_dirichlet_phi_roll_equivariance(grid16):
    rng = np.random.default_rng(11)
    g = rng.random(grid16.size)
    u = solver.dirichlet_solve(grid16, Field(grid16, g), P31)
    g_rolled = np.roll(g.reshape(grid16.shape), -1, axis=2).ravel()
    u_rolled = solver.dirichlet_solve(grid16, Field(grid16, g_rolled), P31)
    expected = np.roll(u.values.reshape(grid16.shape), -1, axis=2).ravel()
    err = np.max(np.abs(u_rolled.values - expected))
    assert err <= 1e-12 * np.max(np.abs(u.values))


def test_dirichlet_center_value_oracle(grid24):
    # at the center the n-alpha kernel power cancels against the sphere
    # measure, leaving a plain radial integral of the bracket factor
    con = green_constants(P31)

    def integrand(r):
        s = r * r
        return (4.0 * np.pi * con.A * kernel_bracket(s, 1.0 - s, P31)
                * (0.25 - s) ** 2)

    oracle = adaptive_quad(integrand, 0.0, 0.5)
    assert abs(oracle - U0_BUMP) <= 1e-10 * U0_BUMP
    psi = Field.from_function(grid24, bump)
    u0 = solver.dirichlet_value(psi, np.zeros(3), P31)
    assert abs(u0 - U0_BUMP) <= 2e-5 * U0_BUMP


def test_dirichlet_value_matches_solve_at_nodes(grid16):
    psi = Field.from_function(grid16, bump)
    u = solver.dirichlet_solve(grid16, psi, P31)
    sub = np.arange(0, grid16.size, 101)
    vals = solver.dirichlet_value(psi, grid16.points[sub], P31)
    assert np.max(np.abs(vals - u.values[sub])) <= 1e-13 * np.max(u.values)


def test_dirichlet_value_zero_outside(grid16):
    psi = Field.from_function(grid16, bump)
    out = solver.dirichlet_value(psi, np.array([[1.5, 0.0, 0.0],
                                                [0.0, -2.0, 0.0]]), P31)
    assert np.all(out == 0.0)


def test_dirichlet_scaled_ball_covariance():
    R = 2.0
    dom = DomainKind.ball_of_radius(R)
    g1 = ball_grid(P31, 12, 48)
    g2 = ball_grid(P31, 12, 48, domain=dom)
    c2 = dom.center(3)
    src = lambda X: np.maximum(1.0 - np.einsum("ij,ij->i", X, X), 0.0) ** 2
    u1 = solver.dirichlet_solve(g1, Field(g1, src(g1.points)), P31)
    u2 = solver.dirichlet_solve(g2, Field(g2, src((g2.points - c2) / R)), P31)
    pred = R ** P31.alpha * u1.values
    assert np.max(np.abs(u2.values - pred)) <= 1e-13 * np.max(np.abs(pred))


def test_dirichlet_rejects_foreign_field(grid16, grid24):
    psi = Field.from_function(grid24, bump)
    with pytest.raises(ParameterError):
        solver.dirichlet_solve(grid16, psi, P31)


# ---------------------------------------------------------------------------
# radial kernel / operator


def test_radial_kernel_matches_quadrature_oracle():
    con = green_constants(P31)
    ker = solver._RadialKernel(P31)
    for r, rp in ((0.3, 0.7), (0.5, 0.501), (0.9, 0.95), (0.05, 0.8)):
        t = (1.0 - r * r) * (1.0 - rp * rp)
        oracle = (np.pi * rp / r * con.A
                  * adaptive_quad(lambda s: s ** (-1.0) * kernel_bracket(s, t, P31),
                                  (r - rp) ** 2, (r + rp) ** 2))
        mine = ker(np.array([r]), np.array([rp]))[0]
        assert abs(mine - oracle) <= 1e-12 * abs(oracle)


def test_radial_operator_reproduces_torsion_profile():
    # the flat source has the closed-form solution c * (1 - r^2)^{alpha/2}
    nodes = np.linspace(0.0, 1.0, 49)[:-1]
    interior = nodes <= 0.9
    for alpha, tol in ((1.0, 1e-2), (1.5, 1e-2)):
        params = ModelParams(3, alpha)
        K = solver.radial_operator(nodes, params)
        tors = K @ np.ones(len(nodes))
        c = gamma(1.5) / (2.0 ** alpha * gamma(1.0 + alpha / 2.0)
                          * gamma(1.5 + alpha / 2.0))
        exact = c * (1.0 - nodes ** 2) ** (alpha / 2.0)
        rel = np.abs(tors - exact) / exact
        assert rel[interior].max() <= tol


# ---------------------------------------------------------------------------
# nonlinear power solve


def test_power_solve_converges(solved24):
    assert solved24.stage == "radial"
    assert solved24.residual <= 1e-8
    assert solved24.lambda_star > 0.0
    assert np.all(solved24.u.values > 0.0)
    assert len(solved24.history) == solved24.iters


def test_power_solve_frozen_lambda(solved24):
    assert solved24.lambda_star == pytest.approx(0.13668715278010493, rel=1e-6)


def test_power_solve_exactly_radial(solved24):
    _, _, dev = solver.radial_profile(solved24.u)
    assert dev <= 1e-12 * np.max(solved24.u.values)


def test_power_solve_strictly_decreasing(solved24):
    _, mean, _ = solver.radial_profile(solved24.u)
    assert np.all(np.diff(mean) < 0.0)


def test_power_solve_grid_stability(solved16, solved24):
    # both grids share the internal radial discretization, so the radial
    # fixed point (and its sup) must agree to iteration accuracy
    assert solved16.lambda_star == pytest.approx(solved24.lambda_star, rel=1e-8)
    # the sup is read off at each grid's innermost radius, so compare loosely
    assert np.max(solved16.u.values) == pytest.approx(
        np.max(solved24.u.values), rel=1e-3)


def test_power_solve_init_independence(grid24, solved24):
    alt = solver.nonlinear_power_solve(
        grid24, 1.8, solver.SolveOptions(init="bump"), P31)
    err = np.max(np.abs(alt.u.values - solved24.u.values))
    assert err <= 1e-8 * np.max(solved24.u.values)


def test_power_solve_scaled_ball():
    R = 2.0
    g1 = ball_grid(P31, 12, 48)
    g2 = ball_grid(P31, 12, 48, domain=DomainKind.ball_of_radius(R))
    r1 = solver.nonlinear_power_solve(g1, 1.8, solver.SolveOptions(), P31)
    r2 = solver.nonlinear_power_solve(g2, 1.8, solver.SolveOptions(), P31)
    # if u solves the unit-ball problem, R^{-alpha/(p-1)} u(x/R) solves the
    # R-ball problem
    c = R ** (-P31.alpha / 0.8)
    err = np.max(np.abs(r2.u.values - c * r1.u.values))
    assert err <= 1e-6 * c * np.max(r1.u.values)


def test_power_solve_reports_fullgrid_residual(solved24):
    # the radial solution satisfies the 3-d grid system only up to that
    # grid's own angular quadrature error, and the report must say so
    assert 1e-4 <= solved24.fullgrid_residual <= 0.2


def test_power_solve_zero_init_degenerate(grid16):
    with pytest.raises(DegenerateError):
        solver.nonlinear_power_solve(
            grid16, 1.8, solver.SolveOptions(init=Field.zeros(grid16)), P31)


def test_power_solve_nonconvergence_has_history():
    sg = slab_grid(P31, [(-1, 1), (-1, 1), (0.0, 2.0)], (6, 6, 8))
    with pytest.raises(NonConvergenceError) as ei:
        solver.nonlinear_power_solve(
            sg, 1.8, solver.SolveOptions(max_iter=3, tol=1e-15, damping=1.0),
            P31)
    assert len(ei.value.history) == 3


def test_power_solve_requires_p_above_one(grid16):
    with pytest.raises(ParameterError):
        solver.nonlinear_power_solve(grid16, 1.0, solver.SolveOptions(), P31)


def test_solve_options_validation():
    with pytest.raises(ParameterError):
        solver.SolveOptions(max_iter=0)
    with pytest.raises(ParameterError):
        solver.SolveOptions(tol=0.0)
    with pytest.raises(ParameterError):
        solver.SolveOptions(damping=1.5)
    with pytest.raises(ParameterError):
        solver.SolveOptions(init="wavy")


# ---------------------------------------------------------------------------
# moving-plane sweeps


def test_sweep_radial_solution_all_axes(solved24):
    lams = np.linspace(-0.9, 0.0, 64)
    top = np.max(solved24.u.values)
    for axis in range(3):
        rep = solver.moving_plane_sweep(solved24.u, axis, lams, P31)
        ok = ~rep.skipped
        assert np.all(rep.min_w[ok] >= -1e-6 * top)
        assert np.all(rep.violation_counts[ok] == 0)
        # the plane ladder reaches the center for a symmetric profile
        assert abs(rep.lambda0_estimate) <= lams[1] - lams[0]


def test_sweep_high_side(solved24):
    lams = np.linspace(0.0, 0.9, 64)
    rep = solver.moving_plane_sweep(solved24.u, 0, lams, P31, side="high")
    top = np.max(solved24.u.values)
    assert np.all(rep.min_w[~rep.skipped] >= -1e-6 * top)
    assert abs(rep.lambda0_estimate) <= lams[1] - lams[0]


def test_sweep_flags_increasing_field(grid24):
    # a field increasing along the first axis fails the sweep from above
    ce = Field(grid24, grid24.points[:, 0] + 2.0)
    rep = solver.moving_plane_sweep(ce, 0, np.linspace(0.1, 0.8, 16), P31,
                                    side="high")
    assert np.nanmin(rep.min_w) < -0.5
    assert rep.violation_counts.sum() > 0
    # ... while passing it from below: one-sided sweeps prove nothing alone
    rep_low = solver.moving_plane_sweep(ce, 0, np.linspace(-0.8, -0.1, 16),
                                        P31, side="low")
    assert np.nanmin(rep_low.min_w) >= -1e-6 * 3.0


def test_sweep_empty_cap_is_skipped(solved24):
    rep = solver.moving_plane_sweep(
        solved24.u, 0, np.array([-0.9999, -0.5]), P31)
    assert rep.skipped[0] and not rep.skipped[1]
    assert np.isnan(rep.min_w[0])
    assert rep.violation_counts[0] == 0


def test_sweep_reports_interpolation_error(solved24):
    rep = solver.moving_plane_sweep(
        solved24.u, 1, np.linspace(-0.8, -0.1, 8), P31)
    ok = ~rep.skipped
    assert np.all(np.isfinite(rep.interp_error[ok]))
    assert np.any(rep.interp_error[ok] > 0.0)


def test_sweep_slab_monotone_decay():
    params = ModelParams(3, 1.0, p=2.0)
    sg = slab_grid(params, [(-1, 1), (-1, 1), (0.0, 2.0)], (12, 12, 24))
    u = Field(sg, sg.points[:, 2] * np.exp(-sg.points[:, 2] ** 2)
              * np.exp(-sg.points[:, 0] ** 2 - sg.points[:, 1] ** 2))
    lams = np.linspace(0.05, 0.45, 9)
    rep = solver.moving_plane_sweep(u, 2, lams, params)
    ok = ~rep.skipped
    assert np.all(rep.min_w[ok] >= -1e-6 * np.max(u.values))
    assert rep.lambda0_estimate == pytest.approx(lams[-1])


def test_sweep_bad_side(solved24):
    with pytest.raises(ParameterError):
        solver.moving_plane_sweep(solved24.u, 0, [0.0], P31, side="middle")


# ---------------------------------------------------------------------------
# exponent cascade


def test_cascade_anchor_values():
    rep = solver.liouville_cascade(ModelParams(3, 1.0, p=2.0))
    assert rep.m_min == 3
    assert np.allclose(rep.exponents, [-0.5, 0.0, 1.0, 3.0], atol=1e-14)
    assert rep.final_exponent == pytest.approx(3.0)
    assert rep.tau_p == pytest.approx(6.5)
    assert rep.f_p == pytest.approx(6.5)
    assert rep.fprime_p == pytest.approx(7.5)


def test_cascade_starts_at_half_alpha_minus_one():
    for alpha in (0.4, 1.0, 1.7):
        rep = solver.liouville_cascade(ModelParams(3, alpha, p=1.25))
        assert rep.exponents[0] == pytest.approx(alpha / 2.0 - 1.0)


def test_cascade_requires_p():
    with pytest.raises(ParameterError):
        solver.liouville_cascade(ModelParams(3, 1.0))


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(0.15, 1.85), pexp=st.floats(1.05, 4.0))
def test_cascade_recursion_matches_closed_form(alpha, pexp):
    params = ModelParams(3, alpha, p=min(pexp, ModelParams(3, alpha).tau))
    rep = solver.liouville_cascade(params)
    e = alpha / 2.0 - 1.0
    for k in range(1, rep.m_min + 1):
        e = params.p * e + alpha
        assert rep.exponents[k] == pytest.approx(e, rel=1e-12, abs=1e-12)
    assert rep.tau_p == pytest.approx(params.p * e + alpha / 2.0, rel=1e-12)
    assert rep.tau_p >= 0.0
    assert rep.fprime_p > 0.0


# ---------------------------------------------------------------------------
# half-space profile lower bound


def test_profile_lowerbound_zero_input():
    y = np.linspace(0.01, 1.0, 50)
    params = ModelParams(3, 1.0, p=2.0)
    assert solver.halfspace_profile_lowerbound(y, np.zeros(50), params, 5.0) == 0.0


def test_profile_lowerbound_decay_exponent():
    # constant seed on (0, 1]: the bound decays like x^{alpha/2 - 1}
    y = (np.arange(4000) + 0.5) / 4000.0
    u = np.ones_like(y)
    params = ModelParams(3, 1.0, p=2.0)
    xs = np.geomspace(1e2, 1e4, 13)
    vals = np.array([solver.halfspace_profile_lowerbound(y, u, params, x)
                     for x in xs])
    assert np.all(np.diff(vals) < 0.0)
    slope = np.polyfit(np.log(xs), np.log(vals), 1)[0]
    assert abs(slope - (-0.5)) <= 0.05


def test_profile_lowerbound_monotone_in_seed():
    y = np.linspace(0.001, 1.0, 500)
    params = ModelParams(3, 1.0, p=2.0)
    lo = solver.halfspace_profile_lowerbound(y, np.full(500, 0.5), params, 10.0)
    hi = solver.halfspace_profile_lowerbound(y, np.ones(500), params, 10.0)
    assert 0.0 < lo < hi


def test_profile_lowerbound_node_exclusion_warns():
    y = np.linspace(0.1, 1.0, 10)
    params = ModelParams(3, 1.0, p=2.0)
    with pytest.warns(solver.NodeExclusionWarning):
        val = solver.halfspace_profile_lowerbound(y, np.ones(10), params,
                                                  x_n=float(y[4]))
    assert np.isfinite(val) and val > 0.0


def test_profile_lowerbound_validation():
    params = ModelParams(3, 1.0, p=2.0)
    y = np.linspace(0.1, 1.0, 10)
    with pytest.raises(ParameterError):
        solver.halfspace_profile_lowerbound(y[::-1], np.ones(10), params, 5.0)
    with pytest.raises(ParameterError):
        solver.halfspace_profile_lowerbound(y, -np.ones(10), params, 5.0)
    with pytest.raises(ParameterError):
        solver.halfspace_profile_lowerbound(y, np.ones(10), params, 0.0)
    with pytest.raises(ParameterError):
        solver.halfspace_profile_lowerbound(y, np.ones(10),
                                            ModelParams(3, 1.0), 5.0)
