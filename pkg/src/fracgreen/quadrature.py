"""Quadrature building blocks.

Two tools live here:

* `jacobi_rule` -- fixed Gauss--Jacobi rules on (0, 1) for weights
  u**a * (1-u)**b with integrable endpoint exponents a, b > -1.  These are
  the workhorse for every kernel integral: the endpoint singularities of the
  Green's function integrand are absorbed exactly by the weight.
* `adaptive_quad` -- a thin wrapper over scipy's adaptive integrator, used
  as the *independent* cross-check oracle in the verification suites.  The
  fixed rules are never validated against themselves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ParameterError, QuadratureError


@dataclass(frozen=True)
class JacobiRule:
    """Gauss--Jacobi rule on (0,1) for the weight u**exp_at_zero * (1-u)**exp_at_one.

    `apply(f)` integrates weight * f for a smooth f exactly when f is a
    polynomial of degree <= 2*m - 1.
    """

    exp_at_zero: float
    exp_at_one: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def m(self) -> int:
        return len(self.nodes)

    def apply(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def beta_mass(self) -> float:
        """Total weight integral B(exp_at_zero+1, exp_at_one+1)."""
        return float(special.beta(self.exp_at_zero + 1.0, self.exp_at_one + 1.0))


def jacobi_rule(m: int, exp_at_zero: float, exp_at_one: float) -> JacobiRule:
    """Build an m-point Gauss--Jacobi rule on (0, 1).

    Both exponents must exceed -1 (otherwise the weight is not integrable).
    The rule is self-checked against the Beta mass before being returned.
    """
    if not m >= 1:
        raise ParameterError(f"node count must be >= 1, got {m}")
    if exp_at_zero <= -1.0 or exp_at_one <= -1.0:
        raise ParameterError(
            f"endpoint exponents must be > -1, got ({exp_at_zero}, {exp_at_one})"
        )
    # scipy's convention is the weight (1-x)^a (1+x)^b on [-1, 1]; map with
    # u = (1+x)/2 so a binds to the u=1 endpoint and b to u=0.
    x, w = special.roots_jacobi(m, exp_at_one, exp_at_zero)
    nodes = 0.5 * (x + 1.0)
    weights = w / 2.0 ** (exp_at_zero + exp_at_one + 1.0)
    rule = JacobiRule(exp_at_zero, exp_at_one, nodes, weights)
    mass = float(np.sum(weights))
    ref = rule.beta_mass()
    if not np.isfinite(mass) or abs(mass - ref) > 1e-12 * abs(ref):
        raise QuadratureError(
            f"Jacobi rule self-check failed: sum(w)={mass!r} vs Beta={ref!r}"
        )
    return rule


def adaptive_quad(f, lo: float, hi: float, tol: float = 1e-12,
                  singular_points=None) -> float:
    """Adaptive integration of f over (lo, hi); hi may be numpy.inf.

    Raises QuadratureError when the integrator cannot certify the requested
    absolute-or-relative tolerance.  This is the oracle route: it shares no
    machinery with the fixed Jacobi rules.
    """
    if not (hi > lo):
        raise ParameterError(f"empty integration range ({lo}, {hi})")
    kwargs = {"epsabs": tol, "epsrel": tol, "limit": 400}
    if singular_points is not None and np.isfinite(hi):
        kwargs["points"] = [p for p in singular_points if lo < p < hi]
    with warnings.catch_warnings():
        # the explicit error check below is the authority, not the warning
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(f, lo, hi, **kwargs)
    scale = max(abs(value), 1.0)
    if not np.isfinite(value) or err > 100.0 * tol * scale:
        raise QuadratureError(
            f"adaptive quadrature did not converge: value={value!r}, err={err!r}"
        )
    return float(value)
