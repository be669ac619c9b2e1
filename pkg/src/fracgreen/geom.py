"""Reflections across moving planes, sweep regions, and the Kelvin inversion.

Everything here is a pure function of points (dense float arrays whose last
axis is the coordinate index).  Planes are axis-aligned: the moving-plane
method only ever sweeps perpendicular to a coordinate axis, either the first
coordinate (tangential sweeps) or the last one (normal sweeps on the
half-space).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, SingularityError
from .params import DomainKind, ModelParams


@dataclass(frozen=True)
class Hyperplane:
    """The plane {x[axis] = level}.  axis is a 0-based coordinate index."""

    axis: int
    level: float


def reflect(x, plane: Hyperplane):
    """Mirror image of x across the plane; other coordinates untouched.

    Accepts a single point or an array of points (coordinates on the last
    axis).
    """
    x = np.asarray(x, dtype=float)
    out = x.copy()
    out[..., plane.axis] = 2.0 * plane.level - x[..., plane.axis]
    return out


def in_sigma(x, plane: Hyperplane, domain: DomainKind, side: str = "low") -> bool:
    """Is x strictly inside the domain and strictly on the sweep side?

    side="low" is the region x[axis] < level (the cap swept over when the
    plane advances from the left); side="high" is x[axis] > level.
    """
    if side not in ("low", "high"):
        raise ParameterError(f"side must be 'low' or 'high', got {side!r}")
    x = np.asarray(x, dtype=float)
    if not domain.contains(x, open_set=True):
        return False
    v = float(x[plane.axis])
    return v < plane.level if side == "low" else v > plane.level


def inversion_center(z0) -> np.ndarray:
    """Validated inversion center: must lie on the half-space boundary."""
    z0 = np.asarray(z0, dtype=float)
    if z0[-1] != 0.0:
        raise DomainError(
            f"inversion center must satisfy z0[-1] = 0, got {z0[-1]}"
        )
    return z0


def kelvin_point(x, z0) -> np.ndarray:
    """Inversion about the unit sphere centered at z0:
    xhat = (x - z0)/|x - z0|^2 + z0.

    With z0 on the boundary the upper half-space maps to itself.
    """
    z0 = inversion_center(z0)
    x = np.asarray(x, dtype=float)
    d = x - z0
    r2 = float(np.dot(d, d))
    if r2 == 0.0:
        raise SingularityError("Kelvin inversion is singular at its center")
    return d / r2 + z0


def kelvin_value(u_at_xhat: float, x, z0, params: ModelParams) -> float:
    """Transformed function value: ubar(x) = |x - z0|^(alpha - n) * u(xhat).

    Applying the transform twice returns the original value, since the
    inversion is an involution and the prefactors cancel.
    """
    z0 = inversion_center(z0)
    x = np.asarray(x, dtype=float)
    d = x - z0
    r2 = float(np.dot(d, d))
    if r2 == 0.0:
        raise SingularityError("Kelvin inversion is singular at its center")
    return r2 ** (0.5 * (params.alpha - params.n)) * u_at_xhat


def kelvin_weight_exponent(params: ModelParams) -> float:
    """Exponent beta = (n - alpha)*(tau - p) of the weight |y - z0|^(-beta)
    picked up by the source term under the transform.

    beta >= 0 on the admissible range and beta = 0 exactly at the critical
    exponent p = tau, where the equation is invariant.
    """
    if params.p is None:
        raise ParameterError("kelvin_weight_exponent requires params.p")
    return (params.n - params.alpha) * (params.tau - params.p)


def kelvin_kernel_residual(x, y, z0, params: ModelParams) -> float:
    """Relative residual of the half-space kernel covariance identity

        G(xhat, yhat) = (|x - z0| |y - z0|)^(n - alpha) * G(x, y).

    Both sides are evaluated through the ordinary kernel path; nothing is
    simplified analytically, so this measures the identity end to end.
    """
    from .kernel import green
    from .params import HALF_SPACE

    z0 = inversion_center(z0)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xh = kelvin_point(x, z0)
    yh = kelvin_point(y, z0)
    rx = float(np.linalg.norm(x - z0))
    ry = float(np.linalg.norm(y - z0))
    lhs = green(HALF_SPACE, xh, yh, params)
    rhs = (rx * ry) ** (params.n - params.alpha) * green(HALF_SPACE, x, y, params)
    if rhs == 0.0:
        raise DomainError("residual undefined: kernel vanishes at this pair")
    return abs(lhs - rhs) / rhs
