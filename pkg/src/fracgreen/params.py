"""Model parameters and domain descriptors.

The whole library is parameterized by the dimension n >= 3 and the order
alpha in (0, 2) of the operator (-Delta)^(alpha/2).  A power-nonlinearity
exponent p is optional and, when present, must satisfy
1 < p <= (n + alpha)/(n - alpha)  (the critical exponent tau).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ParameterError

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    n: int
    alpha: float
    p: float | None = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ParameterError(f"dimension n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ParameterError(f"dimension n must be >= 3, got {self.n}")
        if not (0.0 < self.alpha < 2.0):
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.p is not None:
            if not (1.0 < self.p <= self.tau):
                raise ParameterError(
                    f"p must lie in (1, (n+alpha)/(n-alpha)] = (1, {self.tau}], got {self.p}"
                )

    @property
    def tau(self) -> float:
        """Critical exponent (n + alpha)/(n - alpha)."""
        return (self.n + self.alpha) / (self.n - self.alpha)


# Domain tags.  The kernel has one closed form in the reduced coordinates
# (s, t); domains only differ in how t is built from the points and in the
# membership predicate.
_UNIT_BALL = "unit_ball"
_HALF_SPACE = "half_space"
_BALL_R = "ball_radius"


@dataclass(frozen=True)
class DomainKind:
    kind: str
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in (_UNIT_BALL, _HALF_SPACE, _BALL_R):
            raise ParameterError(f"unknown domain kind {self.kind!r}")
        if self.kind == _BALL_R:
            if self.radius is None or not (self.radius > 0):
                raise ParameterError("BallRadiusR requires a radius R > 0")

    @classmethod
    def unit_ball(cls) -> "DomainKind":
        return cls(_UNIT_BALL)

    @classmethod
    def half_space(cls) -> "DomainKind":
        return cls(_HALF_SPACE)

    @classmethod
    def ball_of_radius(cls, R: float) -> "DomainKind":
        """Ball of radius R tangent to the hyperplane {x_n = 0} at the origin,
        centered at P_R = (0, ..., 0, R).  BallRadiusR(1) is the unit ball
        translated by P_1; as R -> infinity these exhaust the half-space."""
        return cls(_BALL_R, float(R))

    @property
    def is_ball(self) -> bool:
        return self.kind in (_UNIT_BALL, _BALL_R)

    def center(self, n: int) -> np.ndarray:
        if self.kind == _UNIT_BALL:
            return np.zeros(n)
        if self.kind == _BALL_R:
            c = np.zeros(n)
            c[-1] = self.radius
            return c
        raise DomainError("half-space has no center")

    def contains(self, x: np.ndarray, *, open_set: bool = True) -> bool:
        """Membership of a single point; open_set=False tests the closure."""
        x = np.asarray(x, dtype=float)
        if self.kind == _HALF_SPACE:
            return bool(x[-1] > 0.0) if open_set else bool(x[-1] >= 0.0)
        r = self.radius if self.kind == _BALL_R else 1.0
        d2 = float(np.dot(x - self.center(len(x)), x - self.center(len(x))))
        return d2 < r * r if open_set else d2 <= r * r


UNIT_BALL = DomainKind.unit_ball()
HALF_SPACE = DomainKind.half_space()
