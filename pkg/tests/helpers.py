"""Shared oracles for the test suite.

The kernel integral oracle integrates the *defining* integrand adaptively
(scipy QAGS) after the endpoint-flattening change of variables
b = S * w^(1/(1-alpha/2)), which removes the b^{-alpha/2} singularity
exactly.  It shares no code with the fixed Gauss--Jacobi evaluation path.
"""

import numpy as np
from scipy import integrate


def oracle_i1(S, n, alpha, tol=1e-13):
    """I1(S) = int_0^S ((S-b)/(S+1))^((n-2)/2) b^(-alpha/2) (1+b)^(-1) db."""
    nu = (n - 2) / 2.0
    ha = alpha / 2.0
    q = 1.0 / (1.0 - ha)

    def g(w):
        if w <= 0.0:
            return (S / (S + 1.0)) ** nu
        b = S * w ** q
        # (S - b)/(S + 1) = S(1 - w^q)/(S + 1), with 1 - w^q kept stable
        em = -np.expm1(q * np.log(w))
        return (S * em / (S + 1.0)) ** nu / (1.0 + b)

    val, err = integrate.quad(g, 0.0, 1.0, epsabs=0.0, epsrel=tol, limit=400)
    assert err < 1e-9 * abs(val), f"oracle failed at S={S}"
    return S ** (1.0 - ha) * q * val


def oracle_bracket(S, n, alpha):
    inv_B = np.pi / np.sin(np.pi * alpha / 2.0)
    return 1.0 - oracle_i1(S, n, alpha) / inv_B


def fd_partials(f, s, t, rel_step=1e-4):
    """5-point central finite-difference partials of f(s, t)."""
    hs = rel_step * s
    ht = rel_step * t
    def d5(vals, h):
        m2, m1, p1, p2 = vals
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)
    ds = d5([f(s - 2 * hs, t), f(s - hs, t), f(s + hs, t), f(s + 2 * hs, t)], hs)
    dt = d5([f(s, t - 2 * ht), f(s, t - ht), f(s, t + ht), f(s, t + 2 * ht)], ht)
    return ds, dt
