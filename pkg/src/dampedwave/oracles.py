"""Independent numerical oracles for the symbolic derivative families.

Central finite differences computed in extended precision (mpmath) against
the *defining* closed forms of the three scalar functions:

    f(r, c, t) = cos(t sqrt(r^2 - c))
    g(r, a, t) = exp(-2 t r^2 / (1 + sqrt(1 - 4 a r^2)))
    h(r, a, t) = g(r, a, t) / sqrt(1 - 4 a r^2)

Nothing here touches the chain-rule/recurrence constructions being checked.
"""

from __future__ import annotations

import mpmath as mp


def fd_derivative(func, x0: float, order: int, dps: int = 40) -> float:
    """order-th derivative of func at x0 by central finite differences in
    dps-digit arithmetic (roundoff is negligible at this precision)."""
    with mp.workdps(dps):
        return float(mp.diff(func, mp.mpf(x0), order, direction=0))


def f_c_derivative(k: int, r: float, c: float, t: float, dps: int = 40) -> float:
    """d^k/dc^k cos(t sqrt(r^2 - c))."""
    rr, tt = mp.mpf(r), mp.mpf(t)

    def func(cc):
        return mp.cos(tt * mp.sqrt(rr * rr - cc))

    return fd_derivative(func, c, k, dps)


def g_a_derivative(k: int, r: float, a: float, t: float, dps: int = 40) -> float:
    """d^k/da^k exp(-2 t r^2 / (1 + sqrt(1 - 4 a r^2)))."""
    rr, tt = mp.mpf(r), mp.mpf(t)

    def func(aa):
        return mp.exp(-2 * tt * rr * rr / (1 + mp.sqrt(1 - 4 * aa * rr * rr)))

    return fd_derivative(func, a, k, dps)


def h_a_derivative(k: int, r: float, a: float, t: float, dps: int = 40) -> float:
    """d^k/da^k of g divided by sqrt(1 - 4 a r^2)."""
    rr, tt = mp.mpf(r), mp.mpf(t)

    def func(aa):
        root = mp.sqrt(1 - 4 * aa * rr * rr)
        return mp.exp(-2 * tt * rr * rr / (1 + root)) / root

    return fd_derivative(func, a, k, dps)


def inv_one_plus_sqrt_a_derivative(k: int, r: float, a: float, dps: int = 40) -> float:
    """d^k/da^k (1 + sqrt(1 - 4 a r^2))^-1."""
    rr = mp.mpf(r)

    def func(aa):
        return 1 / (1 + mp.sqrt(1 - 4 * aa * rr * rr))

    return fd_derivative(func, a, k, dps)
