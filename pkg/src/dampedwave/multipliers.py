"""Numerically stable evaluation of the solution and profile multipliers.

Everything is radial: a multiplier is a function of (r, t) with r = |xi|.
The exact solution multipliers are

    k0_hat(r, t) = e^(-t/2) * cos(t sqrt(r^2 - 1/4))   (cosh below r = 1/2)
    k1_hat(r, t) = e^(-t/2) * sin(t sqrt(r^2 - 1/4)) / sqrt(r^2 - 1/4)

and the asymptotic-profile multipliers are the wave sums W^i_b (exact trig
kernels from :mod:`dampedwave.expansion`, lowered onto the fast numeric
backend) and the diffusive sums D^i_l.  Remainder multipliers subtract the
profiles from the exact symbols and cut off to a frequency region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _evalcore as core
from .expansion import (
    TrigPoly,
    diffusive_profile,
    even_series,
    wave_profile,
)


def _apply(f: Callable[[np.ndarray, float], np.ndarray], r, t: float):
    """Run an array kernel on scalar or array input, preserving shape."""
    arr = np.asarray(r, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    out = f(flat, float(t))
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


# ---------------------------------------------------------------------------
# Exact solution multipliers
# ---------------------------------------------------------------------------


def k0_hat(r, t: float):
    """Multiplier propagating the first datum; continuous across r = 1/2."""
    return _apply(core.k0_kernel, r, t)


def k1_hat(r, t: float):
    """Multiplier propagating the shifted datum; removable singularity at
    r = 1/2 where the value is t e^(-t/2)."""
    return _apply(core.k1_kernel, r, t)


# ---------------------------------------------------------------------------
# Cutoffs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutoffFamily:
    """Smooth partition of unity chi_L + chi_M + chi_H = 1.

    chi_L is 1 on [0, 1/4] and 0 from 1/3 on; chi_H is 0 on [0, 1] and 1
    from 2 on; chi_M is the complement.  Transitions use the exp(-1/x)
    mollifier, so all three are smooth.
    """

    chi_L: Callable
    chi_M: Callable
    chi_H: Callable
    low_plateau: float = 0.25
    low_support: float = 1.0 / 3.0
    high_support: float = 1.0
    high_plateau: float = 2.0


def cutoffs() -> CutoffFamily:
    def chi_l(r):
        return _apply(lambda a, _t: core.cutoff_low(a), r, 0.0)

    def chi_h(r):
        return _apply(lambda a, _t: core.cutoff_high(a), r, 0.0)

    def chi_m(r):
        return 1.0 - chi_l(r) - chi_h(r)

    return CutoffFamily(chi_L=chi_l, chi_M=chi_m, chi_H=chi_h)


# ---------------------------------------------------------------------------
# Lowering of exact kernels onto the numeric backend
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LoweredTrig:
    """Arrays feeding the trig_kernel backend function."""

    coef: np.ndarray
    tpow: np.ndarray
    rpow: np.ndarray
    issin: np.ndarray
    dpow: int
    sercoef: np.ndarray
    tbase: int
    xswitch: float

    def __call__(self, r: np.ndarray, t: float) -> np.ndarray:
        return core.trig_kernel(
            r,
            t,
            self.coef,
            self.tpow,
            self.rpow,
            self.issin,
            self.dpow,
            self.sercoef,
            self.tbase,
            self.xswitch,
        )


def lower_trig_kernel(kernel: TrigPoly) -> LoweredTrig:
    """Convert an exact trig kernel into backend arrays.

    The series branch is used for x = t*r <= xswitch.  xswitch is placed
    just above the radius where the even-series terms stop being monotone,
    which keeps the series cancellation-free while the direct trig
    polynomial is already mildly conditioned there; the series length is
    then extended until the tail at xswitch is below 1e-19 relative.
    """
    d = kernel.denominator_r_power
    xswitch = math.sqrt(2.0 * (d + 2.0)) + 1.0
    n = 12
    while True:
        tbase, coeffs = even_series(kernel, n)
        mags = [abs(float(c)) * xswitch ** (2 * m) for m, c in enumerate(coeffs)]
        peak = max(mags) if mags else 0.0
        if peak == 0.0 or (len(mags) >= 8 and max(mags[-2:]) < 1e-19 * peak):
            break
        if n >= 96:
            break
        n += 12
    keys = sorted(kernel.terms)
    return LoweredTrig(
        coef=np.array([float(kernel.terms[k]) for k in keys], dtype=np.float64),
        tpow=np.array([k[0] for k in keys], dtype=np.int64),
        rpow=np.array([k[1] for k in keys], dtype=np.int64),
        issin=np.array([1 if k[2] == "sin" else 0 for k in keys], dtype=np.int64),
        dpow=d,
        sercoef=np.array([float(c) for c in coeffs], dtype=np.float64),
        tbase=tbase,
        xswitch=xswitch,
    )


@lru_cache(maxsize=None)
def _lowered_wave_profile(i: int, b: int) -> tuple[tuple[float, LoweredTrig], ...]:
    return tuple(
        (float(weight), lower_trig_kernel(kernel)) for weight, kernel in wave_profile(i, b)
    )


def _wave_values(i: int, b: int, r: np.ndarray, t: float) -> np.ndarray:
    parts = _lowered_wave_profile(i, b)
    out = np.zeros_like(r)
    for weight, lowered in parts:
        out += weight * lowered(r, t)
    return out


@dataclass(frozen=True)
class LoweredDiffusive:
    karr: np.ndarray
    jarr: np.ndarray
    carr: np.ndarray

    def __call__(self, r: np.ndarray, t: float) -> np.ndarray:
        return core.diffusive_kernel(r, t, self.karr, self.jarr, self.carr)


@lru_cache(maxsize=None)
def _lowered_diffusive_profile(i: int, ell: int) -> LoweredDiffusive:
    poly = diffusive_profile(i, ell)
    keys = sorted(poly.terms)
    return LoweredDiffusive(
        karr=np.array([k for k, _j in keys], dtype=np.int64),
        jarr=np.array([j for _k, j in keys], dtype=np.int64),
        carr=np.array([float(poly.terms[k]) for k in keys], dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# Multiplier objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Multiplier:
    """A numerically evaluable radial symbol m(r, t) with a label."""

    label: str
    evaluate: Callable

    def __call__(self, r, t: float):
        return self.evaluate(r, t)


def wave_profile_multiplier(i: int, b: int) -> Multiplier:
    """W^i_b(r, t); finite at r = 0 (series branch supplies the limit)."""

    def evaluate(r, t):
        return _apply(lambda a, tt: _wave_values(i, b, a, tt), r, t)

    return Multiplier(label=f"W{i}_{b}", evaluate=evaluate)


def diffusive_profile_multiplier(i: int, ell: int) -> Multiplier:
    """D^i_l(r, t)."""
    lowered = _lowered_diffusive_profile(i, ell)

    def evaluate(r, t):
        return _apply(lowered, r, t)

    return Multiplier(label=f"D{i}_{ell}", evaluate=evaluate)


_REGIONS = ("L", "M", "H", "ALL")


def _region_weights(region: str, r: np.ndarray) -> np.ndarray | float:
    if region == "ALL":
        return 1.0
    if region == "L":
        return core.cutoff_low(r)
    if region == "H":
        return core.cutoff_high(r)
    return 1.0 - core.cutoff_low(r) - core.cutoff_high(r)


def remainder_multiplier(i: int, b: int, ell: int, region: str = "ALL") -> Multiplier:
    """chi_region(r) * [exact multiplier - e^(-t/2) W^i_b - D^i_l].

    The three cutoff regions sum to the ALL variant exactly (the cutoffs
    form a partition of unity).
    """
    if i not in (1, 2):
        raise ValueError(f"multiplier index must be 1 or 2, got {i}")
    if b < 1 or ell < 1:
        raise ValueError(f"profile orders must be >= 1, got b={b}, ell={ell}")
    if region not in _REGIONS:
        raise ValueError(f"region must be one of {_REGIONS}, got {region!r}")

    exact = core.k0_kernel if i == 1 else core.k1_kernel
    diff = _lowered_diffusive_profile(i, ell)

    def kernel(r: np.ndarray, t: float) -> np.ndarray:
        rem = exact(r, t) - math.exp(-0.5 * t) * _wave_values(i, b, r, t) - diff(r, t)
        return _region_weights(region, r) * rem

    def evaluate(r, t):
        return _apply(kernel, r, t)

    return Multiplier(label=f"m{i}_b{b}_l{ell}_{region}", evaluate=evaluate)


def comparison_multipliers() -> dict[str, Multiplier]:
    """The free-wave and heat symbols used in the decomposition demos:
    w0_hat = cos(tr), w1_hat = sin(tr)/r (value t at r = 0),
    heat_hat = e^(-t r^2)."""

    def w0(r, t):
        return _apply(lambda a, tt: np.cos(tt * a), r, t)

    def w1(r, t):
        # sin(tr)/r = t * sinc(tr/pi), stable through r = 0
        return _apply(lambda a, tt: tt * np.sinc(tt * a / np.pi), r, t)

    def heat(r, t):
        return _apply(lambda a, tt: np.exp(-tt * a * a), r, t)

    return {
        "w0_hat": Multiplier("w0_hat", w0),
        "w1_hat": Multiplier("w1_hat", w1),
        "heat_hat": Multiplier("heat_hat", heat),
    }


def constant_multiplier(value: float = 1.0, label: str = "const") -> Multiplier:
    def evaluate(r, t):
        return _apply(lambda a, _tt: np.full_like(a, value), r, t)

    return Multiplier(label, evaluate)
