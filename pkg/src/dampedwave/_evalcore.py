"""Hot numeric kernels: pointwise multiplier evaluation over node arrays.

Every function here evaluates one scalar symbol at a fixed time t over an
array of radial frequencies r.  Two implementations exist side by side:

* numba ``@njit`` loops (default when numba imports cleanly), and
* pure-numpy vectorized fallbacks.

Selection is controlled by the environment variable ``DWAVE_BACKEND``:
``auto`` (default), ``numba``, or ``numpy``.  ``benchmarks/kernel_bench.py``
compares the two paths.

Numerical strategy, shared by both paths:

* k0/k1: the branch point r = 1/2 is crossed through the entire even series
  in w = r^2 - 1/4 whenever t^2 |w| <= 4 (the series has no cancellation
  there); the hyperbolic side uses the overflow-safe split with the exponent
  2r^2/(1 + sqrt(1-4r^2)) instead of 1/2 - sqrt(1/4 - r^2).
* wave-profile kernels (trig polynomials over r^d): below x = t*r <= xswitch
  the exact even series in x^2 is summed (no cancellation); above it the trig
  polynomial is evaluated directly (cancellation is mild there by choice of
  xswitch).
"""

from __future__ import annotations

import math
import os

import numpy as np

_BACKEND_ENV = "DWAVE_BACKEND"

# --- shared constants -------------------------------------------------------

_SERIES_LEN = 20
# 1/(2j)! and 1/(2j+1)! for the even cos- and sinc-type series in w
_COS_COEF = np.array([1.0 / math.factorial(2 * j) for j in range(_SERIES_LEN)])
_SINC_COEF = np.array([1.0 / math.factorial(2 * j + 1) for j in range(_SERIES_LEN)])
# use the w-series while |t^2 w| <= this bound: terms are decreasing, so the
# truncation error of 20 terms is ~4^20/40! ~ 1e-36 relative
_W_SERIES_BOUND = 4.0

# mollifier transition slopes: chi_L falls on [1/4, 1/3], chi_H rises on [1, 2]
_LOW_A, _LOW_B = 0.25, 1.0 / 3.0
_HIGH_A, _HIGH_B = 1.0, 2.0


# --- pure numpy implementations ----------------------------------------------


def _cutoff_low_numpy(r: np.ndarray) -> np.ndarray:
    x = (r - _LOW_A) / (_LOW_B - _LOW_A)
    out = np.empty_like(r)
    lo = x <= 0.0
    hi = x >= 1.0
    mid = ~(lo | hi)
    out[lo] = 1.0
    out[hi] = 0.0
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = b / (a + b)
    return out


def _cutoff_high_numpy(r: np.ndarray) -> np.ndarray:
    x = (r - _HIGH_A) / (_HIGH_B - _HIGH_A)
    out = np.empty_like(r)
    lo = x <= 0.0
    hi = x >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = a / (a + b)
    return out


def _k0_numpy(r: np.ndarray, t: float) -> np.ndarray:
    w = r * r - 0.25
    u = t * t * np.abs(w)
    out = np.empty_like(r)

    ser = u <= _W_SERIES_BOUND
    if np.any(ser):
        ws = w[ser]
        arg = -(t * t) * ws
        acc = np.full_like(ws, _COS_COEF[_SERIES_LEN - 1])
        for j in range(_SERIES_LEN - 2, -1, -1):
            acc = acc * arg + _COS_COEF[j]
        out[ser] = math.exp(-0.5 * t) * acc

    hyp = (~ser) & (w < 0.0)
    if np.any(hyp):
        rh = r[hyp]
        root = np.sqrt(1.0 - 4.0 * rh * rh)
        q = 2.0 * rh * rh / (1.0 + root)  # == 1/2 - sqrt(1/4 - r^2), stably
        s = 0.5 * root
        out[hyp] = 0.5 * (np.exp(-t * q) + np.exp(-t * (0.5 + s)))

    trig = (~ser) & (w > 0.0)
    if np.any(trig):
        z = np.sqrt(w[trig])
        out[trig] = math.exp(-0.5 * t) * np.cos(t * z)
    return out


def _k1_numpy(r: np.ndarray, t: float) -> np.ndarray:
    w = r * r - 0.25
    u = t * t * np.abs(w)
    out = np.empty_like(r)

    ser = u <= _W_SERIES_BOUND
    if np.any(ser):
        ws = w[ser]
        arg = -(t * t) * ws
        acc = np.full_like(ws, _SINC_COEF[_SERIES_LEN - 1])
        for j in range(_SERIES_LEN - 2, -1, -1):
            acc = acc * arg + _SINC_COEF[j]
        out[ser] = math.exp(-0.5 * t) * t * acc

    hyp = (~ser) & (w < 0.0)
    if np.any(hyp):
        rh = r[hyp]
        root = np.sqrt(1.0 - 4.0 * rh * rh)
        q = 2.0 * rh * rh / (1.0 + root)
        s = 0.5 * root
        out[hyp] = (np.exp(-t * q) - np.exp(-t * (0.5 + s))) / (2.0 * s)

    trig = (~ser) & (w > 0.0)
    if np.any(trig):
        z = np.sqrt(w[trig])
        out[trig] = math.exp(-0.5 * t) * np.sin(t * z) / z
    return out


def _trig_kernel_numpy(
    r: np.ndarray,
    t: float,
    coef: np.ndarray,
    tpow: np.ndarray,
    rpow: np.ndarray,
    issin: np.ndarray,
    dpow: int,
    sercoef: np.ndarray,
    tbase: int,
    xswitch: float,
) -> np.ndarray:
    x = t * r
    out = np.empty_like(r)
    ser = x <= xswitch
    if np.any(ser):
        x2 = x[ser] ** 2
        acc = np.full_like(x2, sercoef[-1])
        for j in range(len(sercoef) - 2, -1, -1):
            acc = acc * x2 + sercoef[j]
        out[ser] = t**tbase * acc
    direct = ~ser
    if np.any(direct):
        rd = r[direct]
        xd = x[direct]
        sn = np.sin(xd)
        cs = np.cos(xd)
        num = np.zeros_like(rd)
        for i in range(len(coef)):
            trig = sn if issin[i] else cs
            num += coef[i] * t ** int(tpow[i]) * rd ** int(rpow[i]) * trig
        out[direct] = num / rd**dpow
    return out


def _diffusive_numpy(
    r: np.ndarray,
    t: float,
    karr: np.ndarray,
    jarr: np.ndarray,
    carr: np.ndarray,
) -> np.ndarray:
    x = t * r * r
    damp = np.exp(-x)
    acc = np.zeros_like(r)
    live = damp > 0.0
    if np.any(live):
        rl = r[live]
        xl = x[live]
        s = np.zeros_like(rl)
        for i in range(len(carr)):
            s += carr[i] * rl ** int(2 * karr[i]) * xl ** int(jarr[i])
        acc[live] = s
    return acc * damp


_NUMPY_IMPLS = {
    "cutoff_low": _cutoff_low_numpy,
    "cutoff_high": _cutoff_high_numpy,
    "k0": _k0_numpy,
    "k1": _k1_numpy,
    "trig_kernel": _trig_kernel_numpy,
    "diffusive": _diffusive_numpy,
}


# --- numba implementations ---------------------------------------------------


def _build_numba_impls():
    from numba import njit

    cos_coef = _COS_COEF
    sinc_coef = _SINC_COEF
    series_len = _SERIES_LEN
    w_bound = _W_SERIES_BOUND
    low_a, low_b = _LOW_A, _LOW_B
    high_a, high_b = _HIGH_A, _HIGH_B

    @njit(cache=True)
    def cutoff_low(r):
        out = np.empty_like(r)
        scale = 1.0 / (low_b - low_a)
        for i in range(r.size):
            x = (r[i] - low_a) * scale
            if x <= 0.0:
                out[i] = 1.0
            elif x >= 1.0:
                out[i] = 0.0
            else:
                a = math.exp(-1.0 / x)
                b = math.exp(-1.0 / (1.0 - x))
                out[i] = b / (a + b)
        return out

    @njit(cache=True)
    def cutoff_high(r):
        out = np.empty_like(r)
        scale = 1.0 / (high_b - high_a)
        for i in range(r.size):
            x = (r[i] - high_a) * scale
            if x <= 0.0:
                out[i] = 0.0
            elif x >= 1.0:
                out[i] = 1.0
            else:
                a = math.exp(-1.0 / x)
                b = math.exp(-1.0 / (1.0 - x))
                out[i] = a / (a + b)
        return out

    @njit(cache=True)
    def k0(r, t):
        out = np.empty_like(r)
        emt2 = math.exp(-0.5 * t)
        for i in range(r.size):
            w = r[i] * r[i] - 0.25
            u = t * t * abs(w)
            if u <= w_bound:
                arg = -(t * t) * w
                acc = cos_coef[series_len - 1]
                for j in range(series_len - 2, -1, -1):
                    acc = acc * arg + cos_coef[j]
                out[i] = emt2 * acc
            elif w < 0.0:
                root = math.sqrt(1.0 - 4.0 * r[i] * r[i])
                q = 2.0 * r[i] * r[i] / (1.0 + root)
                s = 0.5 * root
                out[i] = 0.5 * (math.exp(-t * q) + math.exp(-t * (0.5 + s)))
            else:
                z = math.sqrt(w)
                out[i] = emt2 * math.cos(t * z)
        return out

    @njit(cache=True)
    def k1(r, t):
        out = np.empty_like(r)
        emt2 = math.exp(-0.5 * t)
        for i in range(r.size):
            w = r[i] * r[i] - 0.25
            u = t * t * abs(w)
            if u <= w_bound:
                arg = -(t * t) * w
                acc = sinc_coef[series_len - 1]
                for j in range(series_len - 2, -1, -1):
                    acc = acc * arg + sinc_coef[j]
                out[i] = emt2 * t * acc
            elif w < 0.0:
                root = math.sqrt(1.0 - 4.0 * r[i] * r[i])
                q = 2.0 * r[i] * r[i] / (1.0 + root)
                s = 0.5 * root
                out[i] = (math.exp(-t * q) - math.exp(-t * (0.5 + s))) / (2.0 * s)
            else:
                z = math.sqrt(w)
                out[i] = emt2 * math.sin(t * z) / z
        return out

    @njit(cache=True)
    def trig_kernel(r, t, coef, tpow, rpow, issin, dpow, sercoef, tbase, xswitch):
        out = np.empty_like(r)
        nser = sercoef.size
        nterm = coef.size
        tb = t**tbase
        for i in range(r.size):
            x = t * r[i]
            if x <= xswitch:
                x2 = x * x
                acc = sercoef[nser - 1]
                for j in range(nser - 2, -1, -1):
                    acc = acc * x2 + sercoef[j]
                out[i] = tb * acc
            else:
                sn = math.sin(x)
                cs = math.cos(x)
                num = 0.0
                for j in range(nterm):
                    trig = sn if issin[j] else cs
                    num += coef[j] * t ** tpow[j] * r[i] ** rpow[j] * trig
                out[i] = num / r[i] ** dpow
        return out

    @njit(cache=True)
    def diffusive(r, t, karr, jarr, carr):
        out = np.empty_like(r)
        n = carr.size
        for i in range(r.size):
            x = t * r[i] * r[i]
            damp = math.exp(-x)
            if damp == 0.0:
                out[i] = 0.0
                continue
            acc = 0.0
            for j in range(n):
                acc += carr[j] * r[i] ** (2 * karr[j]) * x ** jarr[j]
            out[i] = acc * damp
        return out

    return {
        "cutoff_low": cutoff_low,
        "cutoff_high": cutoff_high,
        "k0": k0,
        "k1": k1,
        "trig_kernel": trig_kernel,
        "diffusive": diffusive,
    }


# --- backend selection --------------------------------------------------------


def _select_backend() -> tuple[str, dict]:
    requested = os.environ.get(_BACKEND_ENV, "auto").lower()
    if requested not in ("auto", "numba", "numpy"):
        raise RuntimeError(
            f"{_BACKEND_ENV} must be 'auto', 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy", _NUMPY_IMPLS
    try:
        impls = _build_numba_impls()
        return "numba", impls
    except ImportError:
        if requested == "numba":
            raise RuntimeError("DWAVE_BACKEND=numba but numba is not importable")
        return "numpy", _NUMPY_IMPLS


_BACKEND_NAME, _IMPLS = _select_backend()

cutoff_low = _IMPLS["cutoff_low"]
cutoff_high = _IMPLS["cutoff_high"]
k0_kernel = _IMPLS["k0"]
k1_kernel = _IMPLS["k1"]
trig_kernel = _IMPLS["trig_kernel"]
diffusive_kernel = _IMPLS["diffusive"]


def backend_name() -> str:
    """Which implementation is active: 'numba' or 'numpy'."""
    return _BACKEND_NAME


def backend_impls(name: str) -> dict:
    """Fetch a specific implementation set ('numba' or 'numpy'), regardless
    of the active selection.  Used by the parity tests and the benchmark."""
    if name == "numpy":
        return _NUMPY_IMPLS
    if name == "numba":
        return _build_numba_impls()
    raise ValueError(f"unknown backend {name!r}")
