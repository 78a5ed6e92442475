"""Frequency-side L2 norms (radial quadrature for any dimension, FFT grids
for n = 1, 2), the initial-data library, and physical-space snapshots.

Conventions: the forward transform is unnormalized, u_hat(xi) =
integral e^(-i x.xi) u(x) dx, so Fourier-side and physical-side norms differ
by (2pi)^(n/2).  All norms reported here are Fourier-side radial integrals

    || m * data ||^2 = omega_{n-1} * int_0^R |m(r,t)|^2 |data(r)|^2 r^(n-1) dr

with omega_{n-1} = 2 pi^(n/2) / Gamma(n/2) the unit-sphere area.  Rate
studies only use slopes, which are convention independent.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special as sp

from .multipliers import Multiplier, comparison_multipliers, k0_hat, k1_hat


class AccuracyError(RuntimeError):
    """Raised when the quadrature tail estimate exceeds its tolerance."""

    def __init__(self, message: str, tail_estimate: float):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class ResolutionError(RuntimeError):
    """Raised when grid data carries too much energy near the Nyquist edge."""


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n (omega_{n-1})."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


# ---------------------------------------------------------------------------
# Data library
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    """Frequency-side radial data profile.

    ``evaluate`` maps r >= 0 to data_hat(r).  ``closed_heat_norm``, when
    present, returns ||e^(-t r^2) * data|| for the oracle tests.
    ``tail_mass`` bounds int_R^inf |data|^2 r^(n-1) dr analytically.
    ``physical`` is the exact inverse transform (available for gaussian),
    used by the grid demos.
    """

    label: str
    evaluate: Callable
    tail_mass: Callable
    closed_heat_norm: Optional[Callable] = None
    physical: Optional[Callable] = None


def _gaussian_profile(sigma: float) -> RadialProfile:
    s2 = sigma * sigma

    def evaluate(r):
        r = np.asarray(r, dtype=np.float64)
        return np.exp(-s2 * r * r)

    def closed_heat_norm(t: float, n: int) -> float:
        # omega int e^(-2(t+s2) r^2) r^(n-1) dr = pi^(n/2) (2(t+s2))^(-n/2)
        return (math.pi / (2.0 * (t + s2))) ** (n / 4.0)

    def tail_mass(R: float, n: int) -> float:
        # int_R^inf e^(-2 s2 r^2) r^(n-1) dr <= R^(n-1) e^(-2 s2 R^2) / (4 s2 R - ...)
        return R ** (n - 1) * math.exp(-2.0 * s2 * R * R) / (2.0 * s2 * R)

    def physical(x):
        x = np.asarray(x, dtype=np.float64)
        return np.exp(-x * x / (4.0 * s2)) / (2.0 * sigma * math.sqrt(math.pi))

    return RadialProfile(
        label=f"gaussian(sigma={sigma:g})",
        evaluate=evaluate,
        tail_mass=tail_mass,
        closed_heat_norm=closed_heat_norm,
        physical=physical,
    )


def _box_profile(radius: float) -> RadialProfile:
    def evaluate(r):
        r = np.asarray(r, dtype=np.float64)
        return (r <= radius).astype(np.float64)

    def closed_heat_norm(t: float, n: int) -> float:
        # omega int_0^radius e^(-2 t r^2) r^(n-1) dr via the lower incomplete gamma
        if t == 0:
            return math.sqrt(sphere_area(n) * radius**n / n)
        a = 2.0 * t
        val = sp.gammainc(n / 2.0, a * radius * radius) * math.gamma(n / 2.0)
        return math.sqrt(sphere_area(n) * val / (2.0 * a ** (n / 2.0)))

    def tail_mass(R: float, n: int) -> float:
        if R >= radius:
            return 0.0
        return (radius**n - R**n) / n

    return RadialProfile(
        label=f"box(radius={radius:g})",
        evaluate=evaluate,
        tail_mass=tail_mass,
        closed_heat_norm=closed_heat_norm,
    )


def _cauchy_profile() -> RadialProfile:
    def evaluate(r):
        r = np.asarray(r, dtype=np.float64)
        return 1.0 / (1.0 + r * r)

    def tail_mass(R: float, n: int) -> float:
        if n >= 4:
            raise AccuracyError("cauchy-like data is not square integrable for n >= 4", math.inf)
        # int_R^inf r^(n-1)/(1+r^2)^2 dr <= int_R^inf r^(n-5) dr
        return R ** (n - 4) / (4 - n)

    return RadialProfile(label="cauchy-like", evaluate=evaluate, tail_mass=tail_mass)


def _ring_profile(r0: float, width: float) -> RadialProfile:
    def evaluate(r):
        r = np.asarray(r, dtype=np.float64)
        x = (r - r0) / width
        out = np.zeros_like(r)
        inside = np.abs(x) < 1.0
        # smooth bump supported on [r0 - width, r0 + width]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
        return out

    def tail_mass(R: float, n: int) -> float:
        if R >= r0 + width:
            return 0.0
        return (r0 + width) ** max(n - 1, 0) * 2.0 * width

    return RadialProfile(
        label=f"ring(r0={r0:g}, width={width:g})", evaluate=evaluate, tail_mass=tail_mass
    )


def data_library(name: str, **params) -> RadialProfile:
    """Named frequency-side data profiles: gaussian(sigma), box(radius),
    cauchy, ring(r0, width)."""
    if name == "gaussian":
        return _gaussian_profile(float(params.get("sigma", 1.0)))
    if name == "box":
        return _box_profile(float(params.get("radius", 1.0)))
    if name in ("cauchy", "cauchy-like"):
        return _cauchy_profile()
    if name == "ring":
        return _ring_profile(float(params.get("r0", 1.0)), float(params.get("width", 0.1)))
    raise ValueError(f"unknown data profile {name!r}")


# ---------------------------------------------------------------------------
# Radial quadrature
# ---------------------------------------------------------------------------

# panel boundaries hugging the cutoff plateaus and the branch point, so every
# integrand in scope is smooth panel by panel
_BREAKPOINTS = (0.25, 1.0 / 3.0, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on [0, R] with fixed panel boundaries."""

    nodes: np.ndarray
    weights: np.ndarray
    edges: tuple[float, ...]
    cutoff_radius: float
    nodes_per_panel: int

    @classmethod
    def build(cls, R: float = 12.0, nodes_per_panel: int = 72) -> "QuadratureRule":
        if R <= _BREAKPOINTS[-1]:
            raise ValueError(f"cutoff radius must exceed {_BREAKPOINTS[-1]}, got {R}")
        edges = [0.0, *_BREAKPOINTS]
        step = 1.0
        e = edges[-1] + step
        while e < R - 1e-12:
            edges.append(e)
            e += step
        edges.append(R)
        x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
        nodes: list[np.ndarray] = []
        weights: list[np.ndarray] = []
        for a, b in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            nodes.append(mid + half * x)
            weights.append(half * w)
        return cls(
            nodes=np.concatenate(nodes),
            weights=np.concatenate(weights),
            edges=tuple(edges),
            cutoff_radius=R,
            nodes_per_panel=nodes_per_panel,
        )

    def refined(self) -> "QuadratureRule":
        return QuadratureRule.build(self.cutoff_radius, 2 * self.nodes_per_panel)


_DEFAULT_RULE: dict[tuple[float, int], QuadratureRule] = {}


def default_rule(R: float = 12.0, nodes_per_panel: int = 72) -> QuadratureRule:
    key = (R, nodes_per_panel)
    if key not in _DEFAULT_RULE:
        _DEFAULT_RULE[key] = QuadratureRule.build(R, nodes_per_panel)
    return _DEFAULT_RULE[key]


def l2_norm_radial(
    multiplier,
    data: RadialProfile,
    n: int,
    t: float,
    rule: Optional[QuadratureRule] = None,
    tail_tol: float = 1e-9,
) -> float:
    """|| m(., t) * data || over R^n, frequency side.

    ``multiplier`` is a Multiplier or any callable (r_array, t) -> array.
    The analytic tail of the data beyond the cutoff radius is required to
    contribute less than tail_tol to the squared norm (the multipliers in
    scope are bounded by max(1, value seen on the nodes))."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    rule = rule or default_rule()
    m = multiplier.evaluate if isinstance(multiplier, Multiplier) else multiplier
    values = np.asarray(m(rule.nodes, t), dtype=np.float64)
    dat = data.evaluate(rule.nodes)
    integrand = values * values * dat * dat * rule.nodes ** (n - 1)
    total = sphere_area(n) * float(np.dot(rule.weights, integrand))
    m_bound = max(1.0, float(np.max(np.abs(values))))
    tail = sphere_area(n) * m_bound**2 * data.tail_mass(rule.cutoff_radius, n)
    if tail > tail_tol * max(total, tail_tol):
        raise AccuracyError(
            f"tail beyond R={rule.cutoff_radius} estimated at {tail:.3e} "
            f"exceeds tolerance for {data.label}",
            tail,
        )
    return math.sqrt(max(total, 0.0))


def l2_norm_combined(
    terms: list[tuple[Callable, RadialProfile]],
    n: int,
    t: float,
    rule: Optional[QuadratureRule] = None,
    tail_tol: float = 1e-9,
) -> float:
    """|| sum_i m_i(., t) * data_i || for several multiplier/data pairs,
    evaluated as one radial integral (not a triangle-inequality bound)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    rule = rule or default_rule()
    combined = np.zeros_like(rule.nodes)
    tail = 0.0
    for multiplier, data in terms:
        m = multiplier.evaluate if isinstance(multiplier, Multiplier) else multiplier
        values = np.asarray(m(rule.nodes, t), dtype=np.float64)
        combined += values * data.evaluate(rule.nodes)
        m_bound = max(1.0, float(np.max(np.abs(values))))
        tail += len(terms) * sphere_area(n) * m_bound**2 * data.tail_mass(rule.cutoff_radius, n)
    total = sphere_area(n) * float(np.dot(rule.weights, combined**2 * rule.nodes ** (n - 1)))
    if tail > tail_tol * max(total, tail_tol):
        raise AccuracyError(
            f"tail beyond R={rule.cutoff_radius} estimated at {tail:.3e} exceeds tolerance",
            tail,
        )
    return math.sqrt(max(total, 0.0))


def moment_bound_check(k: int, n: int, t: float, nodes: int = 200) -> tuple[float, float]:
    """Norm of |x|^k e^(-t|x|^2) over the unit ball, with its ratio to
    (1+t)^(-n/4-k/2); the ratio must stay bounded in t."""
    if k < 0 or t < 0:
        raise ValueError("need k >= 0 and t >= 0")
    x, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w
    integrand = r ** (2 * k + n - 1) * np.exp(-2.0 * t * r * r)
    lhs = math.sqrt(sphere_area(n) * float(np.dot(wr, integrand)))
    rhs = (1.0 + t) ** (-n / 4.0 - k / 2.0)
    return lhs, lhs / rhs


# ---------------------------------------------------------------------------
# Grid evolution (n = 1 or 2)
# ---------------------------------------------------------------------------


@dataclass
class GridField:
    """Real samples on a uniform periodic grid over [-L/2, L/2)^n."""

    values: np.ndarray
    L: float
    n: int

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != self.n:
            raise ValueError(f"expected a {self.n}-d array, got {self.values.ndim}-d")
        N = self.values.shape[0]
        if any(s != N for s in self.values.shape):
            raise ValueError("grid must be square")
        if N & (N - 1):
            raise ValueError(f"grid size must be a power of two, got {N}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return self.L / self.N

    def axis(self) -> np.ndarray:
        return -self.L / 2.0 + self.dx * np.arange(self.N)

    def norm(self) -> float:
        """Physical-side L2 norm approximated by the midpoint rule."""
        return math.sqrt(float(np.sum(self.values**2)) * self.dx**self.n)

    def like(self, values: np.ndarray) -> "GridField":
        return GridField(values=values, L=self.L, n=self.n)


def grid_from_physical(profile: RadialProfile, n: int, L: float = 80.0, N: int = 4096) -> GridField:
    """Sample the physical-space form of a radial profile on a grid."""
    if profile.physical is None:
        raise ValueError(f"{profile.label} has no physical-space closed form")
    if n == 1:
        x = -L / 2.0 + (L / N) * np.arange(N)
        return GridField(values=profile.physical(np.abs(x)), L=L, n=1)
    if n == 2:
        x = -L / 2.0 + (L / N) * np.arange(N)
        xx, yy = np.meshgrid(x, x, indexing="ij")
        return GridField(values=profile.physical(np.hypot(xx, yy)), L=L, n=2)
    raise ValueError("grid evolution supports n = 1 or 2 only")


def _radial_freq(field: GridField) -> np.ndarray:
    xi = 2.0 * math.pi * np.fft.fftfreq(field.N, d=field.dx)
    if field.n == 1:
        return np.abs(xi)
    gx, gy = np.meshgrid(xi, xi, indexing="ij")
    return np.hypot(gx, gy)


def _alias_fraction(spectrum: np.ndarray, r: np.ndarray) -> float:
    total = float(np.sum(np.abs(spectrum) ** 2))
    if total == 0.0:
        return 0.0
    top = r >= 0.5 * float(np.max(r))
    return float(np.sum(np.abs(spectrum[top]) ** 2)) / total


def evolve_grid(
    u0: GridField,
    u1: GridField,
    t: float,
    b: int = 2,
    ell: int = 1,
    alias_tol: float = 1e-8,
) -> tuple[GridField, dict[str, GridField]]:
    """Propagate grid data to time t through the exact multipliers and
    return the named comparison fields on the same grid.

    Parts: 'wave_profile_part' (e^(-t/2) [W^1_b u0 + W^2_b (u0/2 + u1)]),
    'diffusive_part' (D^1_l u0 + D^2_l (u0/2 + u1)), and the classical
    fields 'w' (free wave from (u0, u1)), 'w_tilde' (free wave from
    (0, u0)), 'v' (heat flow from u0 + u1)."""
    from .multipliers import diffusive_profile_multiplier, wave_profile_multiplier

    if u0.n != u1.n or u0.N != u1.N or u0.L != u1.L:
        raise ValueError("u0 and u1 must share one grid")
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    r = _radial_freq(u0)
    f0 = np.fft.fftn(u0.values)
    f1 = np.fft.fftn(u1.values)
    worst = max(_alias_fraction(f0, r), _alias_fraction(f1, r))
    if worst > alias_tol:
        raise ResolutionError(
            f"top-octave energy fraction {worst:.3e} exceeds {alias_tol:.1e}; refine the grid"
        )

    shifted = 0.5 * f0 + f1
    k0 = k0_hat(r, t)
    k1 = k1_hat(r, t)
    u_hat = k0 * f0 + k1 * shifted

    emt2 = math.exp(-0.5 * t)
    w1 = wave_profile_multiplier(1, b)(r, t)
    w2 = wave_profile_multiplier(2, b)(r, t)
    d1 = diffusive_profile_multiplier(1, ell)(r, t)
    d2 = diffusive_profile_multiplier(2, ell)(r, t)
    comp = comparison_multipliers()
    cw0 = comp["w0_hat"](r, t)
    cw1 = comp["w1_hat"](r, t)
    heat = comp["heat_hat"](r, t)

    def back(spectrum: np.ndarray) -> GridField:
        return u0.like(np.real(np.fft.ifftn(spectrum)))

    u = back(u_hat)
    parts = {
        "wave_profile_part": back(emt2 * (w1 * f0 + w2 * shifted)),
        "diffusive_part": back(d1 * f0 + d2 * shifted),
        "w": back(cw0 * f0 + cw1 * f1),
        "w_tilde": back(cw1 * f0),
        "v": back(heat * (f0 + f1)),
    }
    return u, parts


def grid_fourier_norm(field: GridField) -> float:
    """Continuous Fourier-side L2 norm estimated from the DFT:
    ||u_hat|| ~ dx^n * sqrt((2pi/L)^n * sum |FFT|^2)."""
    spec = np.fft.fftn(field.values)
    return field.dx**field.n * math.sqrt(
        (2.0 * math.pi / field.L) ** field.n * float(np.sum(np.abs(spec) ** 2))
    )


# ---------------------------------------------------------------------------
# Snapshot export
# ---------------------------------------------------------------------------


def write_grid_csv(path, fields: dict[str, GridField]) -> None:
    """Columns: x then one column per named field (n = 1 grids only)."""
    items = list(fields.items())
    if not items:
        raise ValueError("nothing to write")
    first = items[0][1]
    if first.n != 1:
        raise ValueError("CSV snapshots are for n = 1 grids")
    x = first.axis()
    with open(path, "w", newline="") as fh:
        fh.write(",".join(["x", *[name for name, _f in items]]) + "\n")
        for i in range(first.N):
            row = [f"{x[i]:.17g}"] + [f"{f.values[i]:.17g}" for _name, f in items]
            fh.write(",".join(row) + "\n")


def write_grid_binary(path, field: GridField) -> None:
    """Header: n, N, L as little-endian 64-bit (two ints, one float);
    payload: row-major float64 samples."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<qqd", field.n, field.N, field.L))
        fh.write(field.values.astype("<f8").tobytes(order="C"))


def read_grid_binary(path) -> GridField:
    with open(path, "rb") as fh:
        n, N, L = struct.unpack("<qqd", fh.read(24))
        payload = np.frombuffer(fh.read(), dtype="<f8")
    return GridField(values=payload.reshape((N,) * n), L=L, n=n)
