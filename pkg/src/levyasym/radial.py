"""Radial harmonic analysis in dimension d.

The spherical kernel ``k``, surface measures, Mellin transforms and the
oscillatory Bessel quadrature behind every Fourier inversion in the package.

Oscillatory integrals ``int_L^inf g(r) J_nu(a r) dr`` are evaluated piecewise
between consecutive zeros of ``J_nu`` with Gauss-Legendre rules. If the
amplitude ``g`` decays inside the segment budget the pieces are summed
directly. Otherwise the integral is taken in the Abel sense: the amplitude is
multiplied by a smooth erfc cutoff in the frequency variable. For amplitudes
that behave like classical symbols at large ``r`` (every exponent in the
catalog) the cutoff error decays like ``exp(-c * window)``, so a window of
about a thousand radians is enough to reach double precision.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .errors import (
    DivergentError,
    NoConvergenceError,
    SlowDecayError,
    StripViolationError,
)

RadialFn = Callable[[np.ndarray], np.ndarray]

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets shared by all integral evaluators.

    ``window_length`` is the length, in radians of the oscillation, of the
    smooth cutoff used for slowly decaying oscillatory integrals.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_segments: int = 4000
    oscillatory_accel_terms: int = 12
    grid_points_per_decade: int = 32
    gl_nodes: int = 20
    window_length: float = 1500.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_segments", "oscillatory_accel_terms",
                     "grid_points_per_decade", "gl_nodes", "window_length"):
            if not getattr(self, name) > 0:
                raise ValueError(f"QuadratureConfig.{name} must be positive")
        if not self.rel_tol < 1:
            raise ValueError("QuadratureConfig.rel_tol must be < 1")

    def with_overrides(self, **kwargs) -> "QuadratureConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    @classmethod
    def from_profile(cls, name: str) -> "QuadratureConfig":
        try:
            return _PROFILES[name]
        except KeyError:
            raise ValueError(f"unknown quadrature profile {name!r}; "
                             f"expected one of {sorted(_PROFILES)}") from None

    @classmethod
    def from_env(cls) -> "QuadratureConfig":
        """Profile named by ``LEVYASYM_QUAD_PROFILE`` (default ``"default"``)."""
        return cls.from_profile(os.environ.get("LEVYASYM_QUAD_PROFILE", "default"))


_PROFILES = {
    "default": QuadratureConfig(),
    "fast": QuadratureConfig(rel_tol=1e-7, max_segments=1500, gl_nodes=16,
                             window_length=800.0, grid_points_per_decade=16),
    "accurate": QuadratureConfig(rel_tol=1e-11, max_segments=12000, gl_nodes=28,
                                 window_length=2500.0, grid_points_per_decade=48),
}

DEFAULT_QUAD = QuadratureConfig()


# ---------------------------------------------------------------------------
# sphere and kernel
# ---------------------------------------------------------------------------

def surface_measure(d: int) -> float:
    """Surface area ``2 pi^{d/2} / Gamma(d/2)`` of the unit sphere in R^d."""
    if d < 1 or int(d) != d:
        raise ValueError("dimension must be a positive integer")
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


_K_SWITCH = 1.0
_K_TERMS = 18


def kernel_k(r, d: int):
    """Spherical kernel ``k(r) = int_{S^{d-1}} (1 - cos(r <u0, u>)) sigma(du)``.

    Closed form ``sigma - (2 pi)^{d/2} r^{1-d/2} J_{d/2-1}(r)``; below
    ``r = 1`` the even power series is used instead to avoid cancellation.
    The values satisfy ``0 <= k(r) <= sigma min(2, r^2 / (2d))``.
    """
    r = np.asarray(r, dtype=float)
    sigma = surface_measure(d)
    out = np.empty_like(r)
    small = r < _K_SWITCH
    if np.any(small):
        out[small] = sigma * _kernel_series(r[small], d)
    big = ~small
    if np.any(big):
        rb = r[big]
        nu = d / 2 - 1
        out[big] = sigma - (2 * math.pi) ** (d / 2) * rb ** (-nu) * special.jv(nu, rb)
    return out if out.ndim else float(out)


def _kernel_series(r: np.ndarray, d: int) -> np.ndarray:
    # k / sigma = sum_{j>=1} (-1)^{j+1} (r^2/4)^j Gamma(d/2) / (j! Gamma(j + d/2))
    z = 0.25 * r * r
    term = np.ones_like(r)
    total = np.zeros_like(r)
    for j in range(1, _K_TERMS + 1):
        term = term * (-z) / (j * (j - 1 + d / 2))
        total -= term
    return total


# ---------------------------------------------------------------------------
# plain quadrature helpers
# ---------------------------------------------------------------------------

def gl_pieces(fn: RadialFn, edges: np.ndarray, n: int) -> np.ndarray:
    """Gauss-Legendre integrals of ``fn`` over consecutive ``edges``."""
    x, w = _gauss_legendre(n)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(fn(nodes), dtype=float)
    return (vals * w[None, :]).sum(axis=1) * half


def log_quad(fn: RadialFn, lo: float, hi: float, per_decade: int = 6, n: int = 20,
             breakpoints: Sequence[float] = ()) -> float:
    """Integrate a smooth-in-``log r`` function over ``[lo, hi]`` with ``0 < lo``.

    Geometric pieces make algebraic behavior at either end harmless.
    """
    if hi <= lo:
        return 0.0
    decades = max(math.log10(hi / lo), 1e-12)
    npts = max(int(math.ceil(decades * per_decade)), 1) + 1
    edges = np.geomspace(lo, hi, npts)
    if breakpoints:
        inner = [b for b in breakpoints if lo < b < hi]
        if inner:
            edges = np.unique(np.concatenate([edges, inner]))
    return float(gl_pieces(fn, edges, n).sum())


# ---------------------------------------------------------------------------
# Bessel zeros and sequence acceleration
# ---------------------------------------------------------------------------

def bessel_zeros(order: float, u_lo: float, u_hi: float) -> np.ndarray:
    """Positive zeros of ``J_order`` inside ``(u_lo, u_hi)``.

    McMahon's expansion refined by Newton steps; falls back to the raw
    expansion if refinement loses ordering (the zeros only serve as a
    partition, so ordering matters more than the last digit).
    """
    if u_hi <= u_lo:
        return np.empty(0)
    shift = order / 2 - 0.25
    k_lo = max(1, int(math.floor(u_lo / math.pi - shift)) - 1)
    k_hi = int(math.ceil(u_hi / math.pi - shift)) + 2
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    beta = (k + shift) * math.pi
    mu = 4.0 * order * order
    guess = beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)
    z = guess.copy()
    for _ in range(8):
        step = special.jv(order, z) / special.jvp(order, z)
        z = z - np.where(np.isfinite(step), step, 0.0)
    if not (np.all(np.isfinite(z)) and np.all(np.diff(z) > 0) and z[0] > 0):
        z = guess
    return z[(z > u_lo) & (z < u_hi)]


def _first_zero(order: float) -> float:
    return float(bessel_zeros(order, 0.0, 4 * math.pi + 4 * abs(order))[0])


def wynn_epsilon(seq: Sequence[float]) -> float:
    """Wynn's epsilon (iterated Shanks) limit estimate of a sequence."""
    s = [float(v) for v in seq]
    n = len(s)
    if n < 3:
        return s[-1]
    prev = [0.0] * (n + 1)
    cur = s[:]
    best = s[-1]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0 or not math.isfinite(diff):
                nxt.append(math.inf)
            else:
                nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur and math.isfinite(cur[-1]):
            best = cur[-1]
        if len(cur) < 2:
            break
    return best


# ---------------------------------------------------------------------------
# oscillatory Bessel integrals
# ---------------------------------------------------------------------------

_DECAY_TINY = 1e-17


def _decay_point(amp: RadialFn, a: float, u_start: float, u_budget: float) -> float | None:
    """Frequency beyond which ``|amp J|`` is negligible, or None if beyond budget."""
    us = np.geomspace(u_start, u_budget * 1e4, 320)
    with np.errstate(all="ignore"):
        env = np.abs(np.asarray(amp(us / a), dtype=float)) * np.sqrt(us)
    env = np.where(np.isfinite(env), env, np.inf)
    peak = env.max()
    if peak == 0.0:
        return u_start
    if not np.isfinite(peak):
        return None
    big = np.nonzero(env > _DECAY_TINY * peak)[0]
    idx = big[-1] + 1
    if idx >= len(us):
        return None
    u_star = us[idx]
    return u_star if u_star <= u_budget else None


def bessel_integral(amp: RadialFn, a: float, order: float,
                    quad: QuadratureConfig = DEFAULT_QUAD, *,
                    lower: float = 0.0,
                    offset_amp: RadialFn | None = None,
                    breakpoints: Sequence[float] = (),
                    method: str = "auto") -> float:
    """``int_lower^inf amp(r) J_order(a r) dr``.

    Parameters
    ----------
    amp : callable
        Vectorized amplitude, including any power of ``r``.
    a : float
        Positive oscillation frequency.
    offset_amp : callable, optional
        ``amp`` minus a term whose generalized transform vanishes for the
        caller (typically ``amp - c r^{order+1}``, the transform of a
        constant). Used only when the integral has to be taken in the Abel
        sense, where it removes a large cancelling component.
    breakpoints : sequence of float
        Radii where ``amp`` is not smooth.
    method : {"auto", "direct", "window", "shanks"}
        ``"shanks"`` sums half-periods and accelerates the partial sums with
        Wynn's epsilon algorithm; useful as an independent check for
        decaying amplitudes.
    """
    if not a > 0:
        raise ValueError("frequency must be positive")
    u_lo = a * lower
    z_first = _first_zero(order)
    u_budget = math.pi * quad.max_segments + u_lo

    def amp_u(u):
        return amp(u / a)

    if method == "auto":
        u_start = max(u_lo, 1e-3 * z_first)
        u_star = _decay_point(amp, a, u_start, u_budget)
        method = "direct" if u_star is not None else "window"
    else:
        u_star = None
    if method == "shanks":
        return _shanks_integral(amp_u, order, u_lo, z_first, quad, breakpoints, a) / a

    if method == "direct":
        if u_star is None:
            u_star = _decay_point(amp, a, max(u_lo, 1e-3 * z_first), u_budget)
            if u_star is None:
                u_star = u_budget
        u_end = max(u_star, u_lo + math.pi)
        fn = amp_u
        window = None
    elif method == "window":
        fn = (lambda u: offset_amp(u / a)) if offset_amp is not None else amp_u
        width = quad.window_length
        center = u_lo + 0.5 * width
        sigma = width / 16.0
        u_end = u_lo + width
        window = (center, sigma)
    else:
        raise ValueError(f"unknown method {method!r}")

    edges = _edges(order, u_lo, u_end, z_first, [a * b for b in breakpoints])
    if window is None:
        integrand = lambda u: fn(u) * special.jv(order, u)
    else:
        c, s = window
        integrand = lambda u: fn(u) * special.jv(order, u) * (0.5 * special.erfc((u - c) / s))
    with np.errstate(under="ignore"):
        pieces = gl_pieces(integrand, edges, quad.gl_nodes)
    total = float(pieces.sum())
    if not math.isfinite(total):
        raise NoConvergenceError("non-finite oscillatory integral")
    return total / a


def _edges(order, u_lo, u_end, z_first, extra):
    parts = [np.array([u_lo, u_end])]
    parts.append(bessel_zeros(order, u_lo, u_end))
    if u_lo < z_first:
        start = u_lo if u_lo > 0 else z_first * 1e-14
        parts.append(np.geomspace(start, z_first, 64))
    else:
        parts.append(np.geomspace(u_lo, u_lo + z_first, 8))
    inner = [e for e in extra if u_lo < e < u_end]
    if inner:
        parts.append(np.asarray(inner, dtype=float))
    # log grid so that amplitude features narrower than a half period are resolved
    lo = max(u_lo, z_first * 1e-14)
    if u_end > 10 * lo:
        parts.append(np.geomspace(lo, u_end, int(8 * math.log10(u_end / lo)) + 2))
    edges = np.unique(np.concatenate(parts))
    return edges[(edges >= u_lo) & (edges <= u_end)]


def _shanks_integral(amp_u, order, u_lo, z_first, quad, breakpoints, a):
    nterms = quad.oscillatory_accel_terms
    zeros = bessel_zeros(order, u_lo, u_lo + math.pi * (quad.max_segments + 4))
    # start accelerating once the Bessel asymptotics have settled in
    start = int(np.searchsorted(zeros, max(u_lo, 0) + 60.0))
    stop = start + 2 * nterms + 1
    if stop >= len(zeros):
        raise NoConvergenceError("segment budget too small for acceleration")
    u_head = zeros[start]
    edges = _edges(order, u_lo, u_head, z_first, [a * b for b in breakpoints])
    integrand = lambda u: amp_u(u) * special.jv(order, u)
    head = float(gl_pieces(integrand, edges, quad.gl_nodes).sum())
    seg = gl_pieces(integrand, zeros[start:stop + 1], quad.gl_nodes)
    partial = head + np.cumsum(seg)
    return wynn_epsilon(partial)


def _integrability_probe(radial_fn: RadialFn, d: int) -> bool:
    r = np.geomspace(1e2, 1e30, 200)
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(radial_fn(r), dtype=float))
        logv = np.log(v) + (d - 1) * np.log(r)
    ok = (logv <= -1.5 * np.log(r)) | (v == 0)
    tail = ok[-60:]
    return bool(np.all(tail))


def hankel_inverse(radial_fn: RadialFn, x_norm: float, d: int,
                   quad: QuadratureConfig = DEFAULT_QUAD, *,
                   generalized: bool = False,
                   offset_fn: RadialFn | None = None,
                   method: str = "auto") -> float:
    """Inverse Fourier transform of a radial function, evaluated at ``|x|``.

    ``(2 pi)^{-d/2} |x|^{1-d/2} int_0^inf f(r) J_{d/2-1}(r |x|) r^{d/2} dr``.

    With ``generalized=True`` the integrability probe is skipped and the
    integral is understood in the Abel sense (e.g. ``f = 1/psi``).
    ``offset_fn`` is ``f`` minus a constant, computed accurately; the
    transform of a constant vanishes at ``x != 0``.
    """
    if not x_norm > 0:
        raise ValueError("x_norm must be positive")
    if not generalized and not _integrability_probe(radial_fn, d):
        raise SlowDecayError("radial function is not integrable against r^{d-1}")
    nu = d / 2 - 1
    amp = lambda r: radial_fn(r) * r ** (d / 2)
    off = None
    if offset_fn is not None:
        off = lambda r: offset_fn(r) * r ** (d / 2)
    val = bessel_integral(amp, x_norm, nu, quad, offset_amp=off, method=method)
    return (2 * math.pi) ** (-d / 2) * x_norm ** (1 - d / 2) * val


def ball_transform_integral(radial_fn: RadialFn, radius: float, d: int,
                            quad: QuadratureConfig = DEFAULT_QUAD, *,
                            offset_fn: RadialFn | None = None) -> float:
    """``(2 pi)^{-d} int_{R^d} f(|xi|) hat{1}_{B_radius}(xi) d xi``.

    For ``f`` the characteristic function of a law (or of a measure) this is
    the mass of the centered ball; ``hat{1}_B(xi) = (2 pi R / |xi|)^{d/2}
    J_{d/2}(R |xi|)``.
    """
    c_d = surface_measure(d)
    amp = lambda r: radial_fn(r) * r ** (d / 2 - 1)
    off = None
    if offset_fn is not None:
        off = lambda r: offset_fn(r) * r ** (d / 2 - 1)
    val = bessel_integral(amp, radius, d / 2, quad, offset_amp=off)
    return (2 * math.pi) ** (-d / 2) * c_d * radius ** (d / 2) * val


# ---------------------------------------------------------------------------
# Mellin machinery
# ---------------------------------------------------------------------------

def mellin_k(z_real: float, d: int, quad: QuadratureConfig = DEFAULT_QUAD, *,
             divergence_threshold: float = 1e8) -> float:
    """Mellin transform ``int_0^inf t^{-z-1} k(t) dt`` on the real axis of the strip."""
    if not 0.0 < z_real < 2.0:
        raise StripViolationError(f"z={z_real} lies outside the strip (0, 2)")
    sigma = surface_measure(d)
    near = log_quad(lambda t: t ** (-z_real - 1.0) * kernel_k(t, d), 1e-300 ** 0.25, 1.0,
                    per_decade=2, n=24)
    # below 1e-75 the integrand is sigma t^{1-z}/(2d) exactly to double precision
    near += sigma / (2 * d) * (1e-300 ** 0.25) ** (2 - z_real) / (2 - z_real)
    nu = d / 2 - 1
    osc = bessel_integral(lambda t: t ** (-z_real - d / 2), 1.0, nu, quad, lower=1.0)
    value = near + sigma / z_real - (2 * math.pi) ** (d / 2) * osc
    if not math.isfinite(value) or value > divergence_threshold:
        raise DivergentError(f"Mellin transform of k diverges at z={z_real}")
    return value


def mellin_convolution(f: Callable[[float], float], g: Callable[[float], float], x: float,
                       quad: QuadratureConfig = DEFAULT_QUAD, *,
                       log_range: tuple[float, float] = (-60.0, 60.0)) -> float:
    """``int_0^inf f(x/t) g(t) dt / t`` by quadrature in ``log t``."""
    if not x > 0:
        raise ValueError("x must be positive")

    def h(s):
        t = math.exp(s)
        return f(x / t) * g(t)

    lo, hi = log_range
    scale = max(abs(h(0.0)), abs(h(math.log(x))), 1e-300)
    for end in (lo, hi):
        if abs(h(end)) > 1e-8 * scale:
            raise NoConvergenceError("Mellin convolution integrand does not decay")
    edges = np.linspace(lo, hi, int(hi - lo) * 2 + 1)
    total = 0.0
    with warnings.catch_warnings():
        # segments crossing fast oscillation of f or g carry tiny weight
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for s0, s1 in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(h, s0, s1, epsabs=quad.abs_tol * 1e-3,
                                    epsrel=quad.rel_tol, limit=200)
            total += val
    return total
