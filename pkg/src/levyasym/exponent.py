"""Radial Levy-Khintchine exponents and the regular-variation toolkit."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import interpolate, special

from .errors import (
    MissingIndexError,
    NonIntegrableError,
    NumericRangeError,
    ParamRangeError,
    UnreachableLevelError,
)
from .radial import (
    DEFAULT_QUAD,
    QuadratureConfig,
    bessel_integral,
    bessel_zeros,
    _first_zero,
    gl_pieces,
    kernel_k,
    log_quad,
    surface_measure,
)

# psi* grid
_STAR_POINTS = 256
_STAR_SPAN = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _as_array(r):
    return np.asarray(r, dtype=float)


class IsotropicExponent:
    """Radial exponent ``psi(|xi|)`` of an isotropic Levy process.

    Parameters
    ----------
    psi : callable
        Vectorized map ``r -> psi(r)`` for ``r >= 0``; it must already include
        the Gaussian part ``gaussian_coeff * r**2``.
    dim : int
    gaussian_coeff : float
    rv_index_zero, rv_index_inf : float, optional
        Declared indices of regular variation at the origin and at infinity.
    name : str
    unimodal : bool
        Whether the law is isotropic unimodal (enables the comparability
        checks).
    """

    __slots__ = ("_psi", "_dim", "_eta", "_rv0", "_rvinf", "_name", "_unimodal")

    def __init__(self, psi: Callable, dim: int, gaussian_coeff: float = 0.0,
                 rv_index_zero: Optional[float] = None, rv_index_inf: Optional[float] = None,
                 name: str = "psi", unimodal: bool = True):
        if int(dim) != dim or dim < 1:
            raise ParamRangeError("dim must be a positive integer")
        if not gaussian_coeff >= 0:
            raise ParamRangeError("gaussian_coeff must be non-negative")
        for idx in (rv_index_zero, rv_index_inf):
            if idx is not None and not 0.0 <= idx <= 2.0:
                raise ParamRangeError("declared regular variation index must lie in [0, 2]")
        object.__setattr__(self, "_psi", psi)
        object.__setattr__(self, "_dim", int(dim))
        object.__setattr__(self, "_eta", float(gaussian_coeff))
        object.__setattr__(self, "_rv0", rv_index_zero)
        object.__setattr__(self, "_rvinf", rv_index_inf)
        object.__setattr__(self, "_name", name)
        object.__setattr__(self, "_unimodal", bool(unimodal))

    def __setattr__(self, key, value):
        raise AttributeError("IsotropicExponent is immutable")

    dim = property(lambda self: self._dim)
    gaussian_coeff = property(lambda self: self._eta)
    rv_index_zero = property(lambda self: self._rv0)
    rv_index_inf = property(lambda self: self._rvinf)
    name = property(lambda self: self._name)
    unimodal = property(lambda self: self._unimodal)

    def psi(self, r):
        return self(r)

    def __call__(self, r):
        r = _as_array(r)
        out = np.asarray(self._psi(r), dtype=float)
        out = np.where(r == 0, 0.0, out)
        return out if out.ndim else float(out)

    def declared_index(self, at: str) -> Optional[float]:
        _check_at(at)
        return self._rv0 if at == "zero" else self._rvinf

    def __repr__(self):
        return (f"IsotropicExponent(name={self._name!r}, dim={self._dim}, "
                f"rv_index_zero={self._rv0}, rv_index_inf={self._rvinf})")


def _check_at(at):
    if at not in ("zero", "infinity"):
        raise ValueError("limit point must be 'zero' or 'infinity'")


# ---------------------------------------------------------------------------
# Levy densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevyDensityProfile:
    """Radial Levy density ``nu(r)`` given as a sum of smooth pieces.

    Each piece ``(lo, hi, fn)`` contributes ``fn(r)`` on ``lo <= r < hi``;
    ``fn`` must be smooth on a neighborhood of ``[lo, hi]`` so that jumps of
    ``nu`` can be integrated as differences of semi-infinite integrals.
    """

    dim: int
    pieces: tuple
    singular_index_hint: Optional[float] = None
    name: str = "nu"

    @classmethod
    def from_function(cls, dim, fn, singular_index_hint=None, name="nu"):
        return cls(dim, ((0.0, math.inf, fn),), singular_index_hint, name)

    def nu(self, r):
        r = _as_array(r)
        out = np.zeros_like(r)
        with np.errstate(all="ignore"):
            for lo, hi, fn in self.pieces:
                mask = (r >= lo) & (r < hi) & (r > 0)
                if np.any(mask):
                    out = out + np.where(mask, fn(np.where(mask, r, 1.0)), 0.0)
        return out if out.ndim else float(out)

    __call__ = nu

    def breakpoints(self) -> list:
        pts = set()
        for lo, hi, _ in self.pieces:
            for p in (lo, hi):
                if 0 < p < math.inf:
                    pts.add(float(p))
        return sorted(pts)

    def local_index(self, rho: float, at: str) -> float:
        """Exponent ``beta`` with ``nu(r) ~ r^{-d-beta}`` near ``rho``."""
        f = 10.0 if at == "infinity" else 0.1
        v0, v1 = self.nu(rho), self.nu(rho * f)
        if v0 <= 0 or v1 <= 0:
            return math.inf if at == "infinity" else -math.inf
        return -(math.log(v1 / v0) / math.log(f)) - self.dim

    def integrability(self, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
        """``int_0^inf min(1, r^2) nu(r) r^{d-1} dr``; raises if infinite."""
        d = self.dim
        lo_idx = self.local_index(1e-50, "zero")
        if lo_idx >= 2.0 - 1e-9:
            raise NonIntegrableError("Levy density too singular at the origin")
        hi_idx = self.local_index(1e80, "infinity")
        if hi_idx <= 1e-9:
            raise NonIntegrableError("Levy density decays too slowly at infinity")
        bps = self.breakpoints()
        near = log_quad(lambda r: self.nu(r) * r ** (d + 1), 1e-50, 1.0, per_decade=4,
                        breakpoints=bps)
        far = log_quad(lambda r: self.nu(r) * r ** (d - 1), 1.0, 1e80, per_decade=4,
                       breakpoints=bps)
        total = near + far
        if not math.isfinite(total):
            raise NonIntegrableError("Levy integrability integral is not finite")
        return total

    def is_monotone(self, r_grid: Optional[np.ndarray] = None, rel_slack: float = 1e-12) -> bool:
        if r_grid is None:
            r_grid = np.geomspace(1e-8, 1e8, 2001)
        v = self.nu(r_grid)
        return bool(np.all(np.diff(v) <= rel_slack * np.abs(v[:-1])))


def _near_remainder(fn, rho_m, d, r, sigma):
    # int_0^{rho_m} k(r rho) nu(rho) rho^{d-1} with k ~ sigma (r rho)^2 / (2d)
    v0, v1 = fn(np.array([rho_m, rho_m * 0.1]))
    if not (v0 > 0 and v1 > 0):
        return 0.0
    alpha_loc = math.log(v1 / v0) / math.log(10.0) - d
    if alpha_loc >= 2.0:
        raise NonIntegrableError("Levy density too singular at the origin")
    return sigma * r * r / (2 * d) * v0 * rho_m ** (d + 2) / (2.0 - alpha_loc)


def _far_remainder(fn, rho_m, d):
    # int_{rho_m}^inf nu(rho) rho^{d-1} for a power tail
    v0, v1 = fn(np.array([rho_m, rho_m * 10.0]))
    if not (v0 > 0 and v1 > 0):
        return 0.0
    beta = -math.log(v1 / v0) / math.log(10.0) - d
    if beta <= 0:
        raise NonIntegrableError("Levy density decays too slowly at infinity")
    return v0 * rho_m ** d / beta


def _finite_bessel(amp, a, order, lo, hi, quad):
    u_lo, u_hi = a * lo, a * hi
    z = bessel_zeros(order, u_lo, u_hi)
    parts = [np.array([u_lo, u_hi]), z]
    z1 = _first_zero(order)
    if u_lo < z1:
        parts.append(np.geomspace(max(u_lo, z1 * 1e-14), min(z1, u_hi), 64))
    edges = np.unique(np.concatenate(parts))
    edges = edges[(edges >= u_lo) & (edges <= u_hi)]
    val = gl_pieces(lambda u: amp(u / a) * special.jv(order, u), edges, quad.gl_nodes).sum()
    return float(val) / a


def exponent_from_levy_density(profile: LevyDensityProfile, r: float,
                               quad: QuadratureConfig = DEFAULT_QUAD,
                               gaussian_coeff: float = 0.0, check: bool = True) -> float:
    """``psi(r) = eta r^2 + int_0^inf k(r rho) nu(rho) rho^{d-1} d rho``.

    The integral is split at ``rho = 1/r``. Below the split the kernel is
    evaluated from its series down to ``r rho = 1e-30``, with the remaining
    sliver integrated against the quadratic asymptote of ``k``. Above it the
    constant part of ``k`` is integrated directly and the Bessel part by the
    oscillatory engine.
    """
    if check:
        profile.integrability(quad)
    if not r > 0:
        return 0.0
    d = profile.dim
    sigma = surface_measure(d)
    order = d / 2 - 1
    split = 1.0 / r
    total = 0.0
    for lo, hi, fn in profile.pieces:
        # small rho: k(r rho) is in its quadratic regime
        n_hi = min(hi, split)
        if n_hi > lo:
            rho_min = max(lo, split * 1e-30)
            if rho_min < n_hi:
                total += log_quad(lambda p: kernel_k(r * p, d) * fn(p) * p ** (d - 1),
                                  rho_min, n_hi, per_decade=4, n=quad.gl_nodes)
            if lo == 0.0:
                total += _near_remainder(fn, rho_min, d, r, sigma)
        # large rho: sigma * nu minus the Bessel part
        f_lo = max(lo, split)
        if hi <= f_lo:
            continue
        if math.isinf(hi):
            rho_big = f_lo * 1e20
            flat = log_quad(lambda p: fn(p) * p ** (d - 1), f_lo, rho_big, per_decade=4,
                            n=quad.gl_nodes)
            flat += _far_remainder(fn, rho_big, d)
        else:
            flat = log_quad(lambda p: fn(p) * p ** (d - 1), f_lo, hi, per_decade=4,
                            n=quad.gl_nodes)
        amp = lambda p, fn=fn: fn(p) * p ** (d / 2)
        if math.isinf(hi):
            osc = bessel_integral(amp, r, order, quad, lower=f_lo)
        elif (hi - f_lo) * r / math.pi <= quad.max_segments:
            osc = _finite_bessel(amp, r, order, f_lo, hi, quad)
        else:
            osc = (bessel_integral(amp, r, order, quad, lower=f_lo)
                   - bessel_integral(amp, r, order, quad, lower=hi))
        total += sigma * flat - (2 * math.pi) ** (d / 2) * r ** (-order) * osc
    return gaussian_coeff * r * r + max(total, 0.0)


class TabulatedExponent:
    """Memoized ``psi`` from a Levy density on a logarithmic grid.

    Built lazily under a lock on first use. Between nodes ``log psi`` is a
    cubic spline in ``log r``; outside the grid the end slopes are
    continued as power laws.
    """

    def __init__(self, profile: LevyDensityProfile, quad: QuadratureConfig = DEFAULT_QUAD,
                 gaussian_coeff: float = 0.0, r_min: float = 1e-8, r_max: float = 1e10):
        self.profile = profile
        self.quad = quad
        self.gaussian_coeff = gaussian_coeff
        self.r_min, self.r_max = r_min, r_max
        self._lock = threading.Lock()
        self._spline = None

    def _build(self):
        with self._lock:
            if self._spline is not None:
                return
            self.profile.integrability(self.quad)
            n = int(round(math.log10(self.r_max / self.r_min) * self.quad.grid_points_per_decade)) + 1
            grid = np.geomspace(self.r_min, self.r_max, n)
            vals = np.array([exponent_from_levy_density(self.profile, g, self.quad,
                                                        self.gaussian_coeff, check=False)
                             for g in grid])
            if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
                raise NumericRangeError("tabulated exponent is not positive on its grid")
            lx, ly = np.log(grid), np.log(vals)
            spline = interpolate.CubicSpline(lx, ly)
            self._nodes = (lx, ly)
            self._slopes = (float(spline(lx[0], 1)), float(spline(lx[-1], 1)))
            self._spline = spline

    @property
    def nodes(self):
        self._build()
        return np.exp(self._nodes[0]), np.exp(self._nodes[1])

    def __call__(self, r):
        if self._spline is None:
            self._build()
        r = _as_array(r)
        lx0, lx1 = self._nodes[0][0], self._nodes[0][-1]
        ly0, ly1 = self._nodes[1][0], self._nodes[1][-1]
        with np.errstate(divide="ignore"):
            lr = np.log(np.where(r > 0, r, 1.0))
        inner = np.clip(lr, lx0, lx1)
        ly = self._spline(inner)
        ly = np.where(lr < lx0, ly0 + self._slopes[0] * (lr - lx0), ly)
        ly = np.where(lr > lx1, ly1 + self._slopes[1] * (lr - lx1), ly)
        return np.where(r > 0, np.exp(ly), 0.0)


# ---------------------------------------------------------------------------
# psi*, psi^-
# ---------------------------------------------------------------------------

def _golden_max(f, a, b, iters=40):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return max(fc, fd)


def psi_star(exponent: IsotropicExponent, u) -> float:
    """Running supremum ``sup_{s in [0, u]} psi(s)``.

    Evaluated on a 256-point logarithmic grid over ``[u 1e-6, u]`` with
    golden-section refinement around the three largest grid values.
    """
    if np.ndim(u):
        return np.array([psi_star(exponent, v) for v in np.asarray(u, dtype=float).ravel()]
                        ).reshape(np.shape(u))
    u = float(u)
    if u < 0:
        raise ValueError("u must be non-negative")
    if u == 0.0:
        return 0.0
    grid = np.geomspace(u * _STAR_SPAN, u, _STAR_POINTS)
    vals = np.asarray(exponent(grid), dtype=float)
    best = float(vals.max())
    top = np.argsort(vals)[-3:]
    f = lambda s: float(exponent(s))
    for i in top:
        if 0 < i < len(grid) - 1 and vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
            best = max(best, _golden_max(f, grid[i - 1], grid[i + 1]))
    return max(best, float(vals[-1]))


def _is_nondecreasing(exponent, grid):
    v = np.asarray(exponent(grid), dtype=float)
    return bool(np.all(np.diff(v) >= -1e-14 * np.abs(v[1:])))


def psi_inverse(exponent: IsotropicExponent, u: float, max_expansions: int = 400,
                bisections: int = 80) -> float:
    """Generalized inverse ``min{r >= 0 : psi*(r) >= u}`` by bisection."""
    if not u > 0:
        raise ValueError("u must be positive")
    star = lambda r: psi_star(exponent, r)
    lo = hi = 1.0
    if star(1.0) >= u:
        for _ in range(max_expansions):
            lo = hi / 4
            if lo < 1e-300:
                break
            if star(lo) < u:
                break
            hi = lo
        else:
            raise UnreachableLevelError("bracket expansion towards zero failed")
    else:
        for _ in range(max_expansions):
            lo, hi = hi, hi * 4
            if not math.isfinite(hi) or hi > 1e300:
                raise UnreachableLevelError(f"psi* never reaches level {u}")
            level = star(hi)
            if not math.isfinite(level):
                raise UnreachableLevelError(f"psi* overflows before reaching level {u}")
            if level >= u:
                break
        else:
            raise UnreachableLevelError(f"psi* never reaches level {u}")
    for _ in range(bisections):
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * hi
        if star(mid) >= u:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    return hi


# ---------------------------------------------------------------------------
# regular variation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularVariationEstimate:
    index_hat: float
    window: tuple
    residual: float
    limit_point: str

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise ValueError("window must satisfy r_lo < r_hi")
        if not self.residual >= 0:
            raise ValueError("residual must be non-negative")


def rv_index_estimate(exponent: IsotropicExponent, at: str, decades: int = 3,
                      start: Optional[float] = None, points_per_decade: int = 32
                      ) -> RegularVariationEstimate:
    """Least-squares slope of ``log psi`` against ``log r``.

    The window spans ``decades`` decades ending at ``start`` (towards zero)
    or beginning at ``start`` (towards infinity); ``start`` defaults to
    ``1e-3`` and ``1e3`` respectively.
    """
    _check_at(at)
    if decades < 2:
        raise ValueError("decades must be >= 2")
    points_per_decade = max(int(points_per_decade), 32)
    if at == "zero":
        hi = 1e-3 if start is None else float(start)
        lo = hi * 10.0 ** (-decades)
    else:
        lo = 1e3 if start is None else float(start)
        hi = lo * 10.0 ** decades
    r = np.geomspace(lo, hi, decades * points_per_decade + 1)
    with np.errstate(all="ignore"):
        v = np.asarray(exponent(r), dtype=float)
    if not np.all(np.isfinite(v)) or np.any(v <= 1e-300) or np.any(v >= 1e300):
        raise NumericRangeError("psi under/overflows over the estimation window")
    x, y = np.log(r), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return RegularVariationEstimate(float(slope), (float(lo), float(hi)), resid, at)


def potter_check(exponent: IsotropicExponent, C: float, eps: float, at: str,
                 alpha: Optional[float] = None, decades: int = 12,
                 points_per_decade: int = 8) -> float:
    """Largest grid ``delta`` on which the Potter bound holds for ``psi(r) r^{-alpha}``.

    Pairs ``x, y <= delta`` (``>= 1/delta`` at infinity) are checked against
    ``l(x) <= C l(y) max(x/y, y/x)^eps``. Returns 1.0 if the whole scanned
    range (``decades`` decades beyond 1) passes and 0.0 if no window of at
    least one decade does.
    """
    _check_at(at)
    if not C > 1 or not eps > 0:
        raise ValueError("need C > 1 and eps > 0")
    if alpha is None:
        alpha = exponent.declared_index(at)
    if alpha is None:
        try:
            alpha = rv_index_estimate(exponent, at).index_hat
        except NumericRangeError as exc:
            raise MissingIndexError("no declared or estimable index") from exc
    n = decades * points_per_decade + 1
    # ordered from the limit point outwards to 1
    if at == "zero":
        r = np.geomspace(10.0 ** (-decades), 1.0, n)
    else:
        r = np.geomspace(10.0 ** decades, 1.0, n)
    with np.errstate(all="ignore"):
        ell = np.asarray(exponent(r), dtype=float) * r ** (-alpha)
    lr = np.log(r)
    # prefix k is valid iff point k is compatible with every earlier point, both ways
    best = -1
    for k in range(n):
        if not (np.isfinite(ell[k]) and ell[k] > 0):
            break
        spread = np.exp(eps * np.abs(lr[: k + 1] - lr[k]))
        head = ell[: k + 1]
        slack = C * spread * (1 + 1e-12)
        if np.all(ell[k] <= slack * head) and np.all(head <= slack * ell[k]):
            best = k
        else:
            break
    # a window narrower than one decade verifies nothing
    if best < points_per_decade:
        return 0.0
    edge = r[best]
    return float(edge if at == "zero" else 1.0 / edge)
