"""Asymptotic constants, limit extraction and comparison diagnostics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

KINDS = ("A", "C", "C_tilde", "A_tilde")


@dataclass(frozen=True)
class AsymConstant:
    kind: str
    dim: int
    index: float
    value: float

    def __float__(self):
        return self.value


def _check_domain(kind, d, alpha):
    if kind not in KINDS:
        raise DomainError(f"unknown constant kind {kind!r}")
    if int(d) != d or d < 1:
        raise DomainError("dimension must be a positive integer")
    ok = {
        "A": 0 < alpha < 2,
        "C": 0 <= alpha < 2,
        "C_tilde": 0 <= alpha <= 2 and d >= 3,
        "A_tilde": 0 < alpha <= 2 and d >= 3,
    }[kind]
    if not ok:
        raise DomainError(f"(d={d}, alpha={alpha}) is outside the domain of {kind}")


def _value(kind, d, a):
    g = math.gamma
    if kind == "A":
        return (a * 2.0 ** (a - 1) * math.pi ** (-d / 2 - 1) * math.sin(a * math.pi / 2)
                * g(a / 2) * g((a + d) / 2))
    if kind == "C":
        return 2.0 ** a * g((d + a) / 2) / (g(d / 2) * g(1 - a / 2))
    if kind == "C_tilde":
        return 2.0 ** (-a) * g((d - a) / 2) / (g(d / 2) * g(1 + a / 2))
    return 2.0 ** (-a) * math.pi ** (-d / 2) * g((d - a) / 2) / g(a / 2)


def constant(kind: str, d: int, alpha: float) -> AsymConstant:
    """Closed-form asymptotic constant.

    ``A``: density / Levy density constant; ``C``: tail constant;
    ``C_tilde``: potential ball constant; ``A_tilde``: Riesz kernel constant.
    """
    _check_domain(kind, d, alpha)
    return AsymConstant(kind, int(d), float(alpha), _value(kind, d, alpha))


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    """Outcome of :func:`constant_identities`; truthy iff every check passed."""

    dim: int
    alpha: float
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def __bool__(self):
        return self.passed


def constant_identities(d: int, alpha: float, quad=None, *, exact_tol: float = 1e-13,
                        kernel_tol: float = 1e-6, include_kernel: bool = True) -> IdentityReport:
    """Check ``A = alpha C Gamma(d/2) / (2 pi^{d/2})``, its tilde analogue and ``A * k_check(alpha) = 1``.

    Each check runs where its constants are defined: the plain pair and the
    kernel product for ``0 < alpha < 2``, the tilde pair for ``d >= 3`` and
    ``0 < alpha <= 2``.
    """
    from .radial import DEFAULT_QUAD, mellin_k

    quad = quad or DEFAULT_QUAD
    report = IdentityReport(d, alpha)
    factor = alpha * math.gamma(d / 2) / (2 * math.pi ** (d / 2))
    plain = 0 < alpha < 2
    pairs = [("A_vs_C", "A", "C")] if plain else []
    if d >= 3 and 0 < alpha <= 2:
        pairs.append(("A_tilde_vs_C_tilde", "A_tilde", "C_tilde"))
    if not pairs:
        raise DomainError(f"no identity is defined at (d={d}, alpha={alpha})")
    for label, lhs_kind, rhs_kind in pairs:
        lhs = constant(lhs_kind, d, alpha).value
        rhs = factor * constant(rhs_kind, d, alpha).value
        err = abs(lhs - rhs) / abs(lhs)
        report.checks[label] = {"lhs": lhs, "rhs": rhs, "rel_err": err, "ok": err <= exact_tol}
    if include_kernel and plain:
        prod = constant("A", d, alpha).value * mellin_k(alpha, d, quad)
        err = abs(prod - 1.0)
        report.checks["A_times_kernel_mellin"] = {"lhs": prod, "rhs": 1.0, "rel_err": err,
                                                  "ok": err <= kernel_tol}
    return report


# ---------------------------------------------------------------------------
# limit extraction
# ---------------------------------------------------------------------------

VERDICTS = ("CONVERGED", "INCONCLUSIVE", "DIVERGED")


@dataclass
class ConvergenceReport:
    """Measured ratios along a sequence of control levels and their extrapolated limit."""

    control: list
    ratios: list
    extrapolated: float
    error_estimate: float
    verdict: str
    target_constant: float | None = None
    worst: list = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        if len(self.control) != len(self.ratios) or len(self.control) < 3:
            raise ValueError("control and ratios must have equal length >= 3")
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def converged(self) -> bool:
        return self.verdict == "CONVERGED"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "target_constant": self.target_constant,
            "control": list(map(float, self.control)),
            "ratios": list(map(float, self.ratios)),
            "worst": list(map(float, self.worst)),
            "extrapolated": float(self.extrapolated),
            "error_estimate": float(self.error_estimate),
            "verdict": self.verdict,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _aitken(seq):
    if len(seq) < 3:
        return seq[-1]
    a, b, c = seq[-3:]
    d1, d2 = b - a, c - b
    if d1 == 0 or not math.isfinite(d1):
        return c
    rho = d2 / d1
    if not (abs(rho) < 0.95):
        return c
    return c + d2 * rho / (1 - rho)


def extrapolate(values: Sequence[float]) -> tuple[float, float]:
    """Aitken-Richardson limit of a geometric-rate sequence and an error estimate.

    The correction ratio between successive differences is estimated from
    the data (this is Richardson extrapolation in ``log s`` with the
    exponent fitted). The error is the change against the estimate from the
    preceding triple (or against the last value when only three are given).
    """
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise ValueError("need at least 3 values")
    lim = _aitken(vals)
    if len(vals) >= 4:
        prev = _aitken(vals[:-1])
        err = abs(lim - prev)
    else:
        err = abs(lim - vals[-1])
    return lim, err


def verdict_for(extrapolated: float, error: float, target: float | None, threshold: float,
                ratios: Sequence[float] = ()) -> str:
    if not (math.isfinite(extrapolated) and math.isfinite(error)):
        return "DIVERGED"
    scale = abs(target) if target else max(abs(extrapolated), 1e-300)
    if target is None:
        return "CONVERGED" if error < threshold * scale else "INCONCLUSIVE"
    mismatch = abs(extrapolated - target)
    if error < threshold * scale and mismatch < threshold * scale:
        return "CONVERGED"
    gaps = [abs(r - target) for r in ratios]
    if len(gaps) >= 3 and all(g2 > g1 for g1, g2 in zip(gaps, gaps[1:])) and mismatch >= threshold * scale:
        return "DIVERGED"
    return "INCONCLUSIVE"


def limit_probe(ratio_fn: Callable[[float, float], float], path: str, model, levels: Sequence[float],
                r_grid: Sequence[float], target: float | None = None, threshold: float = 0.05,
                time_of=None, label: str = "") -> ConvergenceReport:
    """Drive ``ratio_fn(t, r)`` along ``t = s / psi(1/r)`` for each level ``s`` and an ``r`` grid.

    Parameters
    ----------
    path : {"t_psi_to_zero", "t_psi_to_inf"}
        Direction of the levels.
    r_grid : sequence of float
        Radii approaching the limit point.
    time_of : callable, optional
        ``(s, r) -> t``; defaults to ``s / psi(1/r)``.

    The mean over ``r`` at each level is extrapolated; the worst deviation
    from that mean is reported alongside.
    """
    from .errors import RatioFailureError

    levels = [float(s) for s in levels]
    if len(levels) < 3:
        raise ValueError("need at least 3 levels")
    diffs = np.diff(levels)
    if path == "t_psi_to_zero":
        if not np.all(diffs < 0):
            raise ValueError("levels must decrease strictly for t_psi_to_zero")
    elif path == "t_psi_to_inf":
        if not np.all(diffs > 0):
            raise ValueError("levels must increase strictly for t_psi_to_inf")
    else:
        raise ValueError(f"unknown path {path!r}")
    if time_of is None:
        psi = model.psi
        time_of = lambda s, r: s / float(psi(1.0 / r))
    means, worst = [], []
    for s in levels:
        vals = []
        for r in r_grid:
            try:
                v = float(ratio_fn(time_of(s, r), float(r)))
            except ArithmeticError as exc:
                raise RatioFailureError(f"ratio evaluation failed at s={s}, r={r}: {exc}") from exc
            if not math.isfinite(v):
                raise RatioFailureError(f"non-finite ratio at s={s}, r={r}")
            vals.append(v)
        mean = float(np.mean(vals))
        means.append(mean)
        worst.append(float(np.max(np.abs(np.asarray(vals) - (target if target is not None else mean)))))
    lim, err = extrapolate(means)
    verdict = verdict_for(lim, err, target, threshold, means)
    return ConvergenceReport(levels, means, lim, err, verdict, target, worst, label)


def sequence_report(control: Sequence[float], values: Sequence[float], target: float | None = None,
                    threshold: float = 0.05, label: str = "") -> ConvergenceReport:
    """Convergence report for an already measured sequence."""
    lim, err = extrapolate(values)
    verdict = verdict_for(lim, err, target, threshold, values)
    worst = [abs(v - target) for v in values] if target is not None else []
    return ConvergenceReport(list(control), list(values), lim, err, verdict, target, worst, label)


# ---------------------------------------------------------------------------
# Levy density asymptotics and two-sided bounds
# ---------------------------------------------------------------------------

def levy_ratio(x_norm: float, model, quad=None) -> float:
    """``nu(|x|) / (|x|^{-d} psi(1/|x|))``."""
    from .errors import NoLevyDensityError

    if model.levy_density is None:
        raise NoLevyDensityError(f"{model.name} has no Levy density profile")
    d = model.dim
    return float(model.levy_density(x_norm)) / (x_norm ** (-d) * float(model.psi(1.0 / x_norm)))


def small_time_ratio(t: float, x_norm: float, model, quad=None) -> float:
    """``p(t, x) / (t nu(x))``; tends to 1 as ``t -> 0`` at fixed ``x``."""
    from .density import DensityQuery, density_at
    from .errors import NoLevyDensityError
    from .radial import DEFAULT_QUAD

    if model.levy_density is None:
        raise NoLevyDensityError(f"{model.name} has no Levy density profile")
    p = density_at(DensityQuery(t, x_norm, model), quad or DEFAULT_QUAD)
    return p / (t * float(model.levy_density(x_norm)))


def density_asym_ratio(t: float, x_norm: float, model, quad=None) -> float:
    """``p(t, x) / (t |x|^{-d} psi(1/|x|))``."""
    from .density import DensityQuery, density_at
    from .radial import DEFAULT_QUAD

    d = model.dim
    p = density_at(DensityQuery(t, x_norm, model), quad or DEFAULT_QUAD)
    return p / (t * x_norm ** (-d) * float(model.psi(1.0 / x_norm)))


def bgr_check(model, t_range: Sequence[float], r_range: Sequence[float], quad=None) -> tuple[float, float]:
    """Empirical ``(inf, sup)`` of ``p(t,x) / min(p(t,0), t |x|^{-d} psi(1/|x|))`` over a grid."""
    from .density import DensityQuery, density_at, density_at_origin
    from .radial import DEFAULT_QUAD

    quad = quad or DEFAULT_QUAD
    if len(t_range) == 0 or len(r_range) == 0:
        raise ValueError("ranges must be non-empty")
    d = model.dim
    ratios = []
    for t in t_range:
        p0 = density_at_origin(t, model, quad)
        for r in r_range:
            p = density_at(DensityQuery(t, r, model), quad)
            bound = min(p0, t * r ** (-d) * float(model.psi(1.0 / r)))
            ratios.append(p / bound)
    return float(min(ratios)), float(max(ratios))


def index_recovery_from_levy(model, at: str = "zero", quad=None, decades: int = 3,
                             start: float | None = None):
    """Regular-variation index of ``psi`` recomputed from the Levy density.

    ``psi`` is evaluated by direct kernel integrals (no table) and passed to
    :func:`rv_index_estimate`.
    """
    from .errors import NoLevyDensityError
    from .exponent import IsotropicExponent, exponent_from_levy_density, rv_index_estimate
    from .radial import DEFAULT_QUAD

    quad = quad or DEFAULT_QUAD
    profile = model.levy_density
    if profile is None:
        raise NoLevyDensityError(f"{model.name} has no Levy density profile")
    profile.integrability(quad)
    eta = model.psi.gaussian_coeff

    def psi(r):
        r = np.asarray(r, dtype=float)
        vals = [exponent_from_levy_density(profile, float(v), quad, eta, check=False)
                for v in r.ravel()]
        return np.asarray(vals).reshape(r.shape)

    direct = IsotropicExponent(psi, model.dim, eta, name=model.name + "[from nu]")
    return rv_index_estimate(direct, at, decades=decades, start=start)
