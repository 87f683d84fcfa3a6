"""Transition densities ``p(t, x)``, the origin value and ratio-limit diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import ProcessModel
from .errors import MissingIndexError, NotIntegrableError, OutOfScopeError
from .exponent import psi_inverse
from .radial import DEFAULT_QUAD, QuadratureConfig, hankel_inverse, log_quad

# below this value of |x| psi^-(1/t) the origin formula is returned
ORIGIN_CROSSOVER = 1e-8


@dataclass(frozen=True)
class DensityQuery:
    t: float
    x_norm: float
    model: ProcessModel

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")
        if not self.x_norm >= 0:
            raise ValueError("x_norm must be non-negative")


def _probe(model: ProcessModel, t: float):
    """``exp(-t psi(r)) r^{d-1} <= r^{-1.5}`` far out; raises otherwise."""
    if model.integrable_from and t <= model.integrable_from:
        raise NotIntegrableError(
            f"exp(-t psi) is not integrable for t={t} (requires t > {model.integrable_from})")
    d = model.dim
    r = np.geomspace(1e3, 1e40, 120)
    with np.errstate(all="ignore"):
        log_val = -t * np.asarray(model.psi(r), dtype=float) + (d - 1) * np.log(r)
    if not np.all(log_val[-40:] <= -1.5 * np.log(r[-40:])):
        raise NotIntegrableError(f"exp(-t psi) r^(d-1) decays too slowly at t={t}")


def _heat_fn(model, t):
    psi = model.psi
    return (lambda r: np.exp(-t * psi(r))), (lambda r: np.expm1(-t * psi(r)))


def density_at_origin(t: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``p(t, 0) = 2^{1-d} pi^{-d/2} / Gamma(d/2) int_0^inf exp(-t psi(r)) r^{d-1} dr``."""
    _probe(model, t)
    d = model.dim
    scale = psi_inverse(model.psi, 1.0 / t)
    integrand = lambda r: np.exp(-t * model.psi(r)) * r ** (d - 1)
    lo, hi = scale * 1e-16, scale * 1e40
    val = log_quad(integrand, lo, hi, per_decade=8, n=quad.gl_nodes)
    val += lo ** d / d
    return 2.0 ** (1 - d) / (math.pi ** (d / 2) * math.gamma(d / 2)) * val


def density_at(q: DensityQuery, quad: QuadratureConfig = DEFAULT_QUAD, *, method: str = "auto") -> float:
    """Transition density by inverse Hankel transform of ``exp(-t psi)``."""
    t, x, model = q.t, q.x_norm, q.model
    _probe(model, t)
    if x == 0.0:
        return density_at_origin(t, model, quad)
    if x * psi_inverse(model.psi, 1.0 / t) < ORIGIN_CROSSOVER:
        return density_at_origin(t, model, quad)
    heat, offset = _heat_fn(model, t)
    return hankel_inverse(heat, x, model.dim, quad, generalized=True, offset_fn=offset,
                          method=method)


def density(model: ProcessModel, t: float, x_norm: float,
            quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    return density_at(DensityQuery(t, x_norm, model), quad)


def karamata_constant(d: int, alpha: float) -> float:
    """``2^{1-d} Gamma(1 + d/alpha) / (d pi^{d/2} Gamma(d/2))``."""
    return 2.0 ** (1 - d) * math.gamma(1 + d / alpha) / (d * math.pi ** (d / 2) * math.gamma(d / 2))


def origin_karamata_ratio(t: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD,
                          at: str | None = None) -> float:
    """``p(t, 0) / psi^-(1/t)^d`` normalized by its Karamata limit.

    ``at="zero"`` uses the index of ``psi`` at the origin (the ``t -> inf``
    limit), ``at="infinity"`` the index at infinity (``t -> 0``); by default
    the side is chosen from ``t`` relative to 1.
    """
    if at is None:
        at = "zero" if t >= 1 else "infinity"
    alpha = model.psi.declared_index(at)
    if alpha is None:
        raise MissingIndexError(f"{model.name} declares no index at {at}")
    if alpha == 0:
        raise OutOfScopeError("the slowly varying case alpha = 0 has no Karamata constant here")
    d = model.dim
    scale = psi_inverse(model.psi, 1.0 / t)
    return density_at_origin(t, model, quad) / scale ** d / karamata_constant(d, alpha)


def srlt_ratio(q: DensityQuery, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``p(t, x) / p(t, 0)``."""
    if q.x_norm == 0:
        return 1.0
    return density_at(q, quad) / density_at_origin(q.t, q.model, quad)


def srlt_diagnostics(model: ProcessModel, t_values, x_values,
                     quad: QuadratureConfig = DEFAULT_QUAD) -> list[dict]:
    """Rows checking the ratio limit and its quantitative controls.

    Each row holds ``s = t psi(1/|x|)``, the ratio, the product
    ``h = |x| psi^-(1/t)``, the bound ``2 s^{-1/2}`` for ``h`` (valid for
    ``s >= 1``; Brownian motion attains ``h = s^{-1/2}``) and the empirical
    constant ``|1 - ratio| / h``.
    """
    rows = []
    for t in t_values:
        p0 = density_at_origin(t, model, quad)
        scale = psi_inverse(model.psi, 1.0 / t)
        for x in x_values:
            p = density_at(DensityQuery(t, x, model), quad)
            s = t * float(model.psi(1.0 / x))
            h = x * scale
            ratio = p / p0
            rows.append({
                "t": t, "x": x, "s": s, "ratio": ratio, "h": h,
                "h_bound": 2.0 / math.sqrt(s) if s > 0 else math.inf,
                "gap_constant": abs(1.0 - ratio) / h if h > 0 else 0.0,
            })
    return rows
