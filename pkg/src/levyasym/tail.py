"""Tail probabilities ``P(|X_t| >= r)`` and the Gaussian Laplace functional."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import ProcessModel
from .density import DensityQuery, density_at
from .errors import IndexRangeError, MissingIndexError
from .radial import DEFAULT_QUAD, QuadratureConfig, ball_transform_integral, gl_pieces, log_quad, surface_measure

# the Gaussian weight exp(-r^2/4) is below 1e-21 past this radius
_GAUSS_CUT = 14.0


@dataclass(frozen=True)
class TailQuery:
    t: float
    r: float
    model: ProcessModel

    def __post_init__(self):
        if not (self.t > 0 and self.r > 0):
            raise ValueError("t and r must be positive")


def tail_prob_raw(q: TailQuery, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Unclamped ``P(|X_t| >= r)``.

    The complement of the ball mass is obtained from the Fourier transform
    of the ball indicator applied to ``1 - exp(-t psi)``, which keeps full
    relative accuracy when the tail is small.
    """
    t, model = q.t, q.model
    psi = model.psi
    amp = lambda rho: -np.expm1(-t * psi(rho))
    return ball_transform_integral(amp, q.r, model.dim, quad)


def tail_prob(q: TailQuery, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``P(|X_t| >= r)`` clamped to ``[0, 1]``."""
    return min(1.0, max(0.0, tail_prob_raw(q, quad)))


def tail(model: ProcessModel, t: float, r: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    return tail_prob(TailQuery(t, r, model), quad)


def laplace_functional(t: float, lam: float, model: ProcessModel,
                       quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``lambda L F_t(lambda) = E[1 - exp(-lambda |X_t|^2)]``.

    Evaluated as ``2^{1-d}/Gamma(d/2) int_0^inf (1 - exp(-t psi(r sqrt(lambda))))
    exp(-r^2/4) r^{d-1} dr`` truncated at ``r = 14``.
    """
    if not (t > 0 and lam > 0):
        raise ValueError("t and lambda must be positive")
    d = model.dim
    root = math.sqrt(lam)
    psi = model.psi
    f = lambda r: -np.expm1(-t * psi(r * root)) * np.exp(-0.25 * r * r) * r ** (d - 1)
    val = log_quad(f, 1e-30, 1.0, per_decade=3, n=quad.gl_nodes)
    val += float(gl_pieces(f, np.linspace(1.0, _GAUSS_CUT, 27), quad.gl_nodes).sum())
    return 2.0 ** (1 - d) / math.gamma(d / 2) * val


def laplace_functional_moment(t: float, lam: float, model: ProcessModel,
                              quad: QuadratureConfig = DEFAULT_QUAD, nodes: int = 16) -> float:
    """``E[1 - exp(-lambda |X_t|^2)]`` by integrating the density in polar coordinates.

    Independent of :func:`laplace_functional`; mass beyond the radius where
    ``exp(-lambda r^2)`` is negligible is taken from :func:`tail_prob_raw`.
    """
    d = model.dim
    cut = math.sqrt(40.0 / lam)
    p = lambda r: np.array([density_at(DensityQuery(t, float(v), model), quad)
                            for v in np.ravel(r)]).reshape(np.shape(r))
    f = lambda r: -np.expm1(-lam * r * r) * p(r) * r ** (d - 1)
    inner = cut * 1e-4
    val = log_quad(f, inner * 1e-6, inner, per_decade=1, n=nodes)
    edges = np.unique(np.concatenate([np.geomspace(inner, cut, 25), np.linspace(cut / 8, cut, 9)]))
    val += float(gl_pieces(f, edges, nodes).sum())
    return surface_measure(d) * val + tail_prob_raw(TailQuery(t, cut, model), quad)


def laplace_constant(d: int, alpha: float) -> float:
    """Limit ``2^alpha Gamma((d+alpha)/2) / Gamma(d/2)`` of the Gaussian-functional ratio."""
    return 2.0 ** alpha * math.gamma((d + alpha) / 2) / math.gamma(d / 2)


def laplace_ratio(t: float, lam: float, model: ProcessModel,
                  quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``lambda L F_t(lambda) / (t psi(sqrt(lambda)))``."""
    return laplace_functional(t, lam, model, quad) / (t * float(model.psi(math.sqrt(lam))))


def tail_ratio(t: float, r: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD,
               at: str | None = None) -> float:
    """``P(|X_t| >= 1/r) / (t psi(r))``.

    ``at`` names the limit point of ``r`` (default from ``r`` relative to 1);
    its declared index must lie in ``[0, 2)``.
    """
    if at is None:
        at = "zero" if r < 1 else "infinity"
    alpha = model.psi.declared_index(at)
    if alpha is None:
        raise MissingIndexError(f"{model.name} declares no index at {at}")
    if alpha >= 2:
        raise IndexRangeError("the tail limit excludes alpha = 2")
    return tail_prob_raw(TailQuery(t, 1.0 / r, model), quad) / (t * float(model.psi(r)))
