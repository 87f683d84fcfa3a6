"""Green function and potential ball masses of transient processes (d >= 3)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asym import constant
from .catalog import ProcessModel
from .errors import MissingIndexError, TransienceError
from .radial import DEFAULT_QUAD, QuadratureConfig, ball_transform_integral, gl_pieces, hankel_inverse, log_quad


@dataclass(frozen=True)
class PotentialQuery:
    radius: float
    model: ProcessModel

    def __post_init__(self):
        if self.model.dim < 3:
            raise TransienceError(
                f"potential density requires d >= 3 (got d={self.model.dim}); "
                "isotropic processes in d <= 2 with alpha-regular psi may be recurrent")
        if not self.radius > 0:
            raise ValueError("radius must be positive")


def _transience_probe(model: ProcessModel):
    d = model.dim
    if d < 3:
        raise TransienceError(f"potential theory here requires d >= 3, got d={d}")
    r = np.array([1e-40, 1e-36])
    with np.errstate(all="ignore"):
        v = np.asarray(model.psi(r), dtype=float)
    if not np.all(v > 0):
        raise TransienceError("psi vanishes near the origin")
    slope = math.log(v[1] / v[0]) / math.log(r[1] / r[0])
    if slope >= d - 1e-9:
        raise TransienceError("1/psi is not locally integrable against r^{d-1}")


def _inverse_psi(model):
    psi = model.psi
    return lambda r: 1.0 / psi(r)


def green_density(x_norm: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """``G(x)``: inverse Hankel transform of ``1/psi`` (an Abel-summed integral)."""
    PotentialQuery(x_norm, model)
    _transience_probe(model)
    return hankel_inverse(_inverse_psi(model), x_norm, model.dim, quad, generalized=True)


def green_ball(r: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Potential mass ``G(B_r)`` of the centered ball.

    Computed from ``1/psi`` against the Fourier transform of the ball
    indicator, which equals ``c_d int_0^r G(s) s^{d-1} ds``.
    """
    PotentialQuery(r, model)
    _transience_probe(model)
    return ball_transform_integral(_inverse_psi(model), r, model.dim, quad)


def laplace_green_ball(lam: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Laplace transform of ``f(s) = G({|x| <= sqrt(s)})`` at ``lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    PotentialQuery(1.0, model)
    _transience_probe(model)
    d = model.dim
    root = math.sqrt(lam)
    psi = model.psi
    f = lambda r: np.exp(-0.25 * r * r) * r ** (d - 1) / psi(r * root)
    val = log_quad(f, 1e-30, 1.0, per_decade=3, n=quad.gl_nodes)
    val += float(gl_pieces(f, np.linspace(1.0, 14.0, 27), quad.gl_nodes).sum())
    return 2.0 ** (1 - d) / math.gamma(d / 2) / lam * val


@dataclass(frozen=True)
class GreenRatios:
    """``psi(1/r) G(B_r) / C_tilde`` and ``r^d psi(1/r) G(r) / A_tilde``."""

    ball: float
    point: float


def green_asym_ratio(r: float, model: ProcessModel, quad: QuadratureConfig = DEFAULT_QUAD,
                     at: str | None = None) -> GreenRatios:
    """Normalized potential ratios; ``at`` is the limit point of ``psi``'s argument.

    ``r -> inf`` probes the index at zero, ``r -> 0`` the index at infinity.
    The pointwise ratio is NaN when the index is 0 (no Riesz constant).
    """
    if at is None:
        at = "zero" if r >= 1 else "infinity"
    alpha = model.psi.declared_index(at)
    if alpha is None:
        raise MissingIndexError(f"{model.name} declares no index at {at}")
    d = model.dim
    scale = float(model.psi(1.0 / r))
    ball = scale * green_ball(r, model, quad) / constant("C_tilde", d, alpha).value
    if alpha > 0:
        point = r ** d * scale * green_density(r, model, quad) / constant("A_tilde", d, alpha).value
    else:
        point = math.nan
    return GreenRatios(ball, point)
