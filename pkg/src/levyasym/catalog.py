"""Catalog of example processes and JSON model specs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParamRangeError, SpecFileError
from .exponent import IsotropicExponent, LevyDensityProfile, TabulatedExponent


@dataclass(frozen=True)
class ProcessModel:
    """A named exponent with optional Levy density and catalog metadata."""

    name: str
    family: str
    dim: int
    exponent: IsotropicExponent
    levy_density: Optional[LevyDensityProfile] = None
    params: tuple = ()
    # smallest t with exp(-t psi) integrable against r^{d-1}; 0 if all t > 0
    integrable_from: float = 0.0

    @property
    def psi(self):
        return self.exponent

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def with_indices(self, rv_index_zero=None, rv_index_inf=None) -> "ProcessModel":
        e = self.exponent
        new = IsotropicExponent(e._psi, e.dim, e.gaussian_coeff,
                                e.rv_index_zero if rv_index_zero is None else rv_index_zero,
                                e.rv_index_inf if rv_index_inf is None else rv_index_inf,
                                e.name, e.unimodal)
        return ProcessModel(self.name, self.family, self.dim, new, self.levy_density,
                            self.params, self.integrable_from)


def _open_interval(name, value, lo, hi):
    if not (lo < value < hi):
        raise ParamRangeError(f"{name}={value} must lie in ({lo}, {hi})")


def _stable_constant(d, alpha):
    from .asym import constant
    return constant("A", d, alpha).value


def _log_expm1(r):
    # log(e^r - 1) without overflow
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(r > 30, r + np.log1p(-np.exp(-np.minimum(r, 700.0))),
                        np.log(np.expm1(np.minimum(r, 30.0))))


def _build_stable(dim, alpha):
    _open_interval("alpha", alpha, 0.0, 2.0)
    a_const = _stable_constant(dim, alpha)
    nu = LevyDensityProfile.from_function(dim, lambda r: a_const * r ** (-dim - alpha),
                                          alpha, "stable")
    psi = IsotropicExponent(lambda r: r ** alpha, dim, 0.0, alpha, alpha, f"stable({alpha})")
    return psi, nu, 0.0


def _build_brownian(dim):
    psi = IsotropicExponent(lambda r: r * r, dim, 1.0, 2.0, 2.0, "brownian")
    return psi, None, 0.0


def _build_relativistic(dim, alpha):
    _open_interval("alpha", alpha, 0.0, 2.0)
    fn = lambda r: np.expm1(0.5 * alpha * np.log1p(r * r))
    return IsotropicExponent(fn, dim, 0.0, 2.0, alpha, f"relativistic({alpha})"), None, 0.0


def _tabulated(profile, dim, rv0, rvinf, name):
    table = TabulatedExponent(profile)
    return IsotropicExponent(table, dim, 0.0, rv0, rvinf, name)


def _build_tempered(dim, alpha):
    _open_interval("alpha", alpha, 0.0, 2.0)
    nu = LevyDensityProfile.from_function(dim, lambda r: r ** (-dim - alpha) * np.exp(-r),
                                          alpha, "tempered")
    return _tabulated(nu, dim, 2.0, alpha, f"tempered({alpha})"), nu, 0.0


def _build_truncated(dim, alpha):
    _open_interval("alpha", alpha, 0.0, 2.0)
    nu = LevyDensityProfile(dim, ((0.0, 1.0, lambda r: r ** (-dim - alpha)),), alpha, "truncated")
    return _tabulated(nu, dim, 2.0, alpha, f"truncated({alpha})"), nu, 0.0


def _build_lamperti(dim, alpha, delta):
    _open_interval("alpha", alpha, 0.0, 2.0)
    if not delta < alpha + 1:
        raise ParamRangeError(f"delta={delta} must be < alpha + 1 = {alpha + 1}")

    def fn(r):
        return r ** (1.0 - dim) * np.exp(delta * r - (alpha + 1) * _log_expm1(r))

    nu = LevyDensityProfile.from_function(dim, fn, alpha, "lamperti")
    return _tabulated(nu, dim, 2.0, alpha, f"lamperti({alpha},{delta})"), nu, 0.0


def _build_layered(dim, alpha, alpha1):
    _open_interval("alpha", alpha, 0.0, 2.0)
    _open_interval("alpha1", alpha1, 0.0, 2.0)
    nu = LevyDensityProfile(dim, ((0.0, 1.0, lambda r: r ** (-dim - alpha)),
                                  (1.0, math.inf, lambda r: r ** (-dim - alpha1))),
                            alpha, "layered")
    return _tabulated(nu, dim, alpha1, alpha, f"layered({alpha},{alpha1})"), nu, 0.0


def _build_log_exponent(dim, alpha, beta, gamma):
    _open_interval("alpha", alpha, 0.0, 2.0)
    _open_interval("gamma", gamma, 0.0, 2.0)
    _open_interval("alpha+2*beta", alpha + 2 * beta, 0.0, 2.0)
    fn = lambda r: r ** alpha * np.log1p(r ** gamma) ** beta
    psi = IsotropicExponent(fn, dim, 0.0, alpha + gamma * beta, alpha,
                            f"log_exponent({alpha},{beta},{gamma})")
    return psi, None, 0.0


def _build_log_corrected(dim, alpha, beta):
    _open_interval("alpha", alpha, 0.0, 2.0)
    if not math.isfinite(beta):
        raise ParamRangeError("beta must be finite")
    shift = 1.0 + math.exp(beta)
    fn = lambda r: r ** (-dim - alpha) * np.log(shift + r) ** beta
    nu = LevyDensityProfile.from_function(dim, fn, alpha, "log_corrected")
    return _tabulated(nu, dim, alpha, alpha, f"log_corrected({alpha},{beta})"), nu, 0.0


def _log1p_square(r):
    # log(1 + r^2) without overflowing r^2 for huge r
    r = np.abs(np.asarray(r, dtype=float))
    big = r > 1e8
    with np.errstate(divide="ignore"):
        return np.where(big, 2.0 * np.log(np.where(big, r, 1.0)), np.log1p(np.where(big, 0.0, r) ** 2))


def _build_gamma_variance(dim):
    psi = IsotropicExponent(_log1p_square, dim, 0.0, 2.0, 0.0, "gamma_variance")
    # exp(-t psi) = (1 + r^2)^{-t} is integrable against r^{d-1} iff 2t > d
    return psi, None, dim / 2.0


_FAMILIES = {
    "stable": (_build_stable, ("alpha",), {}),
    "cauchy": (lambda dim: _build_stable(dim, 1.0), (), {}),
    "brownian": (_build_brownian, (), {}),
    "relativistic": (_build_relativistic, ("alpha",), {}),
    "tempered": (_build_tempered, ("alpha",), {}),
    "truncated": (_build_truncated, ("alpha",), {}),
    "lamperti": (_build_lamperti, ("alpha", "delta"), {}),
    "layered": (_build_layered, ("alpha", "alpha1"), {}),
    "log_exponent": (_build_log_exponent, ("alpha", "beta", "gamma"), {}),
    "log_corrected": (_build_log_corrected, ("alpha", "beta"), {}),
    "gamma_variance": (_build_gamma_variance, (), {}),
}

FAMILIES = tuple(_FAMILIES)


def family_parameters(family: str) -> tuple:
    if family not in _FAMILIES:
        raise ParamRangeError(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}")
    return _FAMILIES[family][1]


@lru_cache(maxsize=None)
def _cached(family, dim, items):
    builder, names, _ = _FAMILIES[family]
    kwargs = dict(items)
    psi, nu, t_min = builder(dim, **kwargs)
    label = family if not kwargs else family + "(" + ",".join(f"{k}={v:g}" for k, v in items) + ")"
    return ProcessModel(label, family, dim, psi, nu, items, t_min)


def catalog(name: str, dim: int = 1, **params) -> ProcessModel:
    """Build (and memoize) a catalog member.

    Examples
    --------
    >>> catalog("relativistic", dim=3, alpha=1.0).psi(1.0)  # doctest: +ELLIPSIS
    0.414213...
    """
    names = family_parameters(name)
    if int(dim) != dim or dim < 1:
        raise ParamRangeError("dim must be a positive integer")
    unknown = set(params) - set(names)
    missing = set(names) - set(params)
    if unknown:
        raise ParamRangeError(f"unknown parameters for {name}: {sorted(unknown)}")
    if missing:
        raise ParamRangeError(f"missing parameters for {name}: {sorted(missing)}")
    try:
        items = tuple((k, float(params[k])) for k in names)
    except (TypeError, ValueError) as exc:
        raise ParamRangeError(f"non-numeric parameter for {name}") from exc
    return _cached(name, int(dim), items)


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------

_SPEC_FIELDS = {"name", "dim", "family", "params", "rv_index_zero", "rv_index_inf"}


def model_from_spec(spec: dict) -> ProcessModel:
    """Validate a spec mapping ``{name, dim, family, params, rv_index_zero?, rv_index_inf?}``."""
    if not isinstance(spec, dict):
        raise SpecFileError("model spec must be a JSON object")
    unknown = set(spec) - _SPEC_FIELDS
    if unknown:
        raise SpecFileError(f"unknown spec fields: {sorted(unknown)}")
    for key in ("dim", "family"):
        if key not in spec:
            raise SpecFileError(f"spec is missing {key!r}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise SpecFileError("'params' must be an object")
    dim = spec["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise SpecFileError("'dim' must be an integer")
    model = catalog(spec["family"], dim=dim, **params)
    rv0, rvinf = spec.get("rv_index_zero"), spec.get("rv_index_inf")
    if rv0 is not None or rvinf is not None:
        model = model.with_indices(rv0, rvinf)
    if "name" in spec:
        model = ProcessModel(str(spec["name"]), model.family, model.dim, model.exponent,
                             model.levy_density, model.params, model.integrable_from)
    return model


def load_model_spec(path) -> ProcessModel:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"invalid JSON in {path}: {exc}") from exc
    return model_from_spec(spec)


def parse_model_reference(ref: str) -> ProcessModel:
    """Catalog shortcut ``family:key=value,...`` (``dim`` included) or a spec path."""
    if ":" in ref and not Path(ref).exists():
        family, _, rest = ref.partition(":")
        kv = {}
        for part in filter(None, rest.split(",")):
            key, sep, val = part.partition("=")
            if not sep:
                raise SpecFileError(f"malformed model parameter {part!r}")
            kv[key.strip()] = val.strip()
        dim = kv.pop("dim", "1")
        try:
            dim = int(dim)
        except ValueError as exc:
            raise SpecFileError(f"dim must be an integer, got {dim!r}") from exc
        return catalog(family.strip(), dim=dim, **kv)
    if Path(ref).exists():
        return load_model_spec(ref)
    if ref in _FAMILIES:
        return catalog(ref, dim=1)
    raise SpecFileError(f"model reference {ref!r} is neither a spec file nor a catalog shortcut")
