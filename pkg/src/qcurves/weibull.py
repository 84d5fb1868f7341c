"""Two-parameter Weibull model and its closed-form concentration curves.

The distribution has density

    f(x) = (beta/sigma) * (x/sigma)**(beta-1) * exp(-(x/sigma)**beta),  x >= 0,

quantile function Q(p) = sigma * (-log(1-p))**(1/beta), and Gini index
1 - 2**(-1/beta).  Both concentration curves of this model are scale free:
they depend on the shape ``beta`` only, through the ratio

    r(p) = log(1 - p/2) / log((1-p)/2)        (qZ curve)
    r(p) = log(1 - p/2) / log(p/2)            (qD curve)

with curve value 1 - r(p)**(1/beta) inside (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "WeibullParams",
    "pdf",
    "cdf",
    "quantile",
    "quantile_density",
    "sample",
    "weibull_qf",
    "qz_closed",
    "qd_closed",
    "closed_curve",
    "gini_weibull",
    "eta_weibull",
]


@dataclass(frozen=True)
class WeibullParams:
    """Shape/scale parameter pair, validated on construction."""

    beta: float
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"shape must be finite and positive, got {self.beta}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"scale must be finite and positive, got {self.sigma}")


def _maybe_scalar(out: np.ndarray, scalar: bool):
    return float(out.reshape(())[()]) if scalar else out


def pdf(params: WeibullParams, x):
    """Density of the Weibull distribution; zero for negative arguments."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    pos = x > 0.0
    z = x[pos] / params.sigma
    zb = z**params.beta
    out[pos] = (params.beta / params.sigma) * zb / z * np.exp(-zb)
    if params.beta < 1.0:
        out[x == 0.0] = np.inf
    elif params.beta == 1.0:
        out[x == 0.0] = 1.0 / params.sigma
    return _maybe_scalar(out, scalar)


def cdf(params: WeibullParams, x):
    """Distribution function F(x) = 1 - exp(-(x/sigma)**beta)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = -np.expm1(-((x[pos] / params.sigma) ** params.beta))
    return _maybe_scalar(out, scalar)


def quantile(params: WeibullParams, p):
    """Quantile function Q(p) = sigma * (-log(1-p))**(1/beta).

    ``p`` may be a scalar or array in [0, 1]; Q(1) is +inf.
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any((p < 0.0) | (p > 1.0) | np.isnan(p)):
        raise DomainError("quantile order must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        # -log1p(-p) keeps precision for small p and gives +inf at p=1
        out = params.sigma * (-np.log1p(-p)) ** (1.0 / params.beta)
    return _maybe_scalar(out, scalar)


def quantile_density(params: WeibullParams, p):
    """Derivative Q'(p) = (sigma/beta) * (-log(1-p))**(1/beta-1) / (1-p).

    Defined for p in (0, 1).
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any((p <= 0.0) | (p >= 1.0) | np.isnan(p)):
        raise DomainError("quantile density needs p in the open interval (0, 1)")
    u = -np.log1p(-p)
    out = (params.sigma / params.beta) * u ** (1.0 / params.beta - 1.0) / (1.0 - p)
    return _maybe_scalar(out, scalar)


def sample(params: WeibullParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` variates by inverse transform of uniforms from ``rng``."""
    if n < 1:
        raise DomainError("sample size must be at least 1")
    u = rng.random(n)
    return params.sigma * (-np.log1p(-u)) ** (1.0 / params.beta)


def weibull_qf(params: WeibullParams):
    """Return the quantile function as a plain callable p -> Q(p)."""

    def qf(p):
        return quantile(params, p)

    return qf


def _log_ratio(p: np.ndarray, kind: str) -> np.ndarray:
    """log of r(p) for interior p; r is the curve's bracketed log ratio."""
    num = np.log1p(-0.5 * p)
    if kind == "qz":
        den = np.log(0.5 * (1.0 - p))
    else:
        den = np.log(0.5 * p)
    return np.log(num / den)


def _closed(beta: float, p, kind: str):
    if not (math.isfinite(beta) and beta > 0.0):
        raise DomainError(f"shape must be finite and positive, got {beta}")
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any((p < 0.0) | (p > 1.0) | np.isnan(p)):
        raise DomainError("curve argument must lie in [0, 1]")
    out = np.empty_like(p)
    out[p == 0.0] = 1.0
    out[p == 1.0] = 1.0 if kind == "qz" else 0.0
    inner = (p > 0.0) & (p < 1.0)
    if np.any(inner):
        out[inner] = -np.expm1(_log_ratio(p[inner], kind) / beta)
    return _maybe_scalar(out, scalar)


def qz_closed(beta: float, p):
    """Closed-form qZ curve of the Weibull model.

    qZ(p) = 1 - [log(1-p/2) / log((1-p)/2)]**(1/beta) for p in (0, 1),
    with qZ(0) = qZ(1) = 1 by convention.  Scale free.
    """
    return _closed(beta, p, "qz")


def qd_closed(beta: float, p):
    """Closed-form qD curve of the Weibull model.

    qD(p) = 1 - [log(1-p/2) / log(p/2)]**(1/beta) for p in (0, 1), with
    qD(0) = 1 and qD(1) = 0 by convention.  Scale free.
    """
    return _closed(beta, p, "qd")


def closed_curve(beta: float, p, kind):
    """Dispatch to :func:`qz_closed` or :func:`qd_closed` by curve kind."""
    kind = getattr(kind, "value", kind)
    if kind not in ("qz", "qd"):
        raise DomainError(f"unknown curve kind {kind!r}")
    return _closed(beta, p, kind)


def gini_weibull(beta: float) -> float:
    """Gini index of the Weibull model, 1 - 2**(-1/beta); scale free."""
    if not (math.isfinite(beta) and beta > 0.0):
        raise DomainError(f"shape must be finite and positive, got {beta}")
    return -math.expm1(-math.log(2.0) / beta)


def eta_weibull(beta: float, p, kind="qz"):
    """Sensitivity of the closed-form curve to the shape parameter.

    Returns d/d(beta) of the curve value, r**(1/beta) * log(r) / beta**2
    with r the curve's bracketed log ratio.  Negative on (0, 1) for both
    curves (larger shape means a lower curve) and zero at the endpoints.
    """
    kind = getattr(kind, "value", kind)
    if kind not in ("qz", "qd"):
        raise DomainError(f"unknown curve kind {kind!r}")
    if not (math.isfinite(beta) and beta > 0.0):
        raise DomainError(f"shape must be finite and positive, got {beta}")
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any((p < 0.0) | (p > 1.0) | np.isnan(p)):
        raise DomainError("curve argument must lie in [0, 1]")
    out = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    if np.any(inner):
        lr = _log_ratio(p[inner], kind)
        out[inner] = np.exp(lr / beta) * lr / beta**2
    return _maybe_scalar(out, scalar)
