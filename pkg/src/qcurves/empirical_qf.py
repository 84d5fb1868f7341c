"""Empirical quantile functions: step form and plotting-position interpolants.

The step form is the generalized inverse Qn(p) = inf{t : Fn(t) >= p}, equal
to the k-th order statistic on ((k-1)/n, k/n] and to the sample minimum at
p = 0.  The smooth variants interpolate linearly between plotting positions

    hf:  p_k = (k - 1/3) / (n + 1/3)
    wg:  p_k = k / (n + 1)

and are constant below the first and above the last position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "SortedSample",
    "plotting_positions",
    "empirical_qf",
    "plotting_position_qf",
    "EmpiricalQF",
    "PlottingPositionQF",
]

_SCHEMES = ("hf", "wg")


@dataclass(frozen=True)
class SortedSample:
    """Nonnegative sample stored in ascending order."""

    values: np.ndarray

    @classmethod
    def from_data(cls, data) -> "SortedSample":
        values = np.asarray(data, dtype=float).ravel()
        if values.size < 1:
            raise DomainError("sample must contain at least one value")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        if np.any(values < 0.0):
            raise DomainError("sample values must be nonnegative")
        values = np.sort(values)
        values.flags.writeable = False
        return cls(values)

    @property
    def n(self) -> int:
        return int(self.values.size)


def plotting_positions(n: int, scheme: str = "hf") -> np.ndarray:
    """Plotting positions p_1 < ... < p_n for the given scheme."""
    if scheme not in _SCHEMES:
        raise DomainError(f"unknown plotting-position scheme {scheme!r}")
    if n < 1:
        raise DomainError("need at least one observation")
    k = np.arange(1, n + 1, dtype=float)
    if scheme == "hf":
        return (k - 1.0 / 3.0) / (n + 1.0 / 3.0)
    return k / (n + 1.0)


def _check_orders(p: np.ndarray):
    if np.any((p < 0.0) | (p > 1.0) | np.isnan(p)):
        raise DomainError("quantile order must lie in [0, 1]")


def step_indices(n: int, q: np.ndarray) -> np.ndarray:
    """Order-statistic index (0-based) picked by the step quantile function at q."""
    idx = np.ceil(n * np.asarray(q, dtype=float)).astype(np.int64) - 1
    np.clip(idx, 0, n - 1, out=idx)
    return idx


def interp_plan(positions: np.ndarray, q: np.ndarray):
    """Gather plan (j0, j1, frac) for linear interpolation at orders q.

    The evaluation rule shared by every call site is
    ``(1 - frac) * values[j0] + frac * values[j1]``, which returns the node
    value exactly when q hits a position and is constant beyond the ends.
    """
    q = np.asarray(q, dtype=float)
    j = np.searchsorted(positions, q, side="left")
    j0 = np.clip(j - 1, 0, positions.size - 1)
    j1 = np.clip(j, 0, positions.size - 1)
    gap = positions[j1] - positions[j0]
    with np.errstate(invalid="ignore"):
        frac = np.where(gap > 0.0, (q - positions[j0]) / np.where(gap > 0.0, gap, 1.0), 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    return j0, j1, frac


@dataclass(frozen=True)
class EmpiricalQF:
    """Step quantile function of a sorted sample; callable on scalars/arrays."""

    sample: SortedSample

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        scalar = p.ndim == 0
        p = np.atleast_1d(p)
        _check_orders(p)
        n = self.sample.n
        out = self.sample.values[step_indices(n, p)]
        return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PlottingPositionQF:
    """Piecewise-linear quantile function through plotting positions."""

    sample: SortedSample
    scheme: str = "hf"
    positions: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "positions", plotting_positions(self.sample.n, self.scheme))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        scalar = p.ndim == 0
        p = np.atleast_1d(p)
        _check_orders(p)
        j0, j1, frac = interp_plan(self.positions, p)
        values = self.sample.values
        out = (1.0 - frac) * values[j0] + frac * values[j1]
        return float(out[0]) if scalar else out


def empirical_qf(sample: SortedSample) -> EmpiricalQF:
    """Step quantile function Qn of the sample."""
    return EmpiricalQF(sample)


def plotting_position_qf(sample: SortedSample, scheme: str = "hf") -> PlottingPositionQF:
    """Interpolated quantile function through ``hf`` or ``wg`` positions."""
    return PlottingPositionQF(sample, scheme)
