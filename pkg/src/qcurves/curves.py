"""Concentration curves built from an arbitrary quantile function.

For a quantile function q the two curves are

    qZ(p) = 1 - q(p/2) / q((1+p)/2)
    qD(p) = 1 - q(p/2) / q(1 - p/2)

for p in (0, 1), with the conventions qZ(0) = qZ(1) = qD(0) = 1 and
qD(1) = 0.  Both take values in [0, 1] whenever q is nonnegative and
nondecreasing, and both vanish identically for a degenerate (constant)
distribution.  The summary index of a curve is its integral over [0, 1],
computed with composite Gauss-Legendre quadrature on a fixed grid so that
repeated runs are bit-identical.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DegenerateQuantile, DomainError, NonConvergence

__all__ = [
    "CurveKind",
    "QuadratureSpec",
    "gauss_legendre_grid",
    "curve_value",
    "curve_index",
    "curve_grid",
    "CurveSamples",
]


class CurveKind(Enum):
    QZ = "qz"
    QD = "qd"


def _kind_value(kind) -> str:
    value = getattr(kind, "value", kind)
    if value not in ("qz", "qd"):
        raise DomainError(f"unknown curve kind {kind!r}")
    return value


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule: ``panels`` equal panels of ``nodes`` points."""

    panels: int = 256
    nodes: int = 8

    def __post_init__(self):
        if self.panels < 1 or self.nodes < 1:
            raise DomainError("quadrature needs at least one panel and one node")


@lru_cache(maxsize=32)
def _grid(panels: int, nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    h = 1.0 / panels
    starts = np.arange(panels, dtype=float) * h
    points = (starts[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    weights = np.broadcast_to(0.5 * h * w, (panels, nodes)).ravel().copy()
    points.flags.writeable = False
    weights.flags.writeable = False
    return points, weights


def gauss_legendre_grid(spec: QuadratureSpec = QuadratureSpec()):
    """Quadrature points and weights on [0, 1]; cached, read-only arrays."""
    return _grid(spec.panels, spec.nodes)


def curve_value(qf, kind, p):
    """Evaluate a concentration curve of the quantile function ``qf``.

    ``p`` may be a scalar or array in [0, 1].  Endpoint conventions are
    applied before the ratio formula.  Raises DegenerateQuantile when a
    denominator quantile is zero.
    """
    kind = _kind_value(kind)
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
        pi = p[inner]
        num = np.asarray(qf(0.5 * pi), dtype=float)
        if kind == "qz":
            den = np.asarray(qf(0.5 * (1.0 + pi)), dtype=float)
        else:
            den = np.asarray(qf(1.0 - 0.5 * pi), dtype=float)
        if np.any(den == 0.0):
            raise DegenerateQuantile("denominator quantile is zero")
        out[inner] = 1.0 - num / den
    return float(out[0]) if scalar else out


def curve_index(qf, kind, quadrature: QuadratureSpec = QuadratureSpec(),
                check: bool = False, check_tol: float = 1e-8) -> float:
    """Integral of the curve over [0, 1] by composite Gauss-Legendre.

    With ``check=True`` the integral is recomputed with doubled panels and
    NonConvergence is raised if the two disagree by more than ``check_tol``
    (useful for smooth parametric curves; data-based curves are piecewise
    and should be integrated on the fixed grid without the check).
    """
    points, weights = gauss_legendre_grid(quadrature)
    # elementwise product + pairwise sum keeps the reduction order fixed
    value = float((weights * curve_value(qf, kind, points)).sum())
    if check:
        fine = QuadratureSpec(2 * quadrature.panels, quadrature.nodes)
        fp, fw = gauss_legendre_grid(fine)
        refined = float((fw * curve_value(qf, kind, fp)).sum())
        if abs(refined - value) > check_tol:
            raise NonConvergence(
                f"quadrature disagreement {abs(refined - value):.3e} "
                f"exceeds {check_tol:.1e}")
        value = refined
    return value


@dataclass(frozen=True)
class CurveSamples:
    """Curve sampled on a grid; serializes to two-column CSV."""

    p: np.ndarray
    values: np.ndarray
    kind: CurveKind

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["p", "value"])
        for pi, vi in zip(self.p, self.values):
            writer.writerow([format(pi, ".17g"), format(vi, ".17g")])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind) -> "CurveSamples":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["p", "value"]:
            raise DomainError("curve CSV must start with header p,value")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float)
        return cls(p=data[:, 0], values=data[:, 1], kind=CurveKind(_kind_value(kind)))


def curve_grid(qf, kind, grid_size: int = 200) -> CurveSamples:
    """Sample the curve on ``grid_size + 1`` equally spaced points incl. endpoints."""
    if grid_size < 1:
        raise DomainError("grid size must be at least 1")
    p = np.linspace(0.0, 1.0, grid_size + 1)
    return CurveSamples(p=p, values=curve_value(qf, kind, p), kind=CurveKind(_kind_value(kind)))
