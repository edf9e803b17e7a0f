"""Sectional curvatures and parallel transport."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import Chart, DomainError, PointFrame, christoffel_symbols

DEGENERACY_TOL = 1e-12


class DegeneratePlaneError(ValueError):
    pass


@dataclass(frozen=True)
class Plane:
    v: np.ndarray
    w: np.ndarray
    holomorphic: bool = False

    @classmethod
    def holomorphic_from(cls, frame: PointFrame, u) -> "Plane":
        u = np.asarray(u, dtype=np.float64)
        return cls(u, frame.J @ u, True)

    def rebased(self, a, b, c, d) -> "Plane":
        return Plane(a * self.v + b * self.w, c * self.v + d * self.w, self.holomorphic)


def gram(g: np.ndarray, plane: Plane) -> float:
    vv, ww, vw = plane.v @ g @ plane.v, plane.w @ g @ plane.w, plane.v @ g @ plane.w
    return float(vv * ww - vw * vw)


def check_plane(g: np.ndarray, plane: Plane) -> float:
    """Return the Gram determinant, raising if the plane is degenerate."""
    vv, ww = plane.v @ g @ plane.v, plane.w @ g @ plane.w
    G = gram(g, plane)
    if not G > DEGENERACY_TOL * vv * ww or vv <= 0:
        raise DegeneratePlaneError("vectors do not span a plane")
    return G


def sectional_curvature(frame: PointFrame, plane: Plane) -> float:
    G = check_plane(frame.g, plane)
    v, w = plane.v, plane.w
    return float(np.einsum("ijkl,i,j,k,l->", frame.R, v, w, w, v) / G)


def holomorphic_sectional_curvature(frame: PointFrame, u) -> float:
    u = np.asarray(u, dtype=np.float64)
    if not np.any(u):
        raise DegeneratePlaneError("zero vector")
    return sectional_curvature(frame, Plane.holomorphic_from(frame, u))


@dataclass(frozen=True)
class Curve:
    """Coordinate curve ``x(t) = start + int_0^t velocity_fn``, ``t`` in ``[0, t_end]``."""

    start: np.ndarray
    velocity_fn: Callable[[float], np.ndarray]
    t_end: float
    steps: int = 200


def polynomial_curve(start, coeffs: Sequence, t_end: float = 1.0, steps: int = 200) -> Curve:
    """Curve with velocity ``sum_k coeffs[k] t^k``."""
    coeffs = [np.asarray(c, dtype=np.float64) for c in coeffs]
    return Curve(np.asarray(start, dtype=np.float64),
                 lambda t: sum(c * t**k for k, c in enumerate(coeffs)), t_end, steps)


def loop_curve(start, e1, e2, radius: float, steps: int = 200) -> Curve:
    """Closed circle through ``start`` in the coordinate plane spanned by ``e1, e2``."""
    e1, e2 = np.asarray(e1, dtype=np.float64), np.asarray(e2, dtype=np.float64)
    return Curve(np.asarray(start, dtype=np.float64),
                 lambda t: radius * (-np.sin(t) * e1 + np.cos(t) * e2), 2 * np.pi, steps)


def _christoffel(chart: Chart, x) -> np.ndarray:
    try:
        jet = chart.metric_jet(x, 1)
    except DomainError:
        raise DomainError(f"{chart.id}: curve leaves the chart domain at {np.asarray(x).tolist()}")
    return christoffel_symbols(jet, np.linalg.inv(jet.g))


def transport_path(chart: Chart, curve: Curve, vectors) -> tuple[np.ndarray, np.ndarray]:
    """RK4 for ``dv^k/dt = -Gamma^k_ij x'^i v^j`` together with ``x' = velocity``.

    Returns the endpoint and the transported vectors as rows.
    """
    V = np.array(vectors, dtype=np.float64, ndmin=2)
    x = chart.check_point(curve.start).copy()
    if curve.t_end == 0 or curve.steps == 0:
        return x, V
    h = curve.t_end / curve.steps

    def rhs(t, x, V):
        xdot = np.asarray(curve.velocity_fn(t), dtype=np.float64)
        gam = _christoffel(chart, x)
        return xdot, -np.einsum("kij,i,nj->nk", gam, xdot, V)

    t = 0.0
    for _ in range(curve.steps):
        k1x, k1v = rhs(t, x, V)
        k2x, k2v = rhs(t + h / 2, x + h / 2 * k1x, V + h / 2 * k1v)
        k3x, k3v = rhs(t + h / 2, x + h / 2 * k2x, V + h / 2 * k2v)
        k4x, k4v = rhs(t + h, x + h * k3x, V + h * k3v)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        V = V + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t += h
    return chart.check_point(x), V


def parallel_transport(chart: Chart, curve: Curve, vectors) -> list[np.ndarray]:
    _, V = transport_path(chart, curve, vectors)
    return list(V)
