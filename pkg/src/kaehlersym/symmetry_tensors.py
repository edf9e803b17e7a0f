"""R.R, the Tachibana tensor Q(g,R) and the complex Tachibana tensor Q^c(g,R).

All (0,6) tensors use the slot order ``(X1, X2, X3, X4; X, Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import PointFrame
from .tensor_core import endo_dot_R, evaluate

# above this real dimension plane values are computed without materializing (0,6) tensors
MATERIALIZE_MAX_DIM = 6


def metric_endo(g, x, y) -> np.ndarray:
    """Matrix of ``z -> g(y, z) x - g(x, z) y``."""
    g = np.asarray(g, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.einsum("...p,...q->...pq", x, y @ g) - np.einsum("...p,...q->...pq", y, x @ g)


def complex_metric_endo(g, J, x, y) -> np.ndarray:
    """``x ^c y = x ^ y + Jx ^ Jy - 2 g(Jx, y) J``; ``x, y`` may be batched."""
    g = np.asarray(g, dtype=np.float64)
    J = np.asarray(J, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    Jx, Jy = x @ J.T, y @ J.T
    gJxy = np.einsum("...p,pq,...q->...", Jx, g, y)
    return metric_endo(g, x, y) + metric_endo(g, Jx, Jy) - 2.0 * gJxy[..., None, None] * J


def metric_endo_basis(g) -> np.ndarray:
    """``W[a, b] = e_a ^_g e_b`` for all basis pairs."""
    dim = g.shape[0]
    eye = np.eye(dim)
    return np.einsum("pa,bq->abpq", eye, g) - np.einsum("pb,aq->abpq", eye, g)


def complex_metric_endo_basis(g, J) -> np.ndarray:
    GJ = g @ J
    W = metric_endo_basis(g)
    WJ = np.einsum("pa,qb->abpq", J, GJ) - np.einsum("pb,qa->abpq", J, GJ)
    return W + WJ - 2.0 * np.einsum("ba,pq->abpq", GJ, J)


def curvature_endo_basis(frame: PointFrame) -> np.ndarray:
    """``A[a, b] = R(e_a, e_b)`` as endomorphisms: ``A[a,b,p,q] = g^{pr} R_{abqr}``."""
    return np.einsum("pr,abqr->abpq", frame.ginv, frame.R)


def compute_rr(frame: PointFrame) -> np.ndarray:
    return endo_dot_R(curvature_endo_basis(frame), frame.R)


def compute_tachibana(frame: PointFrame) -> np.ndarray:
    return -endo_dot_R(metric_endo_basis(frame.g), frame.R)


def compute_complex_tachibana(frame: PointFrame) -> np.ndarray:
    return -endo_dot_R(complex_metric_endo_basis(frame.g, frame.J), frame.R)


def pi_tensor(g, J) -> np.ndarray:
    """(0,4) lowering of ``Pi(X, Y) = (X ^c Y) / 4``: ``g(Pi(e_i, e_j) e_k, e_l)``."""
    Wc = complex_metric_endo_basis(g, J)
    return 0.25 * np.einsum("ijpk,pl->ijkl", Wc, g)


def compute_pi_dot_pi(frame: PointFrame) -> np.ndarray:
    Pi4 = pi_tensor(frame.g, frame.J)
    return endo_dot_R(0.25 * complex_metric_endo_basis(frame.g, frame.J), Pi4)


@dataclass(frozen=True)
class CurvatureTensors:
    R: np.ndarray
    nablaR: Optional[np.ndarray]
    RR: np.ndarray
    Q: np.ndarray
    Qc: np.ndarray


def curvature_tensors(frame: PointFrame) -> CurvatureTensors:
    return CurvatureTensors(
        R=frame.R,
        nablaR=frame.nablaR,
        RR=compute_rr(frame),
        Q=compute_tachibana(frame),
        Qc=compute_complex_tachibana(frame),
    )


# ---------------------------------------------------------------------------
# plane evaluations T(v, w, w, v; x, y) without materializing T


def _derivation_on_vwwv(R, A, v, w) -> np.ndarray:
    """``sum over slots of R(.., A z, ..)`` at ``(v, w, w, v)``; batched ``A[n]``."""
    Av = np.einsum("npq,nq->np", A, v)
    Aw = np.einsum("npq,nq->np", A, w)
    return (evaluate(R, Av, w, w, v) + evaluate(R, v, Aw, w, v)
            + evaluate(R, v, w, Aw, v) + evaluate(R, v, w, w, Av))


def plane_values(frame: PointFrame, kind: str, v, w, x, y) -> np.ndarray:
    """``T(v, w, w, v; x, y)`` for ``kind`` in ``{"rr", "q", "qc"}``.

    Vector arguments are batched ``(n, dim)`` arrays (single vectors are
    broadcast).
    """
    v, w, x, y = (np.atleast_2d(np.asarray(a, dtype=np.float64)) for a in (v, w, x, y))
    n = max(a.shape[0] for a in (v, w, x, y))
    v, w, x, y = (np.broadcast_to(a, (n, frame.dim)) for a in (v, w, x, y))
    if kind == "rr":
        A = np.einsum("pr,abqr,na,nb->npq", frame.ginv, frame.R, x, y)
        return -_derivation_on_vwwv(frame.R, A, v, w)
    if kind == "q":
        return _derivation_on_vwwv(frame.R, metric_endo(frame.g, x, y), v, w)
    if kind == "qc":
        return _derivation_on_vwwv(frame.R, complex_metric_endo(frame.g, frame.J, x, y), v, w)
    raise ValueError(f"unknown plane tensor kind {kind!r}")


def tensor_plane_values(T: np.ndarray, v, w, x, y) -> np.ndarray:
    """Materialized counterpart of :func:`plane_values`."""
    return evaluate(T, v, w, w, v, x, y)
