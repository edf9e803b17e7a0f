"""Dense tensor values at a single point.

Tensors are plain ``numpy`` arrays of shape ``(dim,) * rank`` holding
covariant components. Endomorphisms ((1,1) tensors) are ``(dim, dim)``
arrays ``A[p, q]`` acting on vectors as ``(A x)^p = A[p, q] x^q``.
"""

from __future__ import annotations

import itertools

import numpy as np


class TensorError(ValueError):
    """Raised on invalid tensor arguments (rank, slots, dimensions)."""


def as_tensor(values, rank: int | None = None, dim: int | None = None) -> np.ndarray:
    """Validate and return ``values`` as a read-only float64 tensor."""
    t = np.array(values, dtype=np.float64)
    if t.ndim > 0 and len(set(t.shape)) != 1:
        raise TensorError(f"tensor must be square in every slot, got shape {t.shape}")
    if rank is not None and t.ndim != rank:
        raise TensorError(f"expected rank {rank}, got rank {t.ndim}")
    if dim is not None and t.ndim > 0 and t.shape[0] != dim:
        raise TensorError(f"expected dim {dim}, got dim {t.shape[0]}")
    if not np.all(np.isfinite(t)):
        raise TensorError("tensor has non-finite entries")
    t.setflags(write=False)
    return t


def contract(t: np.ndarray, a: int, b: int, metric_inverse: np.ndarray) -> np.ndarray:
    """Contract covariant slots ``a`` and ``b`` of ``t`` with ``g^{-1}``.

    Returns a tensor of rank ``t.ndim - 2`` with the remaining slots in
    their original order.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim < 2:
        raise TensorError("contraction needs a tensor of rank >= 2")
    if a == b or not (0 <= a < t.ndim and 0 <= b < t.ndim):
        raise TensorError(f"invalid contraction slots ({a}, {b}) for rank {t.ndim}")
    dim = t.shape[0]
    ginv = np.asarray(metric_inverse, dtype=np.float64)
    if ginv.shape != (dim, dim):
        raise TensorError("metric inverse does not match tensor dimension")
    letters = "abcdefghijklmnopqrstuvw"[: t.ndim]
    rest = "".join(ch for i, ch in enumerate(letters) if i not in (a, b))
    spec = f"{letters},{letters[a]}{letters[b]}->{rest}"
    return np.einsum(spec, t, ginv)


def endo_dot_R(A: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Derivation action of an endomorphism on a (0,4) tensor.

    ``(A.R)(X1,X2,X3,X4) = -R(AX1,X2,X3,X4) - ... - R(X1,X2,X3,AX4)``.

    ``A`` may carry leading batch axes ``A[..., p, q]``; those axes are
    appended after the four slots of the result, so ``A[x, y, p, q]``
    produces a (0,6) tensor ``T[i, j, k, l, x, y]``.
    """
    A = np.asarray(A, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 4:
        raise TensorError(f"endo_dot_R needs a (0,4) tensor, got rank {R.ndim}")
    dim = R.shape[0]
    if A.ndim < 2 or A.shape[-2:] != (dim, dim):
        raise TensorError("endomorphism dimension does not match tensor")
    batch = A.shape[:-2]
    Ab = A.reshape((-1, dim, dim))
    out = (
        np.einsum("npi,pjkl->ijkln", Ab, R)
        + np.einsum("npj,ipkl->ijkln", Ab, R)
        + np.einsum("npk,ijpl->ijkln", Ab, R)
        + np.einsum("npl,ijkp->ijkln", Ab, R)
    )
    return -out.reshape((dim,) * 4 + batch)


def evaluate(t: np.ndarray, *vectors: np.ndarray) -> np.ndarray:
    """Evaluate a covariant tensor on vectors, one per slot.

    Each vector may be ``(dim,)`` or a batch ``(n, dim)``; batches must
    share ``n``. Returns a scalar or an ``(n,)`` array.
    """
    t = np.asarray(t)
    if len(vectors) != t.ndim:
        raise TensorError(f"need {t.ndim} vectors, got {len(vectors)}")
    batched = any(np.ndim(v) == 2 for v in vectors)
    vs = [np.atleast_2d(np.asarray(v, dtype=np.float64)) for v in vectors]
    n = max(v.shape[0] for v in vs)
    vs = [np.broadcast_to(v, (n, t.shape[0])) for v in vs]
    out = np.broadcast_to(t, (n,) + t.shape)
    for v in vs:
        # contract the leading slot each time
        out = np.einsum("ni...,ni->n...", out, v)
    return out if batched else out[0]


def transform(t: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Components of a covariant tensor in a new basis.

    ``basis[:, a]`` is the a-th new basis vector in old components.
    """
    out = np.asarray(t, dtype=np.float64)
    for _ in range(out.ndim):
        # tensordot over the leading slot rotates slots, so after rank passes the order is restored
        out = np.tensordot(out, basis, axes=([0], [0]))
    return out


def apply_to_slots(t: np.ndarray, endo: np.ndarray, slots) -> np.ndarray:
    """Return ``t`` with ``endo`` inserted in each listed slot: ``t(.., A x_s, ..)``."""
    out = np.asarray(t, dtype=np.float64)
    for s in slots:
        out = np.moveaxis(np.tensordot(out, endo, axes=([s], [0])), -1, s)
    return out


def max_abs(t) -> float:
    return float(np.max(np.abs(t))) if np.size(t) else 0.0


def curvature_symmetry_residual(T: np.ndarray) -> float:
    """Max violation of the algebraic curvature symmetries in slots 0..3.

    Covers antisymmetry in (0,1) and (2,3), pair symmetry and the first
    Bianchi identity; trailing slots are carried along.
    """
    T = np.asarray(T)
    res = [
        T + np.swapaxes(T, 0, 1),
        T + np.swapaxes(T, 2, 3),
        T - np.moveaxis(T, (0, 1, 2, 3), (2, 3, 0, 1)),
        bianchi_sum(T),
    ]
    return max(max_abs(r) for r in res)


def bianchi_sum(T: np.ndarray) -> np.ndarray:
    """``T(x1,x2,x3,x4) + T(x1,x3,x4,x2) + T(x1,x4,x2,x3)`` over slots 0..3."""
    T = np.asarray(T)
    rest = tuple(range(4, T.ndim))
    # T(x1,x3,x4,x2)[i,j,k,l] = T[i,k,l,j]
    return T + np.transpose(T, (0, 3, 1, 2) + rest) + np.transpose(T, (0, 2, 3, 1) + rest)


def index_tuples(dim: int, rank: int):
    return itertools.product(range(dim), repeat=rank)
