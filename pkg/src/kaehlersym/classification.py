"""Pointwise classification in the symmetry hierarchy and double sectional curvatures."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curvature import Plane, check_plane
from .geometry import Chart, PointFrame, point_frame
from .symmetry_tensors import (
    MATERIALIZE_MAX_DIM,
    compute_complex_tachibana,
    compute_rr,
    compute_tachibana,
    pi_tensor,
    plane_values,
)
from .tensor_core import evaluate, max_abs

DEFAULT_TOL = 1e-8
# denominators below this fraction of the curvature scale are excluded from ratio fits
CONDITIONING = 1e-6
MIN_WELL_CONDITIONED = 10


class NotCurvatureDependentError(ValueError):
    pass


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDETERMINED = "undetermined"


FLAG_NAMES = (
    "flat",
    "csc",
    "chsc",
    "locally_symmetric",
    "semisymmetric",
    "deszcz_pseudosymmetric",
    "holomorphically_pseudosymmetric",
)

# (stronger, weaker) pairs that a report must never contradict
IMPLICATIONS = (
    ("flat", "csc"),
    ("csc", "locally_symmetric"),
    ("chsc", "locally_symmetric"),
    ("locally_symmetric", "semisymmetric"),
    ("semisymmetric", "deszcz_pseudosymmetric"),
    ("deszcz_pseudosymmetric", "holomorphically_pseudosymmetric"),
)


@dataclass
class ClassificationReport:
    point: list
    flags: dict
    fitted: dict
    residuals: dict
    samples_used: int
    tolerance: float
    in_U: bool
    notes: list = field(default_factory=list)

    def holds(self, name: str) -> bool:
        return self.flags[name] == Verdict.HOLDS

    def to_dict(self) -> dict:
        return {
            "point": [float(x) for x in self.point],
            "flags": {k: Verdict(v).value for k, v in self.flags.items()},
            "fitted": {k: (None if v is None else float(v)) for k, v in self.fitted.items()},
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "in_U": bool(self.in_U),
            "samples": int(self.samples_used),
            "tol": float(self.tolerance),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# plane sampling


def _unit(g, v):
    return v / np.sqrt(np.einsum("ni,ij,nj->n", v, g, v))[:, None]


def _orthonormal_pair(g, v, w):
    v = _unit(g, v)
    w = w - np.einsum("ni,ij,nj->n", v, g, w)[:, None] * v
    return v, _unit(g, w)


def sample_plane_arrays(frame: PointFrame, count: int, mode: str, rng: np.random.Generator):
    """``(v, w, x, y)`` arrays of shape ``(count, dim)``; each pair g-orthonormal."""
    if count < 1:
        raise ValueError("count must be >= 1")
    dim, g, J = frame.dim, frame.g, frame.J
    if mode == "holomorphic":
        u = _unit(g, rng.normal(size=(count, dim)))
        x = _unit(g, rng.normal(size=(count, dim)))
        return u, u @ J.T, x, x @ J.T
    if mode == "generic":
        v, w = _orthonormal_pair(g, rng.normal(size=(count, dim)), rng.normal(size=(count, dim)))
        x, y = _orthonormal_pair(g, rng.normal(size=(count, dim)), rng.normal(size=(count, dim)))
        return v, w, x, y
    raise ValueError(f"unknown sampling mode {mode!r}")


def sample_planes(frame: PointFrame, count: int, mode: str = "generic", seed: int = 0):
    """Deterministic list of ``(pi, pibar)`` plane pairs."""
    v, w, x, y = sample_plane_arrays(frame, count, mode, np.random.default_rng(seed))
    hol = mode == "holomorphic"
    return [(Plane(v[i], w[i], hol), Plane(x[i], y[i], hol)) for i in range(count)]


@dataclass(frozen=True)
class PlaneSampler:
    count: int = 500
    seed: int = 0

    def __call__(self, frame: PointFrame, mode: str, stream: int = 0):
        rng = np.random.default_rng([self.seed, stream])
        return sample_plane_arrays(frame, self.count, mode, rng)


# ---------------------------------------------------------------------------
# double sectional curvature


def _normalized_value(T, g, pi: Plane, pibar: Plane) -> float:
    # Q(v,w,w,v;x,y) is quadratic in v^w and linear in x^y
    G1 = check_plane(g, pi)
    G2 = check_plane(g, pibar)
    val = evaluate(T, pi.v, pi.w, pi.w, pi.v, pibar.v, pibar.w)
    return float(val / (G1 * math.sqrt(G2)))


def curvature_dependent(Q, pi: Plane, pibar: Plane, tol: float = DEFAULT_TOL, g=None) -> bool:
    """Whether ``|Q(pi; pibar)| > tol`` for Gram-normalized bases of both planes."""
    g = np.eye(np.shape(Q)[0]) if g is None else g
    return abs(_normalized_value(Q, g, pi, pibar)) > tol


def double_sectional_curvature(RR, Q, pi: Plane, pibar: Plane, tol: float = DEFAULT_TOL,
                               g=None) -> float:
    """``L = R.R(v,w,w,v;x,y) / Q(v,w,w,v;x,y)``; basis independent."""
    g = np.eye(np.shape(Q)[0]) if g is None else g
    if not curvature_dependent(Q, pi, pibar, tol, g):
        raise NotCurvatureDependentError("pi is not curvature-dependent with respect to pibar")
    args = (pi.v, pi.w, pi.w, pi.v, pibar.v, pibar.w)
    return float(evaluate(RR, *args) / evaluate(Q, *args))


# ---------------------------------------------------------------------------
# point classification


def least_squares_scale(T, pattern) -> tuple[float, float]:
    """Best ``c`` with ``T ~ c * pattern`` and the max residual."""
    denom = float(np.vdot(pattern, pattern))
    if denom == 0.0:
        return 0.0, max_abs(T)
    c = float(np.vdot(T, pattern)) / denom
    return c, max_abs(T - c * pattern)


def csc_pattern(g) -> np.ndarray:
    """``g((X ^ Y) Z, W) = g(Y,Z) g(X,W) - g(X,Z) g(Y,W)``."""
    return np.einsum("jk,il->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g)


def fit_pseudosymmetry(num_samples, den_samples, num_full, den_full, scale_den, scale_num,
                       tol: float):
    """Fit ``num = L * den`` by the median ratio and validate globally.

    ``*_samples`` are plane values used for the fit; ``*_full`` the arrays the
    residual is validated on. Returns ``(verdict, value, residual, n_well)``.
    """
    den_max = max_abs(den_full)
    if den_max <= tol * scale_den:
        # outside U: any scalar works iff the numerator vanishes
        res = max_abs(num_full)
        return (Verdict.HOLDS if res < tol * scale_num else Verdict.FAILS), None, res, 0
    well = np.abs(den_samples) > CONDITIONING * scale_den
    n_well = int(np.count_nonzero(well))
    if n_well < MIN_WELL_CONDITIONED:
        return Verdict.UNDETERMINED, None, max_abs(num_full), n_well
    if max_abs(num_full) < tol * scale_num:
        # vanishing numerator: the scalar is exactly 0, not a rounding-level ratio
        return Verdict.HOLDS, 0.0, max_abs(num_full), n_well
    value = float(np.median(num_samples[well] / den_samples[well]))
    res = max_abs(num_full - value * den_full)
    verdict = Verdict.HOLDS if res < tol * scale_num else Verdict.FAILS
    return verdict, (value if verdict == Verdict.HOLDS else None), res, n_well


def _consequences(name: str) -> list:
    out, stack = [], [name]
    while stack:
        cur = stack.pop()
        for strong, weak in IMPLICATIONS:
            if strong == cur and weak not in out:
                out.append(weak)
                stack.append(weak)
    return out


def _enforce_chain(flags: dict, notes: list) -> None:
    """Downgrade a holding flag to undetermined when any consequence fails."""
    for strong in FLAG_NAMES:
        if flags[strong] != Verdict.HOLDS:
            continue
        failing = [w for w in _consequences(strong) if flags[w] == Verdict.FAILS]
        if failing:
            flags[strong] = Verdict.UNDETERMINED
            notes.append(f"{strong} downgraded: {failing[0]} fails numerically")


def classify_frame(frame: PointFrame, sampler: Optional[PlaneSampler] = None,
                   tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Classify a frame; it is moved to an adapted orthonormal basis first."""
    sampler = sampler or PlaneSampler()
    if not np.allclose(frame.g, np.eye(frame.dim), atol=1e-14):
        frame = frame.orthonormal()
    dim, g, J, R = frame.dim, frame.g, frame.J, frame.R
    Rmax = max_abs(R)
    s = max(1.0, Rmax)
    s4, s5, s6 = s, s**1.5, s**2

    flags, fitted, residuals, notes = {}, {"c": None, "c_tilde": None, "L": None, "f": None}, {}, []

    residuals["flat"] = Rmax
    flags["flat"] = Verdict.HOLDS if Rmax < tol else Verdict.FAILS

    c, res = least_squares_scale(R, csc_pattern(g))
    residuals["csc"] = res
    flags["csc"] = Verdict.HOLDS if res < tol * s4 else Verdict.FAILS
    if flags["csc"] == Verdict.HOLDS:
        fitted["c"] = c

    c_tilde, res = least_squares_scale(R, pi_tensor(g, J))
    residuals["chsc"] = res
    flags["chsc"] = Verdict.HOLDS if res < tol * s4 else Verdict.FAILS
    if flags["chsc"] == Verdict.HOLDS:
        fitted["c_tilde"] = c_tilde

    if frame.nablaR is not None:
        residuals["locally_symmetric"] = max_abs(frame.nablaR)
        flags["locally_symmetric"] = (Verdict.HOLDS if residuals["locally_symmetric"] < tol * s5
                                      else Verdict.FAILS)
    else:
        flags["locally_symmetric"] = Verdict.UNDETERMINED

    generic = sampler(frame, "generic", 0)
    holo = sampler(frame, "holomorphic", 1)
    # planes drawn per mode (generic and holomorphic)
    samples_used = sampler.count

    if dim <= MATERIALIZE_MAX_DIM:
        RR, Q, Qc = compute_rr(frame), compute_tachibana(frame), compute_complex_tachibana(frame)
        full = {"rr": RR, "q": Q, "qc": Qc}
        gen_full = None
    else:
        gen_full = {k: plane_values(frame, k, *generic) for k in ("rr", "q", "qc")}
        hol_full = {k: plane_values(frame, k, *holo) for k in ("rr", "q", "qc")}
        full = {k: np.concatenate([gen_full[k], hol_full[k]]) for k in gen_full}
        notes.append("lazy plane evaluation: residuals over sampled planes only")

    residuals["tachibana"] = max_abs(full["q"])
    residuals["complex_tachibana"] = max_abs(full["qc"])
    residuals["semisymmetric"] = max_abs(full["rr"])
    flags["semisymmetric"] = Verdict.HOLDS if residuals["semisymmetric"] < tol * s6 else Verdict.FAILS
    in_U = residuals["tachibana"] > tol * s4

    if dim == 2:
        flags["deszcz_pseudosymmetric"] = Verdict.UNDETERMINED
        flags["holomorphically_pseudosymmetric"] = Verdict.UNDETERMINED
        residuals["deszcz_pseudosymmetric"] = 0.0
        residuals["holomorphically_pseudosymmetric"] = 0.0
        notes.append("pseudosymmetry undefined in real dimension 2")
    else:
        gen_rr = plane_values(frame, "rr", *generic)
        gen_q = plane_values(frame, "q", *generic)
        verdict, L, res, _ = fit_pseudosymmetry(gen_rr, gen_q, full["rr"], full["q"], s4, s6, tol)
        flags["deszcz_pseudosymmetric"], fitted["L"] = verdict, L
        residuals["deszcz_pseudosymmetric"] = res

        hol_rr = plane_values(frame, "rr", *holo)
        hol_qc = plane_values(frame, "qc", *holo)
        verdict, f, res, _ = fit_pseudosymmetry(hol_rr, hol_qc, full["rr"], full["qc"], s4, s6, tol)
        flags["holomorphically_pseudosymmetric"], fitted["f"] = verdict, f
        residuals["holomorphically_pseudosymmetric"] = res

    _enforce_chain(flags, notes)
    point = [] if frame.point is None else list(frame.point)
    return ClassificationReport(
        point=point,
        flags={k: flags[k] for k in FLAG_NAMES},
        fitted=fitted,
        residuals=residuals,
        samples_used=samples_used,
        tolerance=tol,
        in_U=bool(in_U),
        notes=notes,
    )


def classify_point(chart: Chart, p, sampler: Optional[PlaneSampler] = None,
                   tol: float = DEFAULT_TOL) -> ClassificationReport:
    return classify_frame(point_frame(chart, p), sampler, tol)
