"""Chart-defined manifolds, metric jets and evaluated point frames.

Catalog manifolds are Kaehler manifolds given by a Kaehler potential on
``C^n`` with real coordinates ``(x0, y0, x1, y1, ...)``, ``z_k = x_k + i y_k``
and the standard complex structure. For a potential ``Phi`` with real
Hessian ``H`` the Kaehler metric is ``g = (H + J^T H J) / 4`` (so that
``Phi = |z|^2`` gives the identity), hence the metric jet to order 3 needs
derivatives of ``Phi`` up to order 5. Every potential is a sum of terms
``F(s)`` with ``s = |P(x - c)|^2`` quadratic, whose derivatives follow in
closed form from Faa di Bruno's formula.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .tensor_core import apply_to_slots


class DomainError(ValueError):
    """Point outside the chart domain (or a curve leaving it)."""


class NumericError(ArithmeticError):
    """Degenerate numerical data, e.g. a singular metric."""


class CatalogError(ValueError):
    """Malformed or unknown manifold id."""


@dataclass(frozen=True)
class MetricJet:
    """Metric and its partials at a point; derivative indices come last.

    ``dg[a, b, c] = d_c g_ab``, ``ddg[a, b, c, d] = d_c d_d g_ab`` and so on.
    """

    g: np.ndarray
    dg: np.ndarray
    ddg: Optional[np.ndarray] = None
    dddg: Optional[np.ndarray] = None


@dataclass(frozen=True)
class Chart:
    name: str
    dim: int
    metric_jet_fn: Callable[[np.ndarray, int], MetricJet]
    J_fn: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    in_domain: Callable[[np.ndarray], bool] = lambda p: True
    sample_radius: float = 1.0
    dJ_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise ValueError(f"chart dimension must be even and >= 2, got {self.dim}")

    @property
    def id(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())

    def check_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        if p.shape != (self.dim,):
            raise DomainError(f"{self.id}: point must have {self.dim} coordinates")
        if not np.all(np.isfinite(p)) or not self.in_domain(p):
            raise DomainError(f"{self.id}: point {p.tolist()} outside chart domain")
        return p

    def metric_jet(self, p, order: int = 3) -> MetricJet:
        return self.metric_jet_fn(self.check_point(p), order)

    def complex_structure(self, p) -> np.ndarray:
        return np.asarray(self.J_fn(self.check_point(p)), dtype=np.float64)

    def complex_structure_derivative(self, p, h: float = 1e-5) -> np.ndarray:
        """``dJ[a, b, c] = d_c J^a_b``; central differences unless supplied."""
        p = self.check_point(p)
        if self.dJ_fn is not None:
            return np.asarray(self.dJ_fn(p), dtype=np.float64)
        out = np.empty((self.dim,) * 3)
        for c in range(self.dim):
            e = np.zeros(self.dim)
            e[c] = h
            out[:, :, c] = (self.J_fn(p + e) - self.J_fn(p - e)) / (2 * h)
        return out

    def sample_points(self, count: int, rng: np.random.Generator) -> list[np.ndarray]:
        """Uniform samples from the ball of radius ``sample_radius`` inside the domain."""
        pts = []
        while len(pts) < count:
            d = rng.normal(size=self.dim)
            d *= self.sample_radius * rng.uniform() ** (1.0 / self.dim) / np.linalg.norm(d)
            if self.in_domain(d):
                pts.append(d)
        return pts


def _fmt(v) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def standard_J(dim: int) -> np.ndarray:
    """Multiplication by ``i``: ``J e_{2k} = e_{2k+1}``, ``J e_{2k+1} = -e_{2k}``."""
    J = np.zeros((dim, dim))
    for k in range(dim // 2):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


# ---------------------------------------------------------------------------
# Kaehler potentials


@dataclass(frozen=True)
class QuadraticTerm:
    """Potential term ``F(s)``, ``s = sum_{a in mask} (x_a - c_a)^2``.

    ``derivs(s, m)`` returns ``F^{(m)}(s)``.
    """

    derivs: Callable[[float, int], float]
    center: np.ndarray
    mask: np.ndarray

    def argument(self, x: np.ndarray) -> float:
        d = (x - self.center) * self.mask
        return float(d @ d)


def linear_profile(scale: float = 1.0):
    def derivs(s, m):
        return scale * s if m == 0 else (scale if m == 1 else 0.0)

    return derivs


def log_profile(scale: float, sign: float):
    """``F(s) = scale * log(1 + sign * s)``."""

    def derivs(s, m):
        u = 1.0 + sign * s
        if u <= 0:
            raise DomainError("potential argument outside log domain")
        if m == 0:
            return scale * math.log(u)
        return scale * (-1) ** (m - 1) * math.factorial(m - 1) * sign**m / u**m

    return derivs


def gaussian_profile(amplitude: float, width: float):
    """``F(s) = amplitude * exp(-s / width^2)``."""

    def derivs(s, m):
        return amplitude * (-1.0 / width**2) ** m * math.exp(-s / width**2)

    return derivs


@lru_cache(maxsize=None)
def _pairings(m: int) -> tuple:
    """All splits of slots ``0..m-1`` into disjoint pairs plus singletons."""
    out = []

    def rec(remaining, pairs):
        singles = tuple(s for s in range(m) if not any(s in pr for pr in pairs))
        out.append((tuple(pairs), singles))
        for i, a in enumerate(remaining):
            for b in remaining[i + 1:]:
                rest = tuple(s for s in remaining if s > a and s != b)
                rec(rest, pairs + [(a, b)])

    rec(tuple(range(m)), [])
    return tuple(out)


def potential_derivative(terms, x: np.ndarray, m: int) -> np.ndarray:
    """Dense ``m``-th derivative tensor of ``sum F(s(x))`` at ``x``."""
    dim = x.shape[0]
    out = np.zeros((dim,) * m)
    for term in terms:
        s = term.argument(x)
        y = 2.0 * (x - term.center) * term.mask
        P2 = 2.0 * np.diag(term.mask)
        for pairs, singles in _pairings(m):
            coeff = term.derivs(s, len(pairs) + len(singles))
            if coeff == 0.0:
                continue
            if m == 0:
                out = out + coeff
                continue
            operands = []
            for a, b in pairs:
                operands += [P2, [a, b]]
            for a in singles:
                operands += [y, [a]]
            out += coeff * np.einsum(*operands, list(range(m)))
    return out


def _kaehler_part(T: np.ndarray, J: np.ndarray) -> np.ndarray:
    return (T + apply_to_slots(T, J, (0, 1))) / 4.0


def potential_metric_jet(terms, J: np.ndarray) -> Callable[[np.ndarray, int], MetricJet]:
    def jet(x, order=3):
        g = _kaehler_part(potential_derivative(terms, x, 2), J)
        dg = _kaehler_part(potential_derivative(terms, x, 3), J)
        ddg = _kaehler_part(potential_derivative(terms, x, 4), J) if order >= 2 else None
        dddg = _kaehler_part(potential_derivative(terms, x, 5), J) if order >= 3 else None
        return MetricJet(g, dg, ddg, dddg)

    return jet


def potential_chart(name, dim, terms, params, in_domain=lambda p: True, sample_radius=1.0,
                    J_fn=None, dJ_fn=None) -> Chart:
    J = standard_J(dim)
    if J_fn is None:
        J_fn = lambda p: J  # noqa: E731
        dJ_fn = lambda p: np.zeros((dim,) * 3)  # noqa: E731
    return Chart(
        name=name,
        dim=dim,
        metric_jet_fn=potential_metric_jet(tuple(terms), J),
        J_fn=J_fn,
        dJ_fn=dJ_fn,
        params=dict(params),
        in_domain=in_domain,
        sample_radius=sample_radius,
    )


def _radial_term(dim, derivs, center=None, mask=None):
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=np.float64)
    mask = np.ones(dim) if mask is None else np.asarray(mask, dtype=np.float64)
    return QuadraticTerm(derivs, center, mask)


# ---------------------------------------------------------------------------
# Catalog


def catalog_flat(n: int) -> Chart:
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = 2 * n
    return potential_chart("flat", dim, [_radial_term(dim, linear_profile())], {"n": n},
                           sample_radius=2.0)


def _space_form_terms(dim, c_tilde):
    return [_radial_term(dim, log_profile(4.0 / c_tilde, math.copysign(1.0, c_tilde)))]


def catalog_fubini_study(n: int, c_tilde: float) -> Chart:
    """``CP^n`` in the affine chart, holomorphic sectional curvature ``c_tilde``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not c_tilde > 0:
        raise ValueError("Fubini-Study needs c_tilde > 0; use the complex hyperbolic chart")
    dim = 2 * n
    return potential_chart("cpn", dim, _space_form_terms(dim, c_tilde),
                           {"n": n, "c": float(c_tilde)}, sample_radius=2.0)


def catalog_complex_hyperbolic(n: int, c_tilde: float) -> Chart:
    """Ball model of ``CH^n`` with holomorphic sectional curvature ``c_tilde < 0``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not c_tilde < 0:
        raise ValueError("complex hyperbolic space needs c_tilde < 0")
    dim = 2 * n
    return potential_chart("chn", dim, _space_form_terms(dim, c_tilde),
                           {"n": n, "c": float(c_tilde)},
                           in_domain=lambda p: float(p @ p) < 1.0, sample_radius=0.9)


def catalog_product_spheres(r1: float, r2: float) -> Chart:
    """``S^2(r1) x S^2(r2)``, each factor a ``CP^1`` in a stereographic chart."""
    if not (r1 > 0 and r2 > 0):
        raise ValueError("radii must be positive")
    terms = [
        _radial_term(4, log_profile(4.0 * r1**2, 1.0), mask=[1, 1, 0, 0]),
        _radial_term(4, log_profile(4.0 * r2**2, 1.0), mask=[0, 0, 1, 1]),
    ]
    return potential_chart("s2xs2", 4, terms, {"r1": float(r1), "r2": float(r2)},
                           sample_radius=2.0)


def catalog_bump(n: int = 2, c_tilde: float = 4.0, delta: float = 0.3,
                 width: float = 0.7, shift: float = 0.3) -> Chart:
    """Fubini-Study potential plus a Gaussian bump; Kaehler but not locally symmetric."""
    if n < 1 or not c_tilde > 0 or width <= 0:
        raise ValueError("invalid bump parameters")
    dim = 2 * n
    center = np.zeros(dim)
    center[0] = shift
    terms = _space_form_terms(dim, c_tilde) + [
        _radial_term(dim, gaussian_profile(delta, width), center=center)
    ]
    return potential_chart("cpn-bump", dim, terms,
                           {"n": n, "c": float(c_tilde), "delta": float(delta),
                            "width": float(width), "shift": float(shift)},
                           sample_radius=0.8)


def _sqrtm_spd(g):
    w, V = np.linalg.eigh(g)
    return (V * np.sqrt(w)) @ V.T, (V / np.sqrt(w)) @ V.T


def catalog_twisted(n: int = 2, c_tilde: float = 4.0) -> Chart:
    """Fubini-Study metric with a g-orthogonal almost complex structure that is not parallel.

    ``J' = g^{-1/2} J0 g^{1/2}`` with ``J0`` the standard structure reversed on
    the second complex line. Negative control for the Kaehler identities.
    """
    if n < 2:
        raise ValueError("twisted structure needs n >= 2")
    base = catalog_fubini_study(n, c_tilde)
    dim = 2 * n
    J0 = standard_J(dim)
    J0[2:4, 2:4] *= -1.0

    def J_fn(p):
        half, half_inv = _sqrtm_spd(base.metric_jet_fn(p, 1).g)
        return half_inv @ J0 @ half

    return Chart(name="cpn-twisted", dim=dim, metric_jet_fn=base.metric_jet_fn, J_fn=J_fn,
                 params={"n": n, "c": float(c_tilde)}, sample_radius=2.0)


CATALOG = {
    "flat": {
        "factory": lambda n=2: catalog_flat(int(n)),
        "params": {"n": "int >= 1"},
        "defaults": {"n": 2},
        "truth": "flat (all flags hold)",
    },
    "cpn": {
        "factory": lambda n=2, c=4.0: catalog_fubini_study(int(n), float(c)),
        "params": {"n": "int >= 1", "c": "float > 0"},
        "defaults": {"n": 2, "c": 4.0},
        "truth": "constant holomorphic sectional curvature c; locally symmetric; not csc for n >= 2",
    },
    "chn": {
        "factory": lambda n=1, c=-4.0: catalog_complex_hyperbolic(int(n), float(c)),
        "params": {"n": "int >= 1", "c": "float < 0"},
        "defaults": {"n": 1, "c": -4.0},
        "truth": "constant holomorphic sectional curvature c (< 0); locally symmetric",
    },
    "s2xs2": {
        "factory": lambda r1=1.0, r2=1.0: catalog_product_spheres(float(r1), float(r2)),
        "params": {"r1": "float > 0", "r2": "float > 0"},
        "defaults": {"r1": 1.0, "r2": 1.0},
        "truth": "locally symmetric, semisymmetric, not chsc (L = f = 0)",
    },
    "cpn-bump": {
        "factory": lambda n=2, c=4.0, delta=0.3, width=0.7, shift=0.3: catalog_bump(
            int(n), float(c), float(delta), float(width), float(shift)),
        "params": {"n": "int >= 1", "c": "float > 0", "delta": "float", "width": "float > 0",
                   "shift": "float"},
        "defaults": {"n": 2, "c": 4.0},
        "truth": "control: Kaehler, not locally symmetric, not semisymmetric",
    },
    "cpn-twisted": {
        "factory": lambda n=2, c=4.0: catalog_twisted(int(n), float(c)),
        "params": {"n": "int >= 2", "c": "float > 0"},
        "defaults": {"n": 2, "c": 4.0},
        "truth": "control: Hermitian but not Kaehler (J not parallel)",
    },
}

_ID_RE = re.compile(r"^([a-z0-9\-]+)(?::(.*))?$")


def parse_manifold_id(text: str) -> Chart:
    """Build a catalog chart from ids like ``"cpn:n=2,c=4"``."""
    m = _ID_RE.match(text.strip())
    if not m or m.group(1) not in CATALOG:
        raise CatalogError(f"unknown manifold id {text!r}; known: {', '.join(CATALOG)}")
    entry = CATALOG[m.group(1)]
    kwargs = {}
    if m.group(2):
        for item in m.group(2).split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in entry["params"]:
                raise CatalogError(f"bad parameter {item!r} for {m.group(1)}")
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise CatalogError(f"parameter {key} is not a number: {value!r}") from None
    try:
        return entry["factory"](**kwargs)
    except ValueError as exc:
        raise CatalogError(str(exc)) from None


# ---------------------------------------------------------------------------
# Point frames


@dataclass(frozen=True)
class PointFrame:
    """Geometric data at one point, in the basis ``basis`` (columns, chart components).

    ``christoffel[k, i, j] = Gamma^k_ij``; ``R[i, j, k, l] = g(R(e_i, e_j) e_k, e_l)``;
    ``nablaR[i, j, k, l, m] = (nabla_{e_m} R)(e_i, e_j, e_k, e_l)``.
    Connection data is only present in the chart basis.
    """

    g: np.ndarray
    ginv: np.ndarray
    J: np.ndarray
    R: np.ndarray
    nablaR: Optional[np.ndarray] = None
    christoffel: Optional[np.ndarray] = None
    dchristoffel: Optional[np.ndarray] = None
    nablaJ: Optional[np.ndarray] = None
    point: Optional[np.ndarray] = None
    chart_id: str = ""

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def endomorphism(self, x, y) -> np.ndarray:
        """Matrix of ``z -> R(x, y) z``."""
        return self.ginv @ np.einsum("ijkl,i,j->lk", self.R, x, y)

    def adapted_basis(self) -> np.ndarray:
        """g-orthonormal basis ``(f0, J f0, f1, J f1, ...)`` as columns."""
        dim = self.dim
        cols = []
        for c in range(dim):
            if len(cols) == dim:
                break
            v = np.zeros(dim)
            v[c] = 1.0
            for e in cols:
                v = v - (e @ self.g @ v) * e
            nv = math.sqrt(max(v @ self.g @ v, 0.0))
            if nv < 1e-8:
                continue
            v = v / nv
            w = self.J @ v
            for e in cols:
                w = w - (e @ self.g @ w) * e
            w = w / math.sqrt(w @ self.g @ w)
            cols += [v, w]
        return np.column_stack(cols)

    def orthonormal(self) -> "PointFrame":
        """The same frame expressed in :meth:`adapted_basis` (``g = I``)."""
        from .tensor_core import transform

        E = self.adapted_basis()
        Einv = np.linalg.solve(E, np.eye(self.dim))
        return PointFrame(
            g=np.eye(self.dim),
            ginv=np.eye(self.dim),
            J=Einv @ self.J @ E,
            R=transform(self.R, E),
            nablaR=None if self.nablaR is None else transform(self.nablaR, E),
            point=self.point,
            chart_id=self.chart_id,
        )


def algebraic_frame(g, J, R=None, nablaR=None) -> PointFrame:
    """Frame from algebraic data only (no chart, no connection)."""
    g = np.asarray(g, dtype=np.float64)
    dim = g.shape[0]
    R = np.zeros((dim,) * 4) if R is None else np.asarray(R, dtype=np.float64)
    return PointFrame(g=g, ginv=np.linalg.inv(g), J=np.asarray(J, dtype=np.float64), R=R,
                      nablaR=nablaR)


def christoffel_symbols(jet: MetricJet, ginv: np.ndarray) -> np.ndarray:
    dg = jet.dg
    gamma1 = 0.5 * (np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg))
    return np.einsum("kl,lij->kij", ginv, gamma1)


def point_frame(chart: Chart, p) -> PointFrame:
    p = chart.check_point(p)
    jet = chart.metric_jet(p, 3)
    g, dg, ddg, dddg = jet.g, jet.dg, jet.ddg, jet.dddg
    if not np.all(np.isfinite(g)):
        raise NumericError(f"{chart.id}: non-finite metric at {p.tolist()}")
    w = np.linalg.eigvalsh(0.5 * (g + g.T))
    if w[0] <= 1e-12 * max(abs(w[-1]), 1e-300):
        raise NumericError(f"{chart.id}: metric singular or indefinite at {p.tolist()}")
    ginv = np.linalg.inv(g)

    # Christoffel symbols of the first kind and their partials
    g1 = 0.5 * (np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg))
    dg1 = 0.5 * (np.einsum("jlim->lijm", ddg) + np.einsum("iljm->lijm", ddg)
                 - np.einsum("ijlm->lijm", ddg))
    ddg1 = 0.5 * (np.einsum("jlimn->lijmn", dddg) + np.einsum("iljmn->lijmn", dddg)
                  - np.einsum("ijlmn->lijmn", dddg))

    # d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
    dginv = -np.einsum("ka,abm,bl->klm", ginv, dg, ginv)
    Gm = np.einsum("ka,abm->kbm", ginv, dg)  # g^{-1} A_m
    ddginv = (
        np.einsum("kbn,bcm,cl->klmn", Gm, Gm, ginv)
        + np.einsum("kbm,bcn,cl->klmn", Gm, Gm, ginv)
        - np.einsum("ka,abmn,bl->klmn", ginv, ddg, ginv)
    )

    gam = np.einsum("kl,lij->kij", ginv, g1)
    dgam = np.einsum("klm,lij->kijm", dginv, g1) + np.einsum("kl,lijm->kijm", ginv, dg1)
    ddgam = (
        np.einsum("klmn,lij->kijmn", ddginv, g1)
        + np.einsum("klm,lijn->kijmn", dginv, dg1)
        + np.einsum("kln,lijm->kijmn", dginv, dg1)
        + np.einsum("kl,lijmn->kijmn", ginv, ddg1)
    )

    # R^l_{ijk}
    Rup = (
        np.einsum("ljki->lijk", dgam)
        - np.einsum("likj->lijk", dgam)
        + np.einsum("lip,pjk->lijk", gam, gam)
        - np.einsum("ljp,pik->lijk", gam, gam)
    )
    dRup = (
        np.einsum("ljkim->lijkm", ddgam)
        - np.einsum("likjm->lijkm", ddgam)
        + np.einsum("lipm,pjk->lijkm", dgam, gam)
        + np.einsum("lip,pjkm->lijkm", gam, dgam)
        - np.einsum("ljpm,pik->lijkm", dgam, gam)
        - np.einsum("ljp,pikm->lijkm", gam, dgam)
    )
    R = np.einsum("wl,lijk->ijkw", g, Rup)
    dR = np.einsum("wlm,lijk->ijkwm", dg, Rup) + np.einsum("wl,lijkm->ijkwm", g, dRup)
    nablaR = (
        dR
        - np.einsum("pmi,pjkw->ijkwm", gam, R)
        - np.einsum("pmj,ipkw->ijkwm", gam, R)
        - np.einsum("pmk,ijpw->ijkwm", gam, R)
        - np.einsum("pmw,ijkp->ijkwm", gam, R)
    )

    J = chart.complex_structure(p)
    dJ = chart.complex_structure_derivative(p)
    nablaJ = dJ + np.einsum("amp,pb->abm", gam, J) - np.einsum("pmb,ap->abm", gam, J)

    frame = PointFrame(
        g=g, ginv=ginv, J=J, R=R, nablaR=nablaR, christoffel=gam, dchristoffel=dgam,
        nablaJ=nablaJ, point=p, chart_id=chart.id,
    )
    for arr in (g, ginv, J, R, nablaR, gam, dgam, nablaJ):
        arr.setflags(write=False)
    if not (np.all(np.isfinite(R)) and np.all(np.isfinite(nablaR))):
        raise NumericError(f"{chart.id}: non-finite curvature at {p.tolist()}")
    return frame


def kaehler_residuals(frame: PointFrame) -> dict:
    """Max violations of J^2 = -I, g(JX, JY) = g(X, Y) and nabla J = 0."""
    J, g, dim = frame.J, frame.g, frame.dim
    out = {
        "J2": float(np.max(np.abs(J @ J + np.eye(dim)))),
        "hermitian": float(np.max(np.abs(J.T @ g @ J - g))),
    }
    if frame.nablaJ is not None:
        out["nablaJ"] = float(np.max(np.abs(frame.nablaJ)))
    return out

