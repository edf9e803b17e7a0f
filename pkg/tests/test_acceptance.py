"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time

import numpy as np
import pytest

from kaehlersym import verification as V
from kaehlersym.classification import (
    PlaneSampler,
    classify_point,
    curvature_dependent,
    double_sectional_curvature,
    sample_planes,
)
from kaehlersym.geometry import parse_manifold_id, point_frame
from kaehlersym.symmetry_tensors import (
    compute_complex_tachibana,
    compute_pi_dot_pi,
    compute_rr,
    compute_tachibana,
    tensor_plane_values,
)
from kaehlersym.tensor_core import max_abs

KAEHLER = ["flat:n=2", "cpn:n=2,c=4", "chn:n=1,c=-4", "chn:n=2,c=-4", "s2xs2",
           "s2xs2:r1=1,r2=2", "cpn-bump"]
LOCALLY_SYMMETRIC = ["flat:n=2", "cpn:n=2,c=4", "chn:n=1,c=-4", "chn:n=2,c=-4", "s2xs2",
                     "s2xs2:r1=1,r2=2"]
SEMISYMMETRIC = ["cpn:n=2,c=4", "chn:n=2,c=-4", "s2xs2", "s2xs2:r1=1,r2=2"]


@pytest.fixture
def report(capsys):
    def _report(k, ok, msg):
        with capsys.disabled():
            print(f"\nCRITERION {k:>2}: {'PASS' if ok else 'FAIL'}  {msg}")
        return ok

    return _report


def points(mid, count, seed=2024):
    chart = parse_manifold_id(mid)
    return chart, chart.sample_points(count, np.random.default_rng(seed))


def test_criterion_01_chsc_reproduction(report):
    t0 = time.perf_counter()
    worst_c, worst_q = 0.0, 0.0
    for mid, c in (("cpn:n=2,c=4", 4.0), ("chn:n=1,c=-4", -4.0)):
        chart, ps = points(mid, 20)
        for p in ps:
            rep = classify_point(chart, p)
            worst_c = max(worst_c, abs(rep.fitted["c_tilde"] - c))
            f = point_frame(chart, p).orthonormal()
            worst_q = max(worst_q, max_abs(compute_complex_tachibana(f)) / max_abs(f.R) ** 2)
    elapsed = time.perf_counter() - t0
    ok = worst_c < 1e-7 and worst_q < 1e-8 and elapsed < 10
    assert report(1, ok, f"max|c~ - c| = {worst_c:.2e}, max|Qc|/max|R|^2 = {worst_q:.2e}, "
                         f"{elapsed:.1f} s")


def test_criterion_02_chsc_four_way_agreement(report):
    props, ok = {}, True
    for mid in KAEHLER:
        chart, ps = points(mid, 20)
        res = V.verify_chsc_equivalences(chart, ps, seed=2)
        ok &= res.passed
        props[mid] = res.property
    ok &= props["s2xs2"] == "fails" and props["cpn:n=2,c=4"] == "holds"
    assert report(2, ok, "verdicts agree on all charts: " + ", ".join(
        f"{k}={v}" for k, v in props.items()))


def test_criterion_03_semisymmetric_test_bed(report):
    worst_nr, worst_rr, min_qc = 0.0, 0.0, np.inf
    for mid in ("s2xs2:r1=1,r2=1", "s2xs2:r1=1,r2=2"):
        chart, ps = points(mid, 20)
        for p in ps:
            f = point_frame(chart, p).orthonormal()
            worst_nr = max(worst_nr, max_abs(f.nablaR))
            worst_rr = max(worst_rr, max_abs(compute_rr(f)) / max_abs(f.R) ** 2)
            min_qc = min(min_qc, max_abs(compute_complex_tachibana(f)))
    ok = worst_nr < 1e-8 and worst_rr < 1e-8 and min_qc > 1e-3
    assert report(3, ok, f"max|nablaR| = {worst_nr:.2e}, max|R.R|/max|R|^2 = {worst_rr:.2e}, "
                         f"min over points of max|Qc| = {min_qc:.3f}")


def test_criterion_04_tachibana_identities(report):
    worst_split, worst_first, worst_second = 0.0, 0.0, 0.0
    for mid in KAEHLER:
        chart, ps = points(mid, 1)
        f = point_frame(chart, ps[0]).orthonormal()
        Q, Qc = compute_tachibana(f), compute_complex_tachibana(f)
        gen = sample_planes(f, 1000, "generic", seed=5)
        hol = sample_planes(f, 1000, "holomorphic", seed=6)
        v, w, x, y = (np.array([getattr(pp[i // 2], "vw"[i % 2]) for pp in gen])
                      for i in range(4))
        hv, hw, hx, hy = (np.array([getattr(pp[i // 2], "vw"[i % 2]) for pp in hol])
                          for i in range(4))
        J = f.J.T
        worst_split = max(worst_split, max_abs(tensor_plane_values(Qc, v, w, x, y)
                                       - tensor_plane_values(Q, v, w, x, y)
                                       - tensor_plane_values(Q, v, w, x @ J, y @ J)))
        worst_first = max(worst_first, max_abs(tensor_plane_values(Qc, hv, hw, x, y)
                                       - 2 * tensor_plane_values(Q, hv, hw, x, y)))
        worst_second = max(worst_second, max_abs(tensor_plane_values(Qc, v, w, hx, hy)
                                       - 2 * tensor_plane_values(Q, v, w, hx, hy)))
    ok = max(worst_split, worst_first, worst_second) < 1e-9
    assert report(4, ok, f"1000 pairs per chart: Qc split {worst_split:.2e}, Qc hol. first {worst_first:.2e}, "
                         f"Qc hol. second {worst_second:.2e}")


def test_criterion_05_pi_dot_pi(report):
    frames = []
    for mid in KAEHLER + ["cpn-twisted"]:
        chart, ps = points(mid, 5)
        frames += [point_frame(chart, p).orthonormal() for p in ps]
    rng = np.random.default_rng(55)
    random_frames = [V.random_hermitian_frame(d, rng) for d in (2, 4, 6) for _ in range(17)][:50]
    cat = max(max_abs(compute_pi_dot_pi(f)) for f in frames)
    rnd = max(max_abs(compute_pi_dot_pi(f)) for f in random_frames)
    ok = cat < 1e-12 and rnd < 1e-12 and len(random_frames) == 50
    assert report(5, ok, f"catalog frames {cat:.2e}, 50 random Hermitian frames {rnd:.2e}")


def test_criterion_06_j_symmetries(report):
    worst = 0.0
    ok = True
    for mid in KAEHLER:
        chart, ps = points(mid, 1)
        res = V.verify_j_symmetries(chart, ps, samples=1000, tol=1e-9, seed=6)
        ok &= res.passed
        worst = max(worst, res.max_residual)
    chart, ps = points("cpn-twisted", 1)
    control = V.verify_j_symmetries(chart, ps, samples=1000, tol=1e-9, seed=6)
    ok &= not control.passed
    assert report(6, ok, f"max residual {worst:.2e} on Kaehler charts; non-Kaehler control "
                         f"residual {control.max_residual:.2e} (suite fails)")


def test_criterion_07_rank_certification(report):
    msgs, ok = [], True
    for order in (6, 5):
        for dim in (4, 6):
            t0 = time.perf_counter()
            res = V.verify_prop_auxalg(dim, order)
            elapsed = time.perf_counter() - t0
            d = res.details[0]
            ok &= res.passed and d["rank_E"] == d["dim_W"] and elapsed < 60
            msgs.append(f"(0,{order}) dim {dim}: rank {d['rank_E']}/{d['dim_W']} "
                        f"{elapsed:.1f}s")
        ctrl = V.verify_prop_auxalg(4, order, drop="c")
        dc = ctrl.details[0]
        ok &= (not ctrl.passed) and dc["rank_E"] < dc["dim_W"]
        msgs.append(f"(0,{order}) relaxed: rank {dc['rank_E']}/{dc['dim_W']}")
    assert report(7, ok, "; ".join(msgs))


def test_criterion_08_rotation_interpretation(report):
    msgs, ok = [], True
    for mid in ("s2xs2", "s2xs2:r1=1,r2=2"):
        chart, ps = points(mid, 3)
        for i, p in enumerate(ps):
            res = V.verify_rotation_interpretation(chart, p, seed=i,
                                                   epsilons=(1e-2, 1e-3, 1e-4, 1e-5))
            d = res.details[0]
            ok &= res.passed and d["abs_error"] < 1e-6 and d["slope_checked"]
            ok &= abs(d["loglog_slope"] - 2.0) <= 0.1
            msgs.append(f"|alpha-Qc|={d['abs_error']:.1e} slope={d['loglog_slope']:.3f}")
    assert report(8, ok, "; ".join(msgs))


def test_criterion_09_transport_drift(report):
    ok, worst = True, 0.0
    for k, mid in enumerate(LOCALLY_SYMMETRIC):
        chart = parse_manifold_id(mid)
        curves = V.random_curves(chart, 10, np.random.default_rng([9, k]), steps=200)
        res = V.verify_locsym_charac(chart, curves, tol=1e-7, seed=k)
        ok &= res.passed and res.property == "holds"
        worst = max(worst, res.details[0]["max_drift"])
    bump = parse_manifold_id("cpn-bump")
    curves = V.random_curves(bump, 10, np.random.default_rng(99), steps=200)
    res = V.verify_locsym_charac(bump, curves, tol=1e-7, seed=9)
    summary = res.details[0]
    ok &= worst < 1e-7
    ok &= res.passed and res.property == "fails"
    ok &= summary["max_drift"] > 1e-4 and summary["verdicts"]["b_holomorphic"] == "fails"
    assert report(9, ok, f"max drift {worst:.2e} on symmetric charts; deformation drift "
                         f"{summary['max_drift']:.2e}, holomorphic nablaR witness "
                         f"{summary['max_b']:.2e}, detectors agree={res.passed}")


def test_criterion_10_double_sectional_curvatures(report):
    ok = True
    worst_L, n_defined = 0.0, 0
    for mid in SEMISYMMETRIC:
        chart, ps = points(mid, 3)
        for p in ps:
            f = point_frame(chart, p).orthonormal()
            RR, Q = compute_rr(f), compute_tachibana(f)
            for pi, pibar in sample_planes(f, 300, "generic", seed=10):
                if curvature_dependent(Q, pi, pibar):
                    n_defined += 1
                    worst_L = max(worst_L, abs(double_sectional_curvature(RR, Q, pi, pibar)))
    ok &= worst_L < 1e-8 and n_defined > 0

    implication_ok, n_reports = True, 0
    for mid in KAEHLER + ["cpn:n=3,c=2"]:
        chart, ps = points(mid, 5)
        for p in ps:
            rep = classify_point(chart, p, PlaneSampler(300))
            n_reports += 1
            if rep.holds("deszcz_pseudosymmetric"):
                implication_ok &= rep.holds("holomorphically_pseudosymmetric")
    ok &= implication_ok

    worst_ratio = 0.0
    for mid in KAEHLER:
        chart, ps = points(mid, 2)
        for p in ps:
            f = point_frame(chart, p).orthonormal()
            if f.dim < 4:
                continue
            c = V.holps_point_checks(f, 500, np.random.default_rng(11), 1e-9)
            worst_ratio = max(worst_ratio, c["L_Q_minus_2L_Qc"])
    ok &= worst_ratio < 1e-9
    assert report(10, ok, f"max|L| = {worst_L:.2e} over {n_defined} defined pairs; "
                          f"implication holds on {n_reports} reports={implication_ok}; "
                          f"max|L_Q - 2 L_Qc| = {worst_ratio:.2e}")


def test_criterion_11_reproducibility(report):
    cmd = [sys.executable, "-m", "kaehlersym", "verify", "--suite", "all", "--seed", "1",
           "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    ok = first.stdout == second.stdout and first.returncode == 0 and len(first.stdout) > 0
    assert report(11, ok, f"{len(first.stdout)} bytes, identical={first.stdout == second.stdout}, "
                          f"exit codes {first.returncode}/{second.returncode}")
