import numpy as np
import pytest

from kaehlersym import verification as V
from kaehlersym.curvature import Plane, polynomial_curve
from kaehlersym.geometry import parse_manifold_id, point_frame, standard_J

from conftest import KAEHLER_IDS


def pts(chart, k=2, seed=0):
    return chart.sample_points(k, np.random.default_rng(seed))


def test_suite_ids_are_complete():
    assert set(V.SUITE_IDS) == {"ogiue", "j-symmetries", "prop-auxalg", "prop-auxalg2",
                                "chsc-equiv", "rotation-interp", "locsym", "semisym", "holps",
                                "pi-dot-pi"}


def test_ogiue_two_sided(charts):
    cpn = V.verify_ogiue(charts["cpn:n=2,c=4"], pts(charts["cpn:n=2,c=4"]))
    assert cpn.passed and cpn.property == "holds" and cpn.max_residual < 1e-9
    flat = V.verify_ogiue(charts["flat:n=2"], pts(charts["flat:n=2"]))
    assert flat.max_residual == 0.0
    s2 = V.verify_ogiue(charts["s2xs2"], pts(charts["s2xs2"]))
    assert s2.passed and s2.property == "fails"
    assert min(c["max_abs_R_X_JX_X_Y"] for c in s2.details) > 0.01


def test_ogiue_skips_real_dimension_two(charts):
    res = V.verify_ogiue(charts["chn:n=1,c=-4"], pts(charts["chn:n=1,c=-4"]))
    assert all("skipped" in c for c in res.details)


@pytest.mark.parametrize("mid", KAEHLER_IDS)
def test_j_symmetries_on_kaehler_charts(mid, charts):
    res = V.verify_j_symmetries(charts[mid], pts(charts[mid]), samples=200)
    assert res.passed and res.max_residual < 1e-9


def test_j_symmetries_control_fails(charts):
    res = V.verify_j_symmetries(charts["cpn-twisted"], pts(charts["cpn-twisted"]), samples=200)
    assert not res.passed and res.max_residual > 1e-3


@pytest.mark.parametrize("order,expected", [(6, 36), (5, 36)])
def test_prop_auxalg_dim4(order, expected):
    res = V.verify_prop_auxalg(4, order)
    d = res.details[0]
    assert res.passed and d["dim_W"] == expected and d["rank_E"] == expected


@pytest.mark.parametrize("order", [6, 5])
def test_prop_auxalg_needs_J_invariance(order):
    res = V.verify_prop_auxalg(4, order, drop="c")
    d = res.details[0]
    assert not res.passed and d["rank_E"] < d["dim_W"]
    assert d["witness_max_entry"] > 1e-3 and d["witness_on_holomorphic_args"] < 1e-8


def test_curvature_like_space_dimensions():
    J = standard_J(4)
    # Kaehler curvature tensors in complex dim n: (n(n+1)/2)^2; plain ones d^2(d^2-1)/12
    assert V.curvature_like_space(4, J).shape[0] == 9
    assert V.curvature_like_space(4, J, with_J=False).shape[0] == 20
    assert V.curvature_like_space(6, standard_J(6)).shape[0] == 36
    assert V.j_invariant_two_forms(4, J).shape[0] == 4


@pytest.mark.slow
def test_factored_space_matches_full_constraint_system():
    # unfactored (0,6) system on all 4^6 tensors
    assert V.full_constraint_nullity(4, standard_J(4)) == V.verify_prop_auxalg(4).details[0][
        "dim_W"]


def test_prop_auxalg_rejects_odd_dimension():
    with pytest.raises(ValueError):
        V.verify_prop_auxalg(5)


@pytest.mark.parametrize("mid,prop", [("flat:n=2", "holds"), ("cpn:n=2,c=4", "holds"),
                                      ("chn:n=1,c=-4", "holds"), ("s2xs2", "fails"),
                                      ("cpn-bump", "fails")])
def test_chsc_equivalences(mid, prop, charts):
    res = V.verify_chsc_equivalences(charts[mid], pts(charts[mid], 3))
    assert res.passed and res.property == prop


def test_rotation_interpretation_s2xs2(charts):
    chart = charts["s2xs2"]
    res = V.verify_rotation_interpretation(chart, pts(chart, 1)[0])
    d = res.details[0]
    assert res.passed and d["slope_checked"]
    assert abs(d["loglog_slope"] - 2.0) < 0.1
    assert abs(d["Qc"]) > 1e-3  # nontrivial first-order term


def test_rotation_interpretation_chsc_has_zero_first_order(charts):
    chart = charts["cpn:n=2,c=4"]
    res = V.verify_rotation_interpretation(chart, pts(chart, 1)[0])
    d = res.details[0]
    assert res.passed and abs(d["alpha_fit"]) < 1e-6 and d["D_at_zero"] == 0.0


def test_rotation_change_zero_at_zero_angle(charts):
    f = point_frame(charts["s2xs2"], np.zeros(4)).orthonormal()
    e = np.eye(4)
    assert V.rotated_curvature_change(f, e[0], e[2], e[1], e[3], 0.0) == 0.0


def test_rotation_interpretation_explicit_planes(charts):
    chart = charts["s2xs2:r1=1,r2=2"]
    e = np.eye(4)
    res = V.verify_rotation_interpretation(chart, np.array([0.1, 0.2, -0.3, 0.4]),
                                           Plane(e[0] + e[2], e[1]), Plane(e[0], e[3] + e[1]))
    assert res.passed


@pytest.mark.parametrize("mid", ["flat:n=2", "cpn:n=2,c=4", "chn:n=2,c=-4", "s2xs2"])
def test_locsym_on_symmetric_charts(mid, charts):
    chart = charts[mid]
    curves = V.random_curves(chart, 2, np.random.default_rng(0))
    res = V.verify_locsym_charac(chart, curves, samples=100)
    assert res.passed and res.property == "holds"
    assert res.details[0]["max_drift"] < 1e-7


def test_locsym_control_detected_by_both(charts):
    chart = charts["cpn-bump"]
    curves = V.random_curves(chart, 3, np.random.default_rng(0))
    res = V.verify_locsym_charac(chart, curves, samples=100)
    assert res.passed and res.property == "fails"
    assert res.details[0]["max_drift"] > 1e-4 and res.details[0]["max_b"] > 1e-3


def test_flat_transport_has_zero_drift(charts):
    chart = charts["flat:n=2"]
    curve = polynomial_curve(np.zeros(4), [np.ones(4)])
    d = V.holomorphic_transport_drift(chart, curve, np.random.default_rng(0))
    assert d["drift"] == 0.0


@pytest.mark.parametrize("mid,prop", [("s2xs2", "holds"), ("flat:n=2", "holds"),
                                      ("cpn-bump", "fails")])
def test_semisym(mid, prop, charts):
    res = V.verify_semisym_charac(charts[mid], pts(charts[mid]), samples=200)
    assert res.passed and res.property == prop


@pytest.mark.parametrize("mid", ["cpn:n=2,c=4", "s2xs2", "cpn-bump"])
def test_holps(mid, charts):
    res = V.verify_holps_charac(charts[mid], pts(charts[mid]), samples=300)
    assert res.passed
    for case in res.details:
        assert case["identities"]["qc_split"] < 1e-9 and case["identities"]["qc_holomorphic_first"] < 1e-9


def test_holps_semisymmetric_scalars_zero(charts):
    res = V.verify_holps_charac(charts["s2xs2"], pts(charts["s2xs2"]), samples=300)
    for case in res.details:
        assert case["f"] == 0.0 and case["semisym_max_L"] < 1e-8


def test_pi_dot_pi_suite():
    rng = np.random.default_rng(0)
    frames = [V.random_hermitian_frame(4, rng) for _ in range(5)]
    res = V.verify_pi_dot_pi(frames)
    assert res.passed and res.cases_run == 5


def test_suites_are_deterministic(charts):
    chart = charts["cpn-bump"]
    a = V.verify_semisym_charac(chart, pts(chart), samples=50, seed=4).to_dict()
    b = V.verify_semisym_charac(chart, pts(chart), samples=50, seed=4).to_dict()
    assert a == b


def test_suite_result_serializes_numpy():
    res = V.SuiteResult("ogiue", "x", 1, np.float64(0.5), 1e-9, np.bool_(False), None,
                        [{"point": np.zeros(2), "n": np.int64(3)}])
    d = res.to_dict()
    assert d["details"][0] == {"point": [0.0, 0.0], "n": 3}
    assert d["pass"] is False
