import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import REF_YEOH
from dualchar.constitutive import Yeoh3
from dualchar.curves import Curve, resample
from dualchar.exceptions import (
    CurveError,
    DegenerateNormalizationError,
    ExtrapolationError,
    ParameterError,
)
from dualchar.fitting import (
    FitResult,
    FitScenario,
    combined_nmse,
    evaluate_sweep,
    generalize,
    nmse,
    select_all,
    select_best,
)
from dualchar.forward import MotionProfile, SimCurves, SpecimenGeometry, simulate
from dualchar.pipeline import synth_experiment
from dualchar.sampling import latin_hypercube, published_region
from dualchar.stability import filter_stable

GEOM = SpecimenGeometry()
PROFILE = MotionProfile(depth_samples=41, twist_samples=37)
OGDEN_SPOT_SUMS = (0.1271, 0.1043, 0.1034, 0.1254)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def brute_best(results, key):
    best = None
    for r in results:
        v = getattr(r, key)
        if best is None or v < getattr(best, key) or (v == getattr(best, key)
                                                      and r.set_index < best.set_index):
            best = r
    return best


def make_results(fs, ts):
    return [FitResult(REF_YEOH, f, t, i) for i, (f, t) in enumerate(zip(fs, ts))]


# curves and resampling

def test_curve_validation():
    with pytest.raises(CurveError):
        Curve([0.0], [1.0])
    with pytest.raises(CurveError):
        Curve([0.0, 1.0, 1.0], [0, 1, 2])
    with pytest.raises(CurveError):
        Curve([0.0, 2.0, 1.0], [0, 1, 2])
    c = Curve([3.0, 2.0, 1.0], [0, 1, 2])
    assert len(c) == 3
    with pytest.raises(ValueError):
        c.y[0] = 5.0


def test_resample_examples():
    c = Curve([0.0, 10.0], [0.0, 10.0])
    assert resample(c, [5.0]).points == [(5.0, 5.0)]
    assert resample(c, c.x).equals(c)
    with pytest.raises(ExtrapolationError, match="11"):
        resample(c, [11.0])


def test_resample_decreasing_abscissae():
    c = Curve([22.5, 0.0, -22.5], [3.0, 0.0, -3.0])
    np.testing.assert_allclose(resample(c, [11.25, -11.25]).y, [1.5, -1.5])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 100, allow_nan=False), min_size=2, max_size=30, unique=True),
       st.integers(0, 2**31))
def test_resample_exact_at_nodes(xs, seed):
    x = np.sort(np.array(xs))
    y = np.random.default_rng(seed).normal(size=x.size)
    c = Curve(x, y)
    np.testing.assert_array_equal(resample(c, x).y, y)


# nmse

def test_nmse_examples():
    e = Curve([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    assert nmse(e, e) == 0.0
    assert nmse(Curve(e.x, [2.0, 2.0, 2.0]), e) == 1.0
    sim, exp = Curve(e.x, [1.0, 2.0, 4.0]), Curve(e.x, [2.0, 2.0, 3.0])
    assert nmse(sim.scaled(3.7), exp.scaled(3.7)) == pytest.approx(nmse(sim, exp), rel=1e-12)


def test_nmse_hand_value():
    # mean((s-e)^2) = (1 + 0 + 9)/3, mean(e) = 2
    assert nmse([1.0, 2.0, 5.0], [2.0, 2.0, 2.0]) == pytest.approx(10.0 / 3.0 / 4.0, rel=1e-15)


def test_nmse_zero_mean():
    e = [-1.0, 0.0, 1.0]
    with pytest.raises(DegenerateNormalizationError):
        nmse([0.0, 0.0, 0.0], e)
    # guardrail: mean magnitude 2/3 replaces the vanishing mean
    assert nmse([0.0, 0.0, 0.0], e, zero_mean_tol=0.1) == pytest.approx((2 / 3) / (2 / 3) ** 2)
    with pytest.raises(DegenerateNormalizationError):
        nmse([1.0, 1.0], [0.0, 0.0], zero_mean_tol=0.1)


def test_nmse_shape_checks():
    with pytest.raises(ParameterError):
        nmse([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ParameterError):
        nmse(Curve([0, 1], [1, 1]), Curve([0, 2], [1, 1]))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=2, max_size=40),
       st.floats(1e-3, 1e3).flatmap(lambda m: st.sampled_from([m, -m])))
def test_nmse_scale_invariance(pairs, k):
    s = np.array([p[0] for p in pairs])
    e = np.array([p[1] for p in pairs])
    assume(abs(e.mean()) > 1e-6 * (1 + np.max(np.abs(e))))
    base = nmse(s, e)
    assert nmse(k * s, k * e) == pytest.approx(base, rel=1e-12, abs=1e-300)
    assert base >= 0
    assert nmse(e, e) == 0.0


# combined objective

def test_combined_identity_and_additivity():
    f = Curve([0.0, 5.0, 10.0], [0.0, 1.0, 2.0])
    t = Curve([-10.0, 0.0, 10.0], [-1.0, 0.0, 2.0])
    assert combined_nmse(SimCurves(f, t), f, t) == (0.0, 0.0, 0.0)

    f_sim = Curve(f.x, f.y + np.array([0.0, 0.0, np.sqrt(3 * 0.1)]))
    # mean(t) = 1/3, so an error e at one point gives (e^2/3) / (1/9)
    t_sim = Curve(t.x, t.y + np.array([0.0, np.sqrt(0.02 / 3), 0.0]))
    nf, nt, total = combined_nmse(SimCurves(f_sim, t_sim), f, t)
    assert nf == pytest.approx(0.1)
    assert nt == pytest.approx(0.02 / 9 / (1 / 9))
    assert total == pytest.approx(0.12)
    assert total == nf + nt

    t_sim2 = Curve(t.x, t.y + 2 * (t_sim.y - t.y))
    nf2, nt2, _ = combined_nmse(SimCurves(f_sim, t_sim2), f, t)
    assert nf2 == nf
    assert nt2 == pytest.approx(4 * nt)


def test_combined_resamples_dense_sim():
    sim = simulate(REF_YEOH, GEOM, PROFILE)
    exp_f = resample(sim.force_curve, np.linspace(0, 10, 7))
    exp_t = resample(sim.torque_curve, np.linspace(-20, 20, 9))
    nf, nt, _ = combined_nmse(sim, exp_f, exp_t)
    assert nf == 0.0 and nt == 0.0


def test_fit_result_sum():
    r = FitResult(REF_YEOH, 0.1, 0.02, 0)
    assert r.nmse_sum == 0.1 + 0.02
    assert r.score(FitScenario.SUM_BOTH) == r.nmse_sum
    assert r.score(FitScenario.TORQUE_ONLY) == 0.02
    assert r.score(FitScenario.FORCE_ONLY) == 0.1


# scenario selection

def test_scenario_parse():
    assert FitScenario.parse("I") is FitScenario.SUM_BOTH
    assert FitScenario.parse("torque") is FitScenario.TORQUE_ONLY
    assert FitScenario.parse("nmse_force") is FitScenario.FORCE_ONLY
    with pytest.raises(ParameterError):
        FitScenario.parse("IV")
    assert len(FitScenario) == 3


def test_select_best_fixture():
    results = make_results([0.1, 0.3, 0.25], [0.5, 0.1, 0.2])
    assert [r.nmse_sum for r in results] == pytest.approx([0.6, 0.4, 0.45])
    assert select_best(results, "I").set_index == 1
    assert select_best(results, "II").set_index == 1
    assert select_best(results, "III").set_index == 0
    assert select_best(results[:1], "I") is results[0]
    with pytest.raises(ParameterError):
        select_best([], "I")


def test_select_best_ties_lowest_index():
    results = [FitResult(REF_YEOH, 0.2, 0.2, 7), FitResult(REF_YEOH, 0.2, 0.2, 3)]
    assert select_best(results, "I").set_index == 3


def test_select_best_ignores_failed():
    results = [FitResult.failed(REF_YEOH, 0, "boom"), FitResult(REF_YEOH, 5.0, 5.0, 1)]
    assert select_best(results, "I").set_index == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 1000), st.integers(0, 2**31))
def test_select_best_matches_exhaustive_scan(n, seed):
    rng = np.random.default_rng(seed)
    # coarse values force ties
    fs, ts = rng.integers(0, 20, n) / 10.0, rng.integers(0, 20, n) / 10.0
    results = make_results(fs, ts)
    rng.shuffle(results)
    winners = select_all(results)
    for s in FitScenario:
        assert winners[s] is brute_best(results, s.key)
        assert all(winners[s].score(s) <= r.score(s) for r in results)
    assert (winners[FitScenario.SUM_BOTH].nmse_sum
            >= winners[FitScenario.FORCE_ONLY].nmse_force + winners[FitScenario.TORQUE_ONLY].nmse_torque)


# generalisation

def test_generalize_four_spot_mean():
    rows = [[FitResult(REF_YEOH, v, 0.0, 0)] for v in OGDEN_SPOT_SUMS]
    g = generalize(rows)
    assert g.mean_nmse == pytest.approx(0.11505, abs=1e-12)
    assert g.std_nmse == pytest.approx(np.std(OGDEN_SPOT_SUMS))
    assert g.per_point_nmse == OGDEN_SPOT_SUMS


def test_generalize_identical_points():
    row = make_results([0.3, 0.1], [0.1, 0.1])
    g = generalize([row] * 4)
    assert g.set_index == 1 and g.std_nmse == 0.0
    assert g.mean_nmse == pytest.approx(0.2)


def test_generalize_errors():
    with pytest.raises(ParameterError):
        generalize([make_results([0.1, 0.2], [0, 0]), make_results([0.1], [0])])
    with pytest.raises(ParameterError):
        generalize([])
    a = make_results([0.1, 0.2], [0, 0])
    b = [a[1], a[0]]
    with pytest.raises(ParameterError):
        generalize([a, b])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 60), st.integers(0, 2**31))
def test_generalize_matches_column_means(points, m, seed):
    rng = np.random.default_rng(seed)
    mat = [make_results(rng.integers(0, 10, m) / 10, rng.integers(0, 10, m) / 10)
           for _ in range(points)]
    g = generalize(mat)
    means = [np.mean([mat[p][j].nmse_sum for p in range(points)]) for j in range(m)]
    best = min(range(m), key=lambda j: (means[j], j))
    assert g.set_index == best
    assert g.mean_nmse == pytest.approx(np.mean(g.per_point_nmse), rel=1e-15)


def test_generalize_failed_column_never_wins():
    bad = FitResult.failed(REF_YEOH, 0, "x")
    assert bad.nmse_sum == math.inf
    rows = [[bad, FitResult(REF_YEOH, 0.5, 0.5, 1)]] * 2
    g = generalize(rows)
    assert g.set_index == 1 and math.isfinite(g.mean_nmse)


# sweeps

@pytest.fixture(scope="module")
def sweep_inputs():
    sets = filter_stable(latin_hypercube(published_region("yeoh"), 40, 1))
    ef, et = synth_experiment(REF_YEOH, GEOM, PROFILE, 0.01, seed=2)
    return sets, ef, et


def test_evaluate_sweep_counts_and_order(sweep_inputs):
    sets, ef, et = sweep_inputs
    res = evaluate_sweep(sets, GEOM, PROFILE, ef, et)
    assert len(res) == len(sets)
    assert [r.set_index for r in res] == list(range(len(sets)))
    assert all(r.params is m for r, m in zip(res, sets))


def test_evaluate_sweep_parallel_bitwise(sweep_inputs):
    sets, ef, et = sweep_inputs
    a = evaluate_sweep(sets, GEOM, PROFILE, ef, et, n_jobs=1)
    b = evaluate_sweep(sets, GEOM, PROFILE, ef, et, n_jobs=2)
    assert [(r.nmse_force, r.nmse_torque, r.set_index) for r in a] == \
           [(r.nmse_force, r.nmse_torque, r.set_index) for r in b]


def test_true_set_at_noise_floor():
    ef, et = synth_experiment(REF_YEOH, GEOM, PROFILE, 0.01, seed=2)
    (r,) = evaluate_sweep([REF_YEOH], GEOM, PROFILE, ef, et)
    assert r.nmse_force < 1e-3 and r.nmse_torque < 1e-3
    (exact,) = evaluate_sweep([REF_YEOH], GEOM, PROFILE,
                              *synth_experiment(REF_YEOH, GEOM, PROFILE, 0.0))
    assert exact.nmse_sum == 0.0


def test_evaluate_sweep_failure_is_infinite(monkeypatch):
    import dualchar.fitting as fitting

    ef, et = synth_experiment(REF_YEOH, GEOM, PROFILE, 0.0)
    real = fitting.simulate

    def flaky(model, geom, profile):
        if model.c1 == 1.0:
            raise FloatingPointError("overflow")
        return real(model, geom, profile)

    monkeypatch.setattr(fitting, "simulate", flaky)
    res = evaluate_sweep([Yeoh3(1.0, 0.0, 0.0), REF_YEOH], GEOM, PROFILE, ef, et)
    assert res[0].status == "failed" and res[0].nmse_sum == math.inf
    assert "overflow" in res[0].note
    assert res[1].status == "ok"


def test_evaluate_sweep_errors(sweep_inputs):
    sets, ef, et = sweep_inputs
    with pytest.raises(ParameterError):
        evaluate_sweep([], GEOM, PROFILE, ef, et)
    wide = Curve([0.0, 12.0], [0.0, 1.0])
    with pytest.raises(ParameterError):
        evaluate_sweep(sets, GEOM, PROFILE, wide, et)
