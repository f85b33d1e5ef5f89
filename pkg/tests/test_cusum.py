import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special
from scipy.optimize import brentq

from angularcp import (
    AngularDomainError,
    DegenerateVarianceError,
    InverseDispersion,
    SineModelParams,
    SingularDispersionError,
    TestConfig,
    cusum,
    detect_changepoint,
    kolmogorov_cdf,
    kolmogorov_quantile,
    kolmogorov_sf,
    max_abs_statistic,
    q_sequence,
    sample_fisher,
    sample_vm_sine,
    sphere,
    square_of_angle,
    torus,
)
from angularcp.samplers import FisherParams
from angularcp.simulation import PowerGridConfig, power_grid

PI = math.pi
TWO_PI = 2 * math.pi


def angle_with_square(s, target):
    return brentq(lambda t: square_of_angle(s, t) - target, 1e-9, PI - 1e-9)


def test_q_identity_inverse():
    s = torus(0.5)
    t = angle_with_square(s, 0.1)
    q = q_sequence([(t, t)], InverseDispersion(1.0, 1.0, 0.0), s)
    # identity has no cross term: a + b
    assert q[0] == pytest.approx(0.2, abs=1e-12)
    q = q_sequence([(t, t)], InverseDispersion(1.0, 1.0, 1.0), s)
    assert q[0] == pytest.approx(0.4, abs=1e-12)


def test_q_zero_pair():
    assert q_sequence([(0.0, 0.0)], InverseDispersion(3.0, 2.0, -1.0), torus())[0] == 0.0


def test_q_inverse_example():
    s = torus(0.5)
    t = angle_with_square(s, 0.1)
    inv = InverseDispersion(40 / 3, 40 / 3, -20 / 3)
    q = q_sequence([(t, t)], inv, s)
    assert q[0] == pytest.approx(1.3333, abs=1e-4)


def test_q_centered_reference():
    s = torus(0.5)
    inv = InverseDispersion(2.0, 3.0, 0.5)
    raw = q_sequence([(1.2, 0.7)], inv, s)
    assert q_sequence([(1.2, 0.7)], inv, s, means=(1.2, 0.7))[0] == 0.0
    assert raw[0] > 0


def test_cusum_examples():
    u, s = cusum([0, 0, 1, 1])
    np.testing.assert_allclose(u, [-0.4330, -0.8660, -0.4330, 0.0], atol=5e-5)
    assert s**2 == pytest.approx(1 / 3)
    u, _ = cusum([0, 1])
    np.testing.assert_allclose(u, [-0.5, 0.0], atol=1e-15)


def test_cusum_constant_sequence():
    with pytest.raises(DegenerateVarianceError):
        cusum([0.3] * 10)
    with pytest.raises(AngularDomainError):
        cusum([1.0])


def test_max_abs_examples():
    stat, k = max_abs_statistic([-0.4330, -0.8660, -0.4330, 0.0])
    assert stat == pytest.approx(0.8660) and k == 2
    assert max_abs_statistic([0.0, 0.0]) == (0.0, 1)
    u = np.zeros(10)
    u[2] = u[6] = -1.5
    assert max_abs_statistic(u)[1] == 3


def test_max_excludes_last_index():
    stat, k = max_abs_statistic([0.1, 0.2, 5.0])
    assert (stat, k) == (0.2, 2)


def test_kolmogorov_sf_examples():
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(0.5) == pytest.approx(0.9639, abs=5e-5)
    assert kolmogorov_sf(1.3581) == pytest.approx(0.05, abs=1e-4)
    with pytest.raises(AngularDomainError):
        kolmogorov_sf(-0.1)


@pytest.mark.parametrize("x", [0.05, 0.2, 0.5, 0.79, 0.8, 0.81, 1.0, 1.3581, 2.0, 3.0, 5.0])
def test_kolmogorov_against_scipy(x):
    assert kolmogorov_sf(x) == pytest.approx(special.kolmogorov(x), rel=1e-12, abs=1e-15)
    assert kolmogorov_cdf(x) == pytest.approx(1 - special.kolmogorov(x), rel=1e-10, abs=1e-15)


def test_kolmogorov_sf_strictly_decreasing():
    xs = np.linspace(0.2, 3.0, 500)
    vals = np.array([kolmogorov_sf(x) for x in xs])
    assert np.all(np.diff(vals) < 0)


def test_quantile_inverts_sf():
    for x in np.linspace(0.25, 3.0, 56):
        assert kolmogorov_quantile(kolmogorov_sf(x)) == pytest.approx(x, abs=1e-8)


def test_quantile_inverts_sf_near_zero_to_conditioning():
    # sf(x) is within 1e-12 of one here, so a rounded alpha only pins x down
    # to about eps / density(x)
    for x in np.linspace(0.2, 0.25, 6):
        h = 1e-6
        dens = (kolmogorov_cdf(x + h) - kolmogorov_cdf(x - h)) / (2 * h)
        bound = 4 * np.finfo(float).eps / dens
        assert abs(kolmogorov_quantile(kolmogorov_sf(x)) - x) <= max(bound, 1e-8)


def test_kolmogorov_quantile_examples():
    assert kolmogorov_quantile(0.05) == pytest.approx(1.3581, abs=1e-4)
    assert kolmogorov_quantile(0.05) == pytest.approx(special.kolmogi(0.05), abs=1e-10)
    x = kolmogorov_quantile(0.5)
    assert kolmogorov_sf(x) == pytest.approx(0.5, abs=1e-12)
    x = kolmogorov_quantile(0.9999)
    assert 0 < x < 0.5
    assert kolmogorov_sf(x) == pytest.approx(0.9999, abs=1e-8)
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(AngularDomainError):
            kolmogorov_quantile(bad)


def test_config_validation():
    with pytest.raises(AngularDomainError):
        TestConfig(alpha=1.5)
    with pytest.raises(AngularDomainError):
        TestConfig(q_reference="other")


def test_detect_result_contract():
    x = sample_vm_sine(SineModelParams(), 200, seed=4)
    r = detect_changepoint(x, TestConfig(torus(0.5)))
    assert r.n == 200 and r.q.shape == (200,) and r.u.shape == (200,)
    assert abs(r.u[-1]) < 1e-10
    assert 1 <= r.khat <= 199
    assert 0.0 <= r.p_value <= 1.0
    assert r.statistic == pytest.approx(np.max(np.abs(r.u[:-1])))
    assert r.reject == (r.statistic > kolmogorov_quantile(0.05))
    assert np.all(r.q >= -1e-12)


def test_detect_finds_shift():
    x = sample_vm_sine(SineModelParams(), 500, seed=8)
    x[250:] = (x[250:] + PI / 2) % TWO_PI
    r = detect_changepoint(x, surface=torus())
    assert r.reject and r.p_value < 1e-4
    assert abs(r.khat - 250) <= 10


def test_detect_sphere_shift():
    x = sample_fisher(FisherParams(alpha=PI / 2, beta=0.0, kappa=5.0), 400, seed=3)
    y = sample_fisher(FisherParams(alpha=PI / 4, beta=PI / 2, kappa=5.0), 400, seed=4)
    r = detect_changepoint(np.vstack([x, y]), surface=sphere())
    assert r.reject and abs(r.khat - 400) <= 10


def test_detect_degenerate_inputs():
    with pytest.raises(SingularDispersionError):
        detect_changepoint([(1.0, 1.0)] * 10, surface=torus())
    with pytest.raises(AngularDomainError):
        detect_changepoint([(1.0, 1.0)] * 3, surface=torus())


def test_centered_mode_rotation_invariant():
    cfg = TestConfig(torus(0.5), q_reference="centered")
    rng = np.random.default_rng(0)
    for seed in range(10):
        x = sample_vm_sine(SineModelParams(kappa3=2.0), 300, seed=seed)
        d = rng.uniform(0, TWO_PI, 2)
        y = (x + d) % TWO_PI
        a, b = detect_changepoint(x, cfg), detect_changepoint(y, cfg)
        assert abs(a.statistic - b.statistic) < 1e-10
        assert a.khat == b.khat


def test_power_non_decreasing_in_n():
    rates = []
    for n in (100, 250, 500):
        cfg = PowerGridConfig(
            delta_phi_grid=(PI / 2,), delta_theta_grid=(PI / 2,), n=n, reps=200, seed=2
        )
        rates.append(power_grid(cfg).rates[0, 0])
    se = 0.5 / math.sqrt(200)
    assert rates[0] <= rates[1] + 3 * se and rates[1] <= rates[2] + 3 * se
    assert rates[2] > 0.99


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=200))
def test_cusum_endpoint_vanishes(q):
    try:
        u, _ = cusum(q)
    except DegenerateVarianceError:
        return
    assert abs(u[-1]) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["raw", "centered"]))
def test_detect_endpoint_and_q_nonnegative(seed, ref):
    x = sample_vm_sine(SineModelParams(kappa3=-1.0), 120, seed=seed)
    r = detect_changepoint(x, TestConfig(torus(0.5), q_reference=ref))
    assert abs(r.u[-1]) < 1e-10
    assert r.q.min() >= -1e-12
