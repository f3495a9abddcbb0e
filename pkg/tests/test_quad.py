import cmath
import math

import numpy as np
import pytest
import scipy.special

from vdcorput.phase import builtin_family
from vdcorput.quad import (derivative_test_bounds, fresnel_modified,
                           oscillatory_integral, oscillatory_integral_raw,
                           stationary_phase_estimate)

ONE = lambda x: np.ones_like(np.asarray(x, dtype=float))


def test_trivial_integrals():
    r = oscillatory_integral_raw(ONE, lambda x: 0.0 * np.asarray(x, dtype=float),
                                 lambda x: 0.0, 0.0, 1.0, 1e-12)
    assert r.value == pytest.approx(1.0, abs=1e-12)
    # a full period of e(-x) integrates to zero
    r = oscillatory_integral_raw(ONE, lambda x: -np.asarray(x, dtype=float),
                                 lambda x: -1.0, 0.0, 1.0, 1e-12)
    assert abs(r.value) <= 1e-12


def test_power_phase_against_trapezoid_oracle():
    model, _ = builtin_family("power_phase")
    got = oscillatory_integral(model, 1.0, 6.0, 18.0, 1e-10)
    xs = np.linspace(6.0, 18.0, 1_000_001)
    vals = np.exp(2j * np.pi * np.mod(np.asarray(model.f(xs)) - xs, 1.0))
    oracle = complex(np.trapezoid(vals, xs))
    assert got.converged
    assert abs(got.value - oracle) <= 1e-8  # trapezoid itself is ~1e-10 here


def test_unconverged_result_is_flagged():
    model, _ = builtin_family("power_phase")
    res = oscillatory_integral(model, 3.0, 40.0, 400.0, 1e-12, panel_cap=32)
    assert not res.converged
    assert res.abs_error_estimate > 1e-12


def test_derivative_test_examples():
    model, profile = builtin_family("power_phase")
    first, second = derivative_test_bounds(model, profile, 20.0, 25.0, 0.0)
    # g = 1: V = 1, so the slope bound is 1/(pi f'(20)) with f' increasing
    assert first == pytest.approx(1.0 / (math.pi * float(model.f1(20.0))), rel=1e-9)

    mq, pq = builtin_family("quadratic", [1.0])
    first, second = derivative_test_bounds(mq, pq, 1.0, 2.0, 0.0)
    assert second == pytest.approx(4.0 / math.sqrt(math.pi), rel=1e-12)

    # the oracle value sits below the smaller of the two bounds
    first, second = derivative_test_bounds(model, profile, 6.0, 18.0, 1.0)
    q = oscillatory_integral(model, 1.0, 6.0, 18.0, 1e-10)
    assert abs(q.value) <= min(first, second)


def test_first_bound_infinite_with_interior_stationary_point():
    model, profile = builtin_family("power_phase")
    first, second = derivative_test_bounds(model, profile, 6.0, 18.0, 1.0)
    assert math.isinf(first)       # x_1 = 12 sits inside [6, 18]
    assert math.isfinite(second)


def test_bounds_dominate_integral_randomly():
    model, profile = builtin_family("power_phase")
    rng = np.random.default_rng(4)
    for _ in range(50):
        x0 = float(rng.uniform(30, 3000))
        width = float(rng.uniform(0.5, 1.5)) * min(float(profile.M(x0)), 200.0)
        alpha, beta = x0, x0 + width
        r = float(rng.uniform(-3, 3)) + float(model.f1(0.5 * (alpha + beta)))
        fa, fb = float(model.f1(alpha)) - r, float(model.f1(beta)) - r
        first, second = derivative_test_bounds(model, profile, alpha, beta, r)
        q = oscillatory_integral(model, r, alpha, beta, 1e-9)
        if fa * fb > 0:
            assert abs(q.value) <= first * (1 + 1e-6)
        assert abs(q.value) <= second * (1 + 1e-6)


# ---------------------------------------------------------------------------
# modified Fresnel
# ---------------------------------------------------------------------------

def test_fresnel_zero_and_limit():
    assert fresnel_modified(0.0) == 0j
    limit = cmath.exp(2j * math.pi / 8.0) / 2.0
    assert abs(fresnel_modified(50.0) - limit) <= 0.01


def test_fresnel_against_internal_quadrature():
    ref = oscillatory_integral_raw(ONE, lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
                                   lambda x: float(x), 0.0, 1.0, 1e-13)
    assert abs(fresnel_modified(1.0) - ref.value) <= 1e-10


def test_fresnel_oddness_exact():
    for u in (0.3, 1.2, 2.7):
        assert fresnel_modified(-u) == -fresnel_modified(u)


@pytest.mark.parametrize("u", [0.1, 0.9, 1.49, 1.51, 4.0, 20.0])
def test_fresnel_against_scipy(u):
    s, c = scipy.special.fresnel(math.sqrt(2.0) * u)
    ref = (c + 1j * s) / math.sqrt(2.0)
    assert abs(fresnel_modified(u) - ref) <= 1e-12


# ---------------------------------------------------------------------------
# stationary phase expansion
# ---------------------------------------------------------------------------

def test_explicit_main_piece_value():
    # for the cubic-power phase at integer r the leading term is
    # sqrt(24 r)/2 e(-4 r^3 + 1/8)
    model, profile = builtin_family("power_phase")
    r = 5.0
    xr = 12.0 * r * r
    mu = xr - 0.5 * float(profile.M(xr))
    est, _ = stationary_phase_estimate(model, profile, r, "left", mu)
    main = math.sqrt(24.0 * r) / 2.0 * cmath.exp(2j * math.pi * 0.125)
    correction = est - main
    # remaining explicit pieces are the curvature and endpoint terms, both
    # small at this scale
    assert abs(correction) < 0.15 * abs(main)
    fpp = float(model.f2(xr))
    fppp = float(model.f3(xr))
    slope = float(model.f1(mu)) - r
    endpoint = (cmath.exp(2j * math.pi * ((float(model.f(mu)) - r * mu) % 1.0))
                / (2j * math.pi * slope))
    byhand = (main - fppp * cmath.exp(2j * math.pi * (-4 * r ** 3 % 1.0))
              / (6j * math.pi * fpp ** 2) - endpoint)
    assert est == pytest.approx(byhand, rel=1e-12)


def test_quadratic_curvature_term_vanishes():
    model, profile = builtin_family("quadratic", [0.5, 100.0], domain=(0.0, 4000.0))
    r = 7.0
    xr = r / 0.5
    for side, mu in [("left", xr - 3.0), ("right", xr + 3.0)]:
        est, _ = stationary_phase_estimate(model, profile, r, side, mu)
        main = cmath.exp(2j * math.pi * ((-0.5 * r * r / 0.5) % 1.0) + 2j * math.pi / 8) \
            / (2.0 * math.sqrt(0.5))
        slope = float(model.f1(mu)) - r
        sgn = 1.0 if side == "right" else -1.0
        endpoint = sgn * cmath.exp(2j * math.pi * ((float(model.f(mu)) - r * mu) % 1.0)) \
            / (2j * math.pi * slope)
        assert est == pytest.approx(main + endpoint, rel=1e-12)


def test_residual_within_fitted_bound():
    model, profile = builtin_family("power_phase")
    ratios = []
    for r in range(2, 21, 3):
        xr = 12.0 * r * r
        mu = xr - float(profile.M(xr))  # cubic piece dropped at full radius
        est, bound = stationary_phase_estimate(model, profile, float(r), "left", mu)
        q = oscillatory_integral(model, float(r), mu, xr, 1e-8)
        ratios.append(abs(q.value - est) / bound)
    fitted = max(ratios[::2])
    assert all(rr <= 2.0 * fitted for rr in ratios)


def test_residual_scaling_slope():
    model, profile = builtin_family("power_phase")
    r = 20.0
    xr = 12.0 * r * r
    M = float(profile.M(xr))
    ds, resids = [], []
    for j in range(5):
        d = 0.45 * M * 2.0 ** -j
        est, _ = stationary_phase_estimate(model, profile, r, "left", xr - d)
        q = oscillatory_integral(model, r, xr - d, xr, 1e-8)
        ds.append(d)
        resids.append(abs(q.value - est))
    slope = np.polyfit(np.log(ds), np.log(resids), 1)[0]
    assert -3.3 <= slope <= -2.7


def test_side_validation():
    model, profile = builtin_family("power_phase")
    with pytest.raises(ValueError):
        stationary_phase_estimate(model, profile, 5.0, "left", 12.0 * 25 + 1.0)
    with pytest.raises(ValueError):
        stationary_phase_estimate(model, profile, 5.0, "right", 12.0 * 25 - 1.0)
    with pytest.raises(ValueError):
        stationary_phase_estimate(model, profile, 5.0, "up", 12.0 * 25 - 1.0)
    with pytest.raises(ValueError):  # exceeds the local radius
        stationary_phase_estimate(model, profile, 5.0, "left", 12.0 * 25 - 200.0)
