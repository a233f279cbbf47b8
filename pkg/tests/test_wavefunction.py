import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biphoton import (MomentumPoint4, SpdcParams, density4, mismatch_arg,
                      psi, pump_envelope, sinc)

finite_k = st.floats(min_value=-5e4, max_value=5e4, allow_nan=False)


@pytest.fixture(scope="module")
def params():
    return SpdcParams(lambda_p=0.4047, w_p=0.5, L=0.5, theta0=0.28, n_o=1.66109)


def test_sinc_at_zero_and_huge_arguments():
    assert sinc(0.0) == 1.0
    big = sinc(1e8)
    assert np.isfinite(big) and abs(big) < 1e-7


def test_pump_envelope_reference_points(params):
    assert pump_envelope(0.0, 0.0, params) == 1.0
    assert pump_envelope(1.0 / params.w_p, 0.0, params) == pytest.approx(
        math.exp(-0.5), rel=1e-14)
    assert pump_envelope(3.0, -4.0, params) == pump_envelope(-3.0, 4.0, params)


def test_mismatch_arg_reference_points(params):
    # on-axis value, written out independently
    expected = (math.pi * params.L * 4.0 * params.theta0 ** 2
                / (8.0 * params.n_o * params.lambda_p * 1e-4))
    assert mismatch_arg(0.0, 0.0, params) == pytest.approx(expected, rel=1e-14)
    # vanishes on the emission cone
    k_ring = params.k_from_kappa(2.0 * params.theta0)
    assert abs(mismatch_arg(k_ring, 0.0, params)) < 1e-9
    # collinear limit is a pure quadratic
    p0 = SpdcParams(lambda_p=0.4047, w_p=0.5, L=0.5, theta0=0.0, n_o=1.66109)
    k = 1000.0
    assert mismatch_arg(k, 0.0, p0) == pytest.approx(
        -p0.sinc_scale * float(p0.kappa(k)) ** 2, rel=1e-14)


def test_psi_peak_on_cone(params):
    k_ring = params.k_from_kappa(2.0 * params.theta0)
    pt = MomentumPoint4(k1x=0.5 * k_ring, k2x=-0.5 * k_ring, k1y=0.0, k2y=0.0)
    assert psi(pt, params) == pytest.approx(1.0, abs=1e-12)
    assert density4(pt, params) == pytest.approx(1.0, abs=1e-12)


@given(k1x=finite_k, k2x=finite_k, k1y=finite_k, k2y=finite_k)
@settings(max_examples=60, deadline=None)
def test_exchange_symmetry(params, k1x, k2x, k1y, k2y):
    a = psi(MomentumPoint4(k1x, k2x, k1y, k2y), params)
    b = psi(MomentumPoint4(k2x, k1x, k2y, k1y), params)
    assert a == b


@given(kp=finite_k, km=st.floats(min_value=0.0, max_value=5e4),
       angle=st.floats(min_value=0.0, max_value=2 * math.pi))
@settings(max_examples=60, deadline=None)
def test_rotation_invariance_of_difference(params, kp, km, angle):
    # fixed |k-| and fixed k+, any orientation of the difference vector
    kmx, kmy = km * math.cos(angle), km * math.sin(angle)
    pt = MomentumPoint4(0.5 * (kp + kmx), 0.5 * (kp - kmx),
                        0.5 * kmy, -0.5 * kmy)
    ref = MomentumPoint4(0.5 * (kp + km), 0.5 * (kp - km), 0.0, 0.0)
    assert psi(pt, params) == pytest.approx(psi(ref, params), rel=1e-10, abs=1e-300)


def test_amplitude_factorizes_in_sum_and_difference(params):
    # swapping the (k+, |k-|) pairs between two points leaves the product alone
    kp1, km1 = 0.7, 20000.0
    kp2, km2 = -1.3, 31000.0

    def value(kp, km):
        return psi(MomentumPoint4(0.5 * (kp + km), 0.5 * (kp - km), 0.0, 0.0),
                   params)

    lhs = value(kp1, km1) * value(kp2, km2)
    rhs = value(kp1, km2) * value(kp2, km1)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_no_factorization_across_x_and_y(params):
    # psi restricted to k+=0 as a function of (k-x, k-y) must not factor
    kx1, kx2 = 0.0, params.k_from_kappa(1.5 * params.theta0)
    ky1, ky2 = 0.0, params.k_from_kappa(1.4 * params.theta0)

    def value(kx, ky):
        return psi(MomentumPoint4(0.5 * kx, -0.5 * kx, 0.5 * ky, -0.5 * ky),
                   params)

    det = value(kx1, ky1) * value(kx2, ky2) - value(kx1, ky2) * value(kx2, ky1)
    assert abs(det) > 1e-6


def test_density_nonnegative_on_random_points(params):
    rng = np.random.default_rng(3)
    for _ in range(200):
        pt = MomentumPoint4(*rng.uniform(-4e4, 4e4, size=4))
        assert density4(pt, params) >= 0.0


@given(k1x=finite_k, k2x=finite_k, k1y=finite_k, k2y=finite_k)
@settings(max_examples=60, deadline=None)
def test_momentum_accessors(k1x, k2x, k1y, k2y):
    pt = MomentumPoint4(k1x, k2x, k1y, k2y)
    assert pt.k_plus_x == k1x + k2x
    assert pt.k_minus_x == k1x - k2x
    assert pt.k_plus_y == k1y + k2y
    assert pt.k_minus_y == k1y - k2y


def test_params_validation(bbo):
    with pytest.raises(ValueError):
        SpdcParams(lambda_p=0.4047, w_p=-0.1, L=0.1, theta0=0.1, n_o=1.66)
    with pytest.raises(ValueError):
        SpdcParams(lambda_p=0.4047, w_p=0.1, L=0.1, theta0=-0.1, n_o=1.66)
    with pytest.raises(ValueError):
        SpdcParams(lambda_p=0.4047, w_p=0.1, L=0.1, theta0=0.1, n_o=0.9)
    with pytest.raises(ValueError):
        SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1)
    with pytest.raises(ValueError):
        SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1, phi0=0.7, theta0=0.1)


def test_params_from_crystal_routes(bbo):
    via_cut = SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1, phi0=0.7)
    assert via_cut.theta0 == pytest.approx(0.28, abs=5e-3)
    assert abs(via_cut.n_o - 1.66109) < 0.5e-5
    explicit = SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1, theta0=0.1)
    assert explicit.n_o == via_cut.n_o
    # cut on the wrong side of the collinear point has no cone
    with pytest.raises(ValueError):
        SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1, phi0=0.3)


def test_kappa_roundtrip(params):
    k = 12345.6
    assert params.k_from_kappa(params.kappa(k)) == pytest.approx(k, rel=1e-14)
    assert float(params.kappa(math.pi / params.lambda_cm)) == pytest.approx(1.0, rel=1e-14)
