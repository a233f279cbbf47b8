import math

import numpy as np
import pytest
from scipy.optimize import brentq

from biphoton import (CrystalDispersion, CrystalFileError, CutConfig,
                      NoCollinearRootError, WavelengthRangeError,
                      collinear_cut_angle, index_extraordinary,
                      index_ordinary, load_crystal, opening_angle_fit,
                      phase_match, pump_index)
from biphoton.crystal import FIT_THRESHOLD

LAM_P = 0.4047  # um


def test_bbo_index_regression(bbo):
    # tabulated handbook values, five decimal places
    assert abs(index_ordinary(bbo, LAM_P) - 1.69236) < 0.5e-5
    assert abs(index_extraordinary(bbo, LAM_P) - 1.56801) < 0.5e-5
    assert abs(index_ordinary(bbo, 2 * LAM_P) - 1.66109) < 0.5e-5


def test_extraordinary_at_signal_wavelength(bbo):
    # oracle: direct Sellmeier arithmetic with the bundled coefficients
    lam2 = (2 * LAM_P) ** 2
    n2 = 2.3730 + 0.0128 / (lam2 - 0.0156) - 0.0044 * lam2
    assert index_extraordinary(bbo, 2 * LAM_P) == pytest.approx(math.sqrt(n2), rel=1e-14)
    assert abs(index_extraordinary(bbo, 2 * LAM_P) - 1.546005) < 0.5e-5


def test_dispersion_ordering(bbo):
    # normal dispersion plus negative uniaxial ordering
    assert index_ordinary(bbo, LAM_P) > index_ordinary(bbo, 2 * LAM_P)
    for lam in (0.25, LAM_P, 2 * LAM_P, 1.0):
        assert index_extraordinary(bbo, lam) < index_ordinary(bbo, lam)
        assert index_ordinary(bbo, lam) > 1.0


def test_out_of_range_wavelength(bbo):
    with pytest.raises(WavelengthRangeError):
        index_ordinary(bbo, 0.1)
    with pytest.raises(WavelengthRangeError):
        index_extraordinary(bbo, 2.0)


def test_pump_index_limits(bbo):
    n_o = index_ordinary(bbo, LAM_P)
    n_e = index_extraordinary(bbo, LAM_P)
    assert pump_index(bbo, CutConfig(0.0, LAM_P)) == pytest.approx(n_o, rel=1e-14)
    assert pump_index(bbo, CutConfig(math.pi / 2, LAM_P)) == pytest.approx(n_e, rel=1e-14)


def test_pump_index_monotone_decreasing(bbo):
    phis = np.linspace(0.0, math.pi / 2, 200)
    vals = [pump_index(bbo, CutConfig(p, LAM_P)) for p in phis]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_phase_match_identities(bbo):
    pm = phase_match(bbo, CutConfig(0.7, LAM_P))
    assert pm.delta_n == pm.n_p - pm.n_o_signal
    lam_cm = LAM_P * 1e-4
    assert pm.delta0 == pytest.approx(2 * math.pi / lam_cm * pm.delta_n, rel=1e-14)
    assert pm.theta0 is not None
    assert pm.theta0 ** 2 == pytest.approx(-2 * pm.n_o_signal * pm.delta_n, rel=1e-12)


def test_phase_match_collinear_impossible_side(bbo):
    pm = phase_match(bbo, CutConfig(0.3, LAM_P))
    assert pm.delta_n > 0
    assert pm.theta0 is None


def test_cone_angle_reference_points(bbo):
    assert phase_match(bbo, CutConfig(0.7, LAM_P)).theta0 == pytest.approx(0.28, abs=5e-3)
    assert phase_match(bbo, CutConfig(0.5275, LAM_P)).theta0 == pytest.approx(0.100, abs=5e-3)


def test_collinear_cut_angle(bbo):
    root = collinear_cut_angle(bbo, LAM_P)
    assert abs(root - 0.5008) < 1e-3
    assert abs(phase_match(bbo, CutConfig(root, LAM_P)).delta_n) < 1e-10
    # independent root finder as cross-check
    ref = brentq(lambda p: phase_match(bbo, CutConfig(p, LAM_P)).delta_n,
                 0.3, 0.8, xtol=1e-14)
    assert root == pytest.approx(ref, abs=1e-10)
    # result independent of the bracket
    other = collinear_cut_angle(bbo, LAM_P, bracket=(0.45, 0.62))
    assert root == pytest.approx(other, abs=1e-9)


def test_collinear_cut_angle_no_sign_change(bbo):
    with pytest.raises(NoCollinearRootError):
        collinear_cut_angle(bbo, LAM_P, bracket=(0.1, 0.3))


def test_opening_angle_fit_values():
    assert opening_angle_fit(0.7) == pytest.approx(0.63 * math.sqrt(0.7 - 0.5008), rel=1e-14)
    assert opening_angle_fit(0.7) == pytest.approx(0.2812, abs=5e-5)
    assert opening_angle_fit(0.5275) == pytest.approx(0.1029, abs=5e-5)
    assert opening_angle_fit(FIT_THRESHOLD) == 0.0
    with pytest.raises(ValueError):
        opening_angle_fit(0.49)


def test_fit_tracks_exact_cone_angle(bbo):
    for phi in np.linspace(0.51, 0.9, 79):
        exact = phase_match(bbo, CutConfig(phi, LAM_P)).theta0
        assert abs(opening_angle_fit(phi) - exact) / exact < 0.05


def test_load_bundled_crystal(bbo):
    assert bbo.name == "BBO"
    assert len(bbo.sellmeier_o) == 4
    assert bbo.valid_range[0] < LAM_P < 2 * LAM_P < bbo.valid_range[1]


def test_load_custom_crystal_roundtrip(tmp_path):
    path = tmp_path / "toy.crystal"
    path.write_text(
        "# comment\n"
        "name = TOY\n"
        "sellmeier_o = 2.5 0.02 0.01 0.01\n"
        "sellmeier_e = 2.2 0.01 0.01 0.005\n"
        "valid_range = 0.3 1.0\n")
    disp = load_crystal(path)
    assert disp.name == "TOY"
    assert disp.sellmeier_e == (2.2, 0.01, 0.01, 0.005)
    assert index_ordinary(disp, 0.5) > 1.0


@pytest.mark.parametrize("body,bad_line", [
    ("name = X\njunk line\n", 2),
    ("name = X\nsellmeier_o = 2.5 abc 0.01 0.01\n", 2),
    ("name = X\nsellmeier_o = 2.5 0.02 0.01\n", 2),
    ("name = X\nwhatever = 1\n", 2),
    ("name = X\nname = Y\n", 2),
])
def test_malformed_crystal_file(tmp_path, body, bad_line):
    path = tmp_path / "bad.crystal"
    path.write_text(body)
    with pytest.raises(CrystalFileError) as err:
        load_crystal(path)
    assert err.value.line == bad_line
    assert str(path) in str(err.value)


def test_missing_keys_and_missing_file(tmp_path):
    path = tmp_path / "incomplete.crystal"
    path.write_text("name = X\nsellmeier_o = 2.5 0.02 0.01 0.01\n")
    with pytest.raises(CrystalFileError):
        load_crystal(path)
    with pytest.raises(CrystalFileError):
        load_crystal(tmp_path / "nope.crystal")


def test_dispersion_validation():
    with pytest.raises(ValueError):
        CrystalDispersion("X", (1.0, 2.0, 3.0, 4.0), (1.0, 2.0, 3.0, 4.0), (1.0, 0.5))
    with pytest.raises(ValueError):
        CrystalDispersion("X", (1.0, 2.0), (1.0, 2.0, 3.0, 4.0), (0.3, 1.0))
    with pytest.raises(ValueError):
        CutConfig(-0.1, LAM_P)
    with pytest.raises(ValueError):
        CutConfig(0.5, -1.0)
