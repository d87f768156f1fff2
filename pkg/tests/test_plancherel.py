import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symkernel.errors import ConfigurationError
from symkernel.plancherel import (asymptotic_slope, c_factors, density, density_profile_csv, log_c_factor,
                                  log_c_factor_elementary, log_c_factor_gamma, plancherel_density)
from symkernel.rootsys import LABELS, build_root_system, weyl_group

# |Gamma(iv + m/2) / Gamma(iv)|^2, evaluated with mpmath at 30 digits
MPMATH = [(1, 0.3, 0.22090757985492807817), (1, 2.5, 2.49999924649147586), (3, 0.7, 0.5054129484145239273),
          (4, 1.3, 4.5461000000000005057), (5, 4.0, 1186.2499999711467067), (2, 0.01, 0.00010000000000000000416)]


@pytest.mark.parametrize("m,v,ref", MPMATH)
def test_c_factor_against_mpmath(m, v, ref):
    assert np.exp(log_c_factor_gamma(m, 0, v)) == pytest.approx(ref, rel=1e-13)
    assert np.exp(log_c_factor_elementary(m, v)) == pytest.approx(ref, rel=1e-13)


def test_paths_agree_on_wide_range():
    v = np.geomspace(1e-8, 1e4, 500)
    for m in range(1, 8):
        assert np.max(np.abs(log_c_factor_gamma(m, 0, v) - log_c_factor_elementary(m, v))) < 1e-10


def test_doubled_root_uses_gamma_path():
    v = np.array([0.5, 2.0])
    assert np.allclose(log_c_factor(2, 1, v), log_c_factor_gamma(2, 1, v))
    # m2 contributes |v|^m2 growth at infinity
    big = log_c_factor(2, 1, np.array([1e3, 2e3]))
    assert (big[1] - big[0]) / np.log(2) == pytest.approx(3.0, abs=1e-3)


def test_small_v_guard_is_continuous():
    v = np.array([0.999e-6, 1.001e-6])
    vals = log_c_factor_gamma(3, 0, v)
    assert abs(vals[1] - vals[0] - 2 * np.log(1.001 / 0.999)) < 1e-6


def test_h2_and_h3_oracles():
    v = np.linspace(0.01, 20, 400)
    h2 = density(build_root_system("H2"), v[:, None])
    h3 = density(build_root_system("H3"), v[:, None])
    assert np.max(np.abs(h2 / (v * np.tanh(np.pi * v)) - 1)) < 1e-12
    assert np.max(np.abs(h3 / v**2 - 1)) < 1e-12


def test_density_value_wrapper():
    rs = build_root_system("H3")
    dv = plancherel_density(rs, np.array([2.0]))
    assert dv.value == pytest.approx(4.0)


def test_c_factors_metadata():
    f = c_factors(build_root_system("SL3R"))
    assert len(f) == 3
    assert all(cf.m == 1 and cf.m2 == 0 and cf.const == 1.0 for cf in f)


@given(st.floats(-30, 30), st.floats(-30, 30))
def test_density_is_weyl_invariant(a, b):
    rs = build_root_system("SL3R")
    lam = np.array([a, b])
    base = density(rs, lam)
    for w in weyl_group(rs):
        # on a wall the reflected point may pick up a rounding-size pairing, hence the absolute slack
        assert density(rs, w(lam)) == pytest.approx(base, abs=1e-12, rel=1e-9)


@given(st.floats(0.01, 100))
def test_rank_one_density_is_even(v):
    rs = build_root_system("H4")
    assert density(rs, np.array([v])) == pytest.approx(density(rs, np.array([-v])), rel=1e-14)


@pytest.mark.parametrize("label", LABELS)
def test_asymptotic_slopes(label):
    rs = build_root_system(label)
    small = asymptotic_slope(rs, "small")
    large = asymptotic_slope(rs, "large")
    assert small.target == rs.pseudo_dim - rs.rank
    assert large.target == rs.dim - rs.rank
    assert abs(small.slope - small.target) < 0.05
    assert abs(large.slope - large.target) < 0.05


def test_slope_errors():
    rs = build_root_system("H2")
    with pytest.raises(ConfigurationError):
        asymptotic_slope(rs, "medium")
    with pytest.raises(ConfigurationError):
        asymptotic_slope(rs, "small", n_points=4)


def test_profile_csv():
    text = density_profile_csv(build_root_system("H3"), [1.0], [1.0, 2.0])
    rows = text.strip().splitlines()
    assert rows[0] == "lambda_norm,log_density"
    assert float(rows[2].split(",")[1]) == pytest.approx(np.log(4.0))
