import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symkernel.barycentric import (CutoffProfile, chart_values_csv, charts, directional_symbol_check,
                                   normalized_chart, partition_denominator, partition_deviation, raw_chart,
                                   select_c1, support_verify)
from symkernel.errors import ConfigurationError, DomainError
from symkernel.rootsys import build_root_system

PROFILE = CutoffProfile(0.1)


def test_profile_shape():
    r = np.array([-1.0, -0.1, -0.05, 0.0, 0.3])
    v = PROFILE(r)
    assert v[0] == 0.0 and v[1] == 0.0 and v[3] == 1.0 and v[4] == 1.0
    assert 0 < v[2] < 1
    assert np.all(np.diff(PROFILE(np.linspace(-0.2, 0.1, 200))) >= 0)
    with pytest.raises(DomainError):
        CutoffProfile(0.0)


@pytest.mark.parametrize("label", ["H2", "H5", "SL3R"])
def test_partition_sums_to_one(label):
    assert partition_deviation(build_root_system(label), PROFILE, 10_000, seed=1) < 1e-12


def test_rank_one_charts_are_halves():
    rs = build_root_system("H3")
    lam = np.array([[2.0], [-0.5]])
    for c in charts(rs, PROFILE):
        assert np.allclose(normalized_chart(c, lam), 0.5)


def test_chart_names_and_count():
    cs = charts(build_root_system("SL3R"), PROFILE)
    assert len(cs) == 12
    assert cs[0].name == "w=e:j=1"
    assert len({c.name for c in cs}) == 12


@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(-20, 20))
def test_homogeneity_power_of_two_exact(a, b, k):
    rs = build_root_system("SL3R")
    lam = np.array([a, b])
    if np.linalg.norm(lam) < 1e-3:
        return
    c = charts(rs, PROFILE)[3]
    assert normalized_chart(c, lam * 2.0**k) == normalized_chart(c, lam)


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(1e-3, 1e3))
def test_homogeneity_general_scale(a, b, s):
    rs = build_root_system("SL3R")
    lam = np.array([a, b])
    if np.linalg.norm(lam) < 1e-3:
        return
    for c in charts(rs, PROFILE)[:4]:
        assert abs(normalized_chart(c, s * lam) - normalized_chart(c, lam)) <= 1e-14


def test_zero_lambda_rejected():
    c = charts(build_root_system("SL3R"), PROFILE)[0]
    with pytest.raises(DomainError):
        raw_chart(c, np.zeros(2))


def test_denominator_guard():
    rs = build_root_system("SL3R")
    tiny = CutoffProfile(1e-9)
    u = np.array([1.0, 1e-3])
    assert partition_denominator(rs, tiny, u) >= 0


def test_support_bounds_a2():
    rs = build_root_system("SL3R")
    for c in charts(rs, PROFILE):
        rep = support_verify(c)
        assert rep.passed
        assert rep.kappa >= 0.05
        # in A2 each fundamental weight is orthogonal to exactly one positive root
        assert len(rep.orthogonal_roots) == 1


def test_support_sample_guard():
    c = charts(build_root_system("SL3R"), PROFILE)[0]
    with pytest.raises(DomainError):
        support_verify(c, samples=10)


def test_select_c1():
    assert select_c1(build_root_system("SL3R")) == pytest.approx(0.1)
    with pytest.raises(ConfigurationError):
        select_c1(build_root_system("SL3R"), kappa_min=0.99)


@pytest.mark.parametrize("order,bound", [(0, 3), (1, 2), (2, 1)])
def test_symbol_exponents_a2(order, bound):
    rs = build_root_system("SL3R")
    rep = directional_symbol_check(charts(rs, PROFILE)[0], order=order)
    assert rep.passed
    assert rep.exponent <= bound + 0.1


def test_symbol_exponents_h3():
    rs = build_root_system("H3")
    reps = [directional_symbol_check(charts(rs, PROFILE)[0], order=k) for k in (0, 1, 2)]
    assert [round(r.exponent, 2) for r in reps] == [2.0, 1.0, 0.0]


def test_chart_csv():
    text = chart_values_csv(build_root_system("SL3R"), PROFILE, n_angles=36)
    rows = text.strip().splitlines()
    assert rows[0] == "angle,chart,value"
    assert len(rows) == 1 + 12 * 36
    assert all(len(r.split(",")) == 3 for r in rows)
