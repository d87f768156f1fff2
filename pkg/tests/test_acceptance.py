"""Acceptance criteria 1-10, each printed as a pass/fail line in the terminal summary."""

import time
from fractions import Fraction

import numpy as np
from conftest import ACCEPTANCE_LINES

from symkernel import barycentric as bary
from symkernel import dispersive as disp
from symkernel import kernel as kern
from symkernel import spherical as sph
from symkernel.plancherel import asymptotic_slope, density
from symkernel.rootsys import LABELS, build_root_system, weyl_group


def record(n, name, ok, detail, start, budget):
    elapsed = time.perf_counter() - start
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {n:2d} [{status}] {name}: {detail} ({elapsed:.1f}s, budget {budget}s)")
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {budget}s"


def test_01_dimension_table():
    start = time.perf_counter()
    expect = {"H2": (2, 3), "H3": (3, 3), "H5": (5, 3), "SL3R": (5, 8)}
    got = {k: (build_root_system(k).dim, build_root_system(k).pseudo_dim) for k in expect}
    rules = []
    for label in LABELS:
        rs = build_root_system(label)
        rules.append(rs.pseudo_dim == 3 if rs.rank == 1 and label.startswith("H") else True)
        if label == "SL2C":
            rules.append(rs.pseudo_dim == rs.dim)
        if label in ("SL2R", "SL3R"):
            rules.append(rs.pseudo_dim == 2 * rs.dim - rs.rank)
    ok = got == expect and all(rules)
    record(1, "dimension table", ok, f"(d, D) = {got}", start, 1)


def test_02_plancherel_asymptotics():
    start = time.perf_counter()
    worst = 0.0
    for label in LABELS:
        rs = build_root_system(label)
        for regime in ("small", "large"):
            fit = asymptotic_slope(rs, regime)
            worst = max(worst, abs(fit.slope - fit.target))
    record(2, "Plancherel slopes", worst <= 0.05, f"max |slope - target| = {worst:.2e} (tol 0.05)", start, 10)


def test_03_c_function_oracles():
    start = time.perf_counter()
    v = np.geomspace(0.01, 20.0, 400)
    worst = {}
    for label, oracle in (("H2", v * np.tanh(np.pi * v)), ("H3", v**2)):
        rs = build_root_system(label)
        lam = v[:, None] * rs.positive_roots[0] / (rs.positive_roots[0] @ rs.positive_roots[0])
        ratio = density(rs, lam) / oracle
        const = np.median(ratio)
        worst[label] = float(np.max(np.abs(ratio / const - 1)))
    ok = max(worst.values()) < 1e-10
    record(3, "c-function oracles", ok,
           f"max relative error H2 {worst['H2']:.1e}, H3 {worst['H3']:.1e} (tol 1e-10)", start, 5)


def test_04_partition_of_unity():
    start = time.perf_counter()
    devs, homog = {}, 0.0
    rng = np.random.default_rng(4)
    for label in ("H2", "H3", "SL2C", "SL3R"):
        rs = build_root_system(label)
        prof = bary.CutoffProfile(bary.select_c1(rs))
        devs[label] = bary.partition_deviation(rs, prof, 10_000, seed=4)
        lam = rng.standard_normal((200, rs.rank))
        for c in bary.charts(rs, prof):
            base = bary.normalized_chart(c, lam)
            for s in (0.25, 2.0, 1024.0):
                if not np.array_equal(bary.normalized_chart(c, s * lam), base):
                    homog = np.inf
            homog = max(homog, float(np.max(np.abs(bary.normalized_chart(c, 3.7 * lam) - base))))
    ok = max(devs.values()) < 1e-12 and homog <= 1e-14
    record(4, "partition of unity", ok,
           f"max |sum - 1| = {max(devs.values()):.1e} (tol 1e-12); homogeneity exact for powers of two, "
           f"{homog:.1e} otherwise", start, 10)


def test_05_chart_support_margins():
    start = time.perf_counter()
    rs = build_root_system("SL3R")
    c1 = bary.select_c1(rs)
    reps = [bary.support_verify(c, samples=4000) for c in bary.charts(rs, bary.CutoffProfile(c1))]
    kappa = min(r.kappa for r in reps)
    ok = all(r.passed for r in reps) and len(reps) == 2 * len(weyl_group(rs))
    record(5, "chart support margins (A2)", ok, f"C1 = {c1:.4g}, min kappa over {len(reps)} charts = {kappa:.4f} "
           f"(need >= 0.05)", start, 30)


def test_06_spherical_oracle():
    start = time.perf_counter()
    rs = build_root_system("H3")
    lam = np.linspace(0.0, 10.0, 20)
    radii = np.linspace(0.1, 5.0, 20)
    worst_q, worst_env, env_ratio = 0.0, 0.0, []
    for r in radii:
        closed = sph.phi_closed_form(rs, lam, r).value
        q = sph.phi_quadrature(rs, lam[:, None], np.array([r]))
        worst_q = max(worst_q, float(np.max(np.abs(q.value - closed) / q.error)))
        phi0 = float(sph.phi_closed_form(rs, np.zeros(1), r).value)
        worst_env = max(worst_env, float(np.max(np.abs(closed) / phi0)))
        env_ratio.append(phi0 / float(sph.phi0_envelope(rs, np.array([r]))))
    res = max(float(np.max(sph.radial_laplacian_residual(L, np.linspace(0.5, 5.0, 20)))) for L in lam)
    ok = worst_q <= 1.0 and worst_env <= 1.01 and res < 1e-6 and 1 <= min(env_ratio) and max(env_ratio) < 2
    record(6, "spherical oracle (H3)", ok,
           f"max |quad - closed| / err = {worst_q:.2f}; max |phi_l| / phi_0 = {worst_env:.4f}; "
           f"phi_0 / envelope in [{min(env_ratio):.3f}, {max(env_ratio):.3f}]; residual {res:.1e}", start, 60)


def test_07_subordination():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    t = rng.uniform(0.1, 10.0, 20) * rng.choice([-1.0, 1.0], 20)
    mu = rng.uniform(0.0, 5.0, 20)
    err = max(abs(kern.subordination_check(a, b) - np.exp(-1j * a * b * b)) for a, b in zip(t, mu))
    record(7, "subordination identity", err < 1e-6, f"max error over 20 pairs = {err:.1e} (tol 1e-6)", start, 5)


def test_08_kernel_oracle():
    start = time.perf_counter()
    rs = build_root_system("H3")
    ratios = []
    for t in np.geomspace(0.1, 10.0, 5):
        for r in np.linspace(0.5, 5.0, 5):
            s = kern.schrodinger_kernel(rs, t, np.array([r]))
            ratios.append(abs(s.value) / float(kern.h3_kernel_modulus(t, r)))
    ratios = np.array(ratios)
    const = np.median(ratios)
    worst = float(np.max(np.abs(ratios / const - 1)))
    record(8, "kernel oracle (H3)", worst < 1e-3,
           f"max relative deviation {worst:.1e} after one fitted constant {const:.6f} (tol 1e-3)", start, 120)


def test_09_decay_slopes():
    start = time.perf_counter()
    cases = [("H3", "small", [0.05], None, -1.5, 0.1), ("H3", "large", [0.5], None, -1.5, 0.1),
             ("H2", "small", [0.05], None, -1.0, 0.1), ("H2", "large", [0.5], (10.0, 1000.0), -1.5, 0.1),
             ("SL3R", "large", [0.0, 0.0], (10.0, 1000.0), -4.0, 0.2)]
    ok, detail = True, []
    for label, regime, x, window, target, tol in cases:
        fit = kern.decay_slope(build_root_system(label), np.array(x), regime, window, jobs=4)
        good = abs(fit.slope - target) <= tol and fit.target == target
        ok &= good
        detail.append(f"{label}/{regime}[{fit.times[0]:g},{fit.times[-1]:g}]={fit.slope:.3f}")
    record(9, "decay slopes", ok, "; ".join(detail), start, 600)


def test_10_dispersive_layer():
    start = time.perf_counter()
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 12))
        q, qt = (np.inf if rng.random() < 0.1 else 2 + rng.exponential(4.0) for _ in range(2))
        small, large = disp.dispersive_exponents(d, 3, q, qt)
        ref = d * max(0.5 - (0.0 if q == np.inf else 1 / q), 0.5 - (0.0 if qt == np.inf else 1 / qt))
        worst = max(worst, abs(small - ref), abs(large - 1.5))
    mismatches = 0
    for d in (3, 4, 5):
        for i in range(201):
            for j in range(201):
                # (1/p, 1/q) = (i, j) / 400; 2/p + d/q >= d/2 becomes 2i + dj >= 200d
                brute = (0 < i <= 200 and 0 < j < 200 and 2 * i + d * j >= 200 * d) or (i, j) == (0, 200)
                pair = disp.AdmissiblePair.from_reciprocals(Fraction(i, 400), Fraction(j, 400), d)
                mismatches += disp.is_admissible(pair) != brute
    bullets = 0
    d = 5
    for cls, thr, flag in (("L2", 1 + Fraction(4, d), "gauge-invariant"), ("H1", 1 + Fraction(4, d - 2), "defocusing")):
        for gamma, where in ((thr - Fraction(1, 10), -1), (thr, 0), (thr + Fraction(1, 10), 1)):
            small = disp.classify_regime(d, gamma, cls, None, "small")
            arb = disp.classify_regime(d, gamma, cls, None, "arbitrary")
            up = disp.classify_regime(d, gamma, cls, [flag], "arbitrary")
            expect = ((disp.GLOBAL, disp.SCATTERS) if where <= 0 else (disp.OUTSIDE, disp.NOT_ASSERTED),
                      disp.LOCAL if where < 0 else disp.OUTSIDE,
                      disp.GLOBAL if where < 0 else disp.OUTSIDE)
            bullets += ((small.verdict, small.scattering), arb.verdict, up.verdict) == expect
    ok = worst < 1e-12 and mismatches == 0 and bullets == 6
    record(10, "dispersive layer", ok, f"exponent error {worst:.1e} on 1000 draws; {mismatches} admissibility "
           f"mismatches on 3 x 201^2 grid; {bullets}/6 threshold cases", start, 10)
