import math

import numpy as np
import pytest

from wolffpot import (
    AtomicMeasure,
    DegenerateInputError,
    DyadicKernelMap,
    Exponents,
    LatticeWindow,
    lebesgue_grid,
    riesz_kernel,
)
from wolffpot.potentials import lambda_substitution
from wolffpot.verify import (
    check_a_chain,
    check_bar_lemmas,
    check_counterexample_fields,
    check_fubini,
    check_kernel_dilation,
    check_energy_wolff_ratio,
    counterexample_series,
    random_instance,
    shifted_average_check,
    summation_by_parts_min_slack,
    trace_constant_q1,
    trace_test_upper_triangle,
    truncation_sweep,
)

BETA, CEX = 1.5, math.e ** 1.5


def test_fubini_single_cube():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 0)
    sigma = lebesgue_grid([(0.0, 1.0)], 0)
    mu = AtomicMeasure([[0.5]], [0.7])
    err = check_fubini(DyadicKernelMap.constant(1.0), mu, sigma, Exponents(p=2.0), w)
    assert err <= 1e-12
    assert check_fubini(DyadicKernelMap.constant(1.0), AtomicMeasure.empty(1),
                        sigma, Exponents(p=2.0), w) == 0.0


def test_fubini_random_instances():
    worst = 0.0
    for i in range(20):
        inst = random_instance([101, i], n=1 + i % 2, depth=4 + i % 4,
                               n_sigma=40, n_mu=40)
        ex = Exponents.from_p_prime((1.5, 2.0, 3.0)[i % 3])
        worst = max(worst, check_fubini(inst.K, inst.mu, inst.sigma, ex, inst.window))
    assert worst <= 1e-9


def test_a_chain_single_cube():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 0)
    sigma = lebesgue_grid([(0.0, 1.0)], 0)
    ratios = check_a_chain({(0, (0,)): 1.0}, sigma, 2.0, w)
    assert ratios == (1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DegenerateInputError):
        check_a_chain({(0, (0,)): 0.0}, sigma, 2.0, w)


def test_a_chain_proof_constants():
    for i in range(15):
        inst = random_instance([102, i], depth=5, n_sigma=40, n_mu=40)
        lam = lambda_substitution(inst.K, inst.sigma, inst.mu, inst.window)
        for s in (1.5, 2.0):
            r = check_a_chain(lam, inst.sigma, s, inst.window)
            assert r[0] <= s
            assert r[1] <= 1.0 + 1e-12
        r = check_a_chain(lam, inst.sigma, 3.0, inst.window)
        assert r[1] <= 1.0 + 1e-12


def test_summation_by_parts_random_weights():
    rng = np.random.default_rng(12)
    inst = random_instance([103, 0], depth=6)
    lam = {key: float(2.0 ** rng.uniform(-6, 6)) for key in inst.window.keys()}
    pts = list(inst.sigma.positions) + list(inst.mu.positions)
    for s in (1.0, 1.5, 2.0, 3.0):
        assert summation_by_parts_min_slack(lam, inst.window, pts, s) >= -1e-12


def test_energy_wolff_ratio_single_cube_and_consistency():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 0)
    sigma = lebesgue_grid([(0.0, 1.0)], 0)
    mu = AtomicMeasure([[0.5]], [0.7])
    K = DyadicKernelMap.constant(1.0)
    assert check_energy_wolff_ratio(K, mu, sigma, Exponents(p=2.0), w) == pytest.approx(1.0, abs=1e-12)
    # the ratio equals A1/A2 under the weight substitution
    inst = random_instance([104, 1], depth=5)
    ex = Exponents(p=2.0)
    ratio = check_energy_wolff_ratio(inst.K, inst.mu, inst.sigma, ex, inst.window)
    lam = lambda_substitution(inst.K, inst.sigma, inst.mu, inst.window)
    a_ratio = check_a_chain(lam, inst.sigma, ex.p_prime, inst.window)[0]
    assert ratio == pytest.approx(a_ratio, rel=1e-12)


def test_trace_q1_duality():
    for i in range(6):
        inst = random_instance([105, i], depth=5)
        res = trace_constant_q1(inst.K, inst.mu, inst.sigma, Exponents(p=2.0),
                                inst.window, probes=60, seed=i)
        assert res.achieved_ratio == pytest.approx(res.dual_constant, rel=1e-8)
        assert res.probe_max <= res.dual_constant * (1 + 1e-10)
        assert res.pairing_gap <= 1e-10


def test_trace_upper_triangle_depth_behaviour():
    # colocated point masses give a divergent Wolff norm and a probe ratio
    # growing with depth; Lebesgue data stay stable
    ex = Exponents(p=2.0, q=1.5)
    K = DyadicKernelMap.from_radial(riesz_kernel(0.5, 1))
    atom = AtomicMeasure([[0.3]], [1.0])
    sups, norms = [], []
    for depth in (4, 6, 8):
        w = LatticeWindow.from_box([(0.0, 1.0)], 0, depth)
        res = trace_test_upper_triangle(K, atom, atom, ex, w, trials=20, seed=1)
        sups.append(res.empirical_sup)
        norms.append(res.wolff_norm)
    assert norms[0] < norms[1] < norms[2]
    assert sups[0] < sups[1] < sups[2]

    stable = []
    for depth in (4, 6, 8):
        w = LatticeWindow.from_box([(0.0, 1.0)], 0, depth)
        g = lebesgue_grid([(0.0, 1.0)], depth)
        res = trace_test_upper_triangle(K, g, g, ex, w, trials=20, seed=1)
        assert res.dlbo == pytest.approx(1.0, abs=1e-12)
        stable.append(res.empirical_sup)
    assert stable[2] <= stable[0] * 2.0


def test_trace_upper_empty_mu():
    ex = Exponents(p=2.0, q=1.5)
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 4)
    g = lebesgue_grid([(0.0, 1.0)], 4)
    res = trace_test_upper_triangle(DyadicKernelMap.constant(1.0),
                                    AtomicMeasure.empty(1), g, ex, w, trials=5, seed=0)
    assert res.wolff_norm == 0.0 and res.empirical_sup == 0.0


def test_counterexample_series_bounds():
    se1, sw1 = counterexample_series(BETA, CEX, 1, 10 ** 3)
    se2, sw2 = counterexample_series(BETA, CEX, 1, 10 ** 6)
    assert sw2 - sw1 >= 9.0
    assert se2 - se1 <= 0.2
    # direct-summation oracle, independent loop
    direct = sum(1.0 / (1.5 + l * math.log(2.0)) ** BETA for l in range(1001))
    assert counterexample_series(BETA, CEX, 1, 1000)[0] == pytest.approx(direct, rel=1e-12)


def test_counterexample_series_growth_exponent():
    # at beta = 1.25 the divergent series grows like sqrt(L)
    _, s1 = counterexample_series(1.25, math.e ** 1.25, 1, 10 ** 4)
    _, s4 = counterexample_series(1.25, math.e ** 1.25, 1, 4 * 10 ** 4)
    assert s4 / s1 == pytest.approx(2.0, rel=0.05)


def test_counterexample_fields_small_depths():
    e6, wbar6, iw6 = check_counterexample_fields(BETA, CEX, 6)
    e8, wbar8, iw8 = check_counterexample_fields(BETA, CEX, 8)
    se6, _ = counterexample_series(BETA, CEX, 1, 6)
    # the dyadic field energy collapses to the scalar series squared
    assert e6 == pytest.approx(se6 ** 2, rel=1e-12)
    assert wbar8 > wbar6
    assert math.isfinite(e8) and iw8 > 0


def test_shifted_average_stability():
    k = riesz_kernel(0.5, 1, cutoff=1.0)
    mu = AtomicMeasure([[0.4]], [1.3])
    xs = [[-0.3], [0.1], [0.7], [1.2]]
    ratios = [
        shifted_average_check(k, mu, 0, 4000, xs, seed)["max_ratio"]
        for seed in (1, 2, 3)
    ]
    assert all(math.isfinite(r) and r > 0 for r in ratios)
    spread = (max(ratios) - min(ratios)) / (sum(ratios) / 3)
    assert spread < 0.2
    # both sides are linear in mu, so the ratio is scale-free
    r1 = shifted_average_check(k, mu, 0, 2000, xs, 9)["max_ratio"]
    r2 = shifted_average_check(k, mu.scaled(7.0), 0, 2000, xs, 9)["max_ratio"]
    assert r1 == pytest.approx(r2, rel=1e-12)
    # empty mu is a vacuous pass
    assert shifted_average_check(k, AtomicMeasure.empty(1), 0, 100, xs, 1)["max_ratio"] == 0.0


def test_kernel_dilation_ratios():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 8)
    g = lebesgue_grid([(0.0, 1.0)], 8)
    ex = Exponents(p=2.0, q=1.5)
    k = riesz_kernel(0.5, 1)
    assert check_kernel_dilation(k, g, g, ex, w, 1.0) == (1.0, 1.0)
    sr, nr = check_kernel_dilation(k, g, g, ex, w, 0.25)
    assert sr == pytest.approx(4.0 ** (1 - 0.5), rel=1e-12)
    assert nr == pytest.approx(4.0 ** (1 - 0.5), rel=1e-12)
    from wolffpot import log_kernel

    sr, nr = check_kernel_dilation(log_kernel(BETA, CEX, 1), g, g, ex, w, 0.25)
    assert math.isfinite(sr) and math.isfinite(nr) and sr > 0 and nr > 0


def test_bar_lemmas_ratios():
    w = LatticeWindow.from_box([(-2.0, 2.0)], 0, 12)
    g = lebesgue_grid([(-2.0, 2.0)], 12)
    samples = [([x], r) for x in (0.013, 0.41, -0.27) for r in (0.25, 0.125)]
    reform, relation, doubling = check_bar_lemmas(riesz_kernel(0.5, 1), g, w, samples)
    assert reform == pytest.approx(1.0, abs=0.05)
    # dyadic-to-continuous comparison approaches alpha / (1 - 2^-alpha)
    assert relation == pytest.approx(0.5 / (1 - 2 ** -0.5), rel=0.02)
    assert doubling <= 2.0 * 1.05
    with pytest.raises(DegenerateInputError):
        check_bar_lemmas(riesz_kernel(0.5, 1), AtomicMeasure([[50.0]], [1.0]), w,
                         [([0.0], 0.25)])


def test_truncation_sweep_flags():
    # identity error stays flat
    flat = truncation_sweep(lambda d: 1e-12, [2, 4, 6])
    assert flat.converged
    # the truncated geometric bar value converges at rate 2^(-alpha) per level
    geo = truncation_sweep(
        lambda d: (1 - 2.0 ** (-(d + 1) / 2)) / (1 - 2.0 ** -0.5), [8, 16, 24], rtol=0.01
    )
    assert geo.converged
    changes = geo.rel_changes
    assert changes[1] < changes[0]
    # the divergent series is flagged
    div = truncation_sweep(
        lambda d: counterexample_series(BETA, CEX, 1, 2 ** d)[1], [4, 8, 12], rtol=0.05
    )
    assert not div.converged
    with pytest.raises(Exception):
        truncation_sweep(lambda d: 1.0, [4, 4])
