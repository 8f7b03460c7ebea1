import math

import numpy as np
import pytest

from wolffpot import (
    AtomicMeasure,
    DyadicKernelMap,
    InvalidKernelError,
    LatticeWindow,
    bar_field,
    bar_field_naive,
    bar_k,
    bernoulli_cascade,
    constant_kernel,
    dlbo_constant,
    lbo_constant,
    lebesgue_grid,
    log_kernel,
    riesz_kernel,
)


def test_riesz_values():
    k = riesz_kernel(0.5, 1)
    assert k(1.0) == 1.0
    assert k(0.25) == 2.0
    assert riesz_kernel(0.5, 1, cutoff=1.0)(2.0) == 0.0
    with pytest.raises(InvalidKernelError):
        riesz_kernel(1.5, 1)
    with pytest.raises(InvalidKernelError):
        riesz_kernel(0.0, 2)


def test_riesz_log_primitive():
    k = riesz_kernel(0.5, 1)
    # int_a^b s^(-3/2) ds = 2 (a^-1/2 - b^-1/2)
    assert k.log_primitive(0.25, 1.0) == pytest.approx(2.0, rel=1e-14)
    assert k.log_primitive(0.25, math.inf) == pytest.approx(4.0, rel=1e-14)
    assert k.log_primitive(0.0, 1.0) == math.inf
    a, b, c = 0.1, 0.4, 2.3
    assert k.log_primitive(a, b) + k.log_primitive(b, c) == pytest.approx(
        k.log_primitive(a, c), rel=1e-13
    )


def test_log_kernel_values():
    C = math.e ** 1.5
    k = log_kernel(1.5, C, 1)
    assert k(1.0) == pytest.approx(1.5 ** -1.5, rel=1e-14)
    assert k(2.0) == 0.0
    with pytest.raises(InvalidKernelError):
        log_kernel(1.5, 0.9 * math.exp(1.5), 1)


def test_log_kernel_primitive_additive():
    k = log_kernel(1.5, math.e ** 1.5, 1)
    a, b, c = 0.01, 0.2, 0.9
    assert k.log_primitive(a, b) + k.log_primitive(b, c) == pytest.approx(
        k.log_primitive(a, c), rel=1e-9
    )
    assert k.log_primitive(0.5, 10.0) == k.log_primitive(0.5, 1.0)  # cutoff clamp


def test_monotonicity_scan_rejects_increasing_profile():
    from wolffpot.kernels import RadialKernel, _validate_nonincreasing

    bad = RadialKernel(lambda r: r, lambda a, b: b - a, name="increasing")
    with pytest.raises(InvalidKernelError):
        _validate_nonincreasing(bad, 1e-3, 1.0)


def test_bar_root_matches_geometric_series():
    D = 6
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, D)
    grid = lebesgue_grid([(0.0, 1.0)], D)
    bf = bar_field(DyadicKernelMap.from_radial(riesz_kernel(0.5, 1)), grid, w)
    expect = (1 - 2.0 ** (-(D + 1) / 2)) / (1 - 2.0 ** -0.5)
    for x in (0.01, 0.37, 0.99):
        assert bf.bar(w.cube(0, (0,)), [x]) == pytest.approx(expect, rel=1e-13)


def test_bar_chain_example():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 2)
    sigma = AtomicMeasure([[0.1]], [1.0])
    bf = bar_field(DyadicKernelMap.constant(1.0), sigma, w)
    # chain through x=0.3 meets mass only in [0,1) and [0,0.5)
    assert bf.bar(w.cube(0, (0,)), [0.3]) == 2.0
    # zero-mass cube gives zero by convention
    assert bf.bar(w.cube(1, (1,)), [0.7]) == 0.0
    # x outside Q gives zero
    assert bf.bar(w.cube(1, (0,)), [0.7]) == 0.0


def test_bar_field_matches_naive_exactly():
    rng = np.random.default_rng(17)
    for trial in range(10):
        n = 1 if trial % 2 == 0 else 2
        depth = 4
        w = LatticeWindow.from_box([(0.0, 1.0)] * n, 0, depth)
        sigma = AtomicMeasure(rng.uniform(0, 1, (25, n)), 2.0 ** rng.uniform(-4, 4, 25))
        table = {key: float(2.0 ** rng.uniform(-4, 4)) for key in w.keys()}
        K = DyadicKernelMap.from_table(table)
        fast = bar_field(K, sigma, w)
        naive = bar_field_naive(K, sigma, w)
        pts = rng.uniform(0, 1, (5, n))
        for key in list(w.keys())[:: max(1, w.n_cubes // 13)]:
            cube = w.cube(*key)
            for x in pts:
                a, b = fast.bar(cube, x), naive.bar(cube, x)
                assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_bar_prefix_chain_identity():
    rng = np.random.default_rng(23)
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 5)
    sigma = AtomicMeasure(rng.uniform(0, 1, (20, 1)), rng.uniform(0.1, 2, 20))
    bf = bar_field(DyadicKernelMap.from_radial(riesz_kernel(0.4, 1)), sigma, w)
    x = [0.613]
    leaf = w.leaf_key(x)
    for key in w.chain_keys(x):
        cube = w.cube(*key)
        m = sigma.cube_mass(cube)
        if m <= 0:
            continue
        parent = w.parent_key(key)
        above = bf.prefix(parent) if parent else 0.0
        assert bf.bar(cube, x) * m == pytest.approx(bf.prefix(leaf) - above, rel=1e-12)


def test_bar_k_closed_form_refinement():
    # Lebesgue + Riesz alpha=1/2: bar_k(r) -> 2 r^(-1/2) as the grid refines
    k = riesz_kernel(0.5, 1)
    r = 0.25
    errs = []
    for level in (8, 10, 12):
        g = lebesgue_grid([(-1.0, 1.0)], level)
        errs.append(abs(bar_k(k, g, [0.0], r) / (2 * r ** -0.5) - 1.0))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.02


def test_bar_k_divergence_and_empty():
    k = riesz_kernel(0.5, 1)
    assert bar_k(k, AtomicMeasure([[0.2]], [1.0]), [0.2], 0.5) == math.inf
    assert bar_k(k, AtomicMeasure([[5.0]], [1.0]), [0.0], 0.5) == 0.0
    # bounded kernel with no mass at the center stays finite
    assert math.isfinite(bar_k(constant_kernel(1.0), AtomicMeasure([[0.3]], [1.0]), [0.0], 1.0))
    # but an atom at the center diverges for any nonzero kernel
    assert bar_k(constant_kernel(1.0), AtomicMeasure([[0.0]], [1.0]), [0.0], 1.0) == math.inf


def test_dlbo_riesz_lebesgue_is_one():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 8)
    A = dlbo_constant(
        DyadicKernelMap.from_radial(riesz_kernel(0.5, 1)), lebesgue_grid([(0.0, 1.0)], 8), w
    )
    assert A == pytest.approx(1.0, abs=1e-12)


def test_dlbo_cascade_geometric_bound():
    n, alpha, gamma = 1, 0.75, 0.415
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 10)
    A = dlbo_constant(
        DyadicKernelMap.from_radial(riesz_kernel(alpha, n)), bernoulli_cascade(gamma, 10), w
    )
    assert 1.0 <= A <= 1.0 / (1.0 - 2.0 ** (n - alpha - gamma)) + 1e-9


def test_dlbo_point_mass_diagnostic():
    w = LatticeWindow.from_box([(0.0, 1.0)], 0, 8)
    A = dlbo_constant(
        DyadicKernelMap.from_radial(riesz_kernel(0.5, 1)), AtomicMeasure([[0.3]], [1.0]), w
    )
    assert A > 1.0


def test_lbo_lebesgue_refines_to_one():
    k = riesz_kernel(0.5, 1)
    r = 0.25
    # generic offsets: bar_k is essentially position-free already
    flat = []
    # a point a quarter-cell from an atom perturbs bar_k by O(sqrt(cell))
    near_atom = []
    for level in (6, 8, 10):
        g = lebesgue_grid([(-1.0, 1.0)], level)
        ys = [[f * r] for f in (-2 / 3, -1 / 3, 1 / 3, 2 / 3)]
        flat.append(lbo_constant(k, g, [([0.0], r, ys)]))
        cell = 2.0 ** -level
        ys2 = ys + [[0.5 * cell + 0.25 * cell]]
        near_atom.append(lbo_constant(k, g, [([0.0], r, ys2)]))
    assert all(v == pytest.approx(1.0, abs=1e-9) for v in flat)
    assert near_atom[0] > near_atom[1] > near_atom[2]
    assert near_atom[-1] < 1.2


def test_lbo_skips_degenerate():
    k = riesz_kernel(0.5, 1)
    sigma = AtomicMeasure([[0.0]], [1.0])
    # one degenerate ball (no mass), one fine
    val = lbo_constant(k, sigma, [(([5.0]), 0.1, [[5.0]]), (([0.5]), 1.0, [[0.4], [0.6]])])
    assert math.isfinite(val)
