#!/usr/bin/env python3
"""Dyadic energies, Wolff potentials, and their two-sided comparison.

Builds a random pair of atomic measures on the unit interval, computes the
operator T, the energy E = int T[mu]^{p'} dsigma, the Wolff potential W, and
the kernel maximal function M, and shows that

    E,   int W dmu,   int M^{p'} dsigma

stay within instance-independent factors of one another while each varies
over orders of magnitude across instances.  Also demonstrates the exact
algebraic identity E = int T[(T[mu])^{p'-1} dsigma] dmu.
"""

import numpy as np

from wolffpot import (
    AtomicMeasure,
    DyadicKernelMap,
    DyadicScene,
    Exponents,
    LatticeWindow,
    energy_dyadic,
    riesz_kernel,
)
from wolffpot.verify import check_fubini, check_energy_wolff_ratio, wolff_integral


def random_measure(rng, n_atoms):
    return AtomicMeasure(
        rng.uniform(0, 1, (n_atoms, 1)), 2.0 ** rng.uniform(-8, 8, n_atoms)
    )


def main():
    depth = 7
    window = LatticeWindow.from_box([(0.0, 1.0)], 0, depth)
    exps = Exponents(p=2.0)

    print(f"window: [0,1) refined {depth} levels ({window.n_cubes} cubes)")
    print(f"exponents: p = {exps.p}, p' = {exps.p_prime}\n")
    print(f"{'seed':>4} {'alpha':>6} {'E':>12} {'int W dmu':>12} "
          f"{'int M^p dsig':>12} {'E/intW':>8} {'fubini':>9}")

    ratios = []
    for seed in range(12):
        rng = np.random.default_rng([2026, seed])
        alpha = float(rng.uniform(0.2, 0.8))
        K = DyadicKernelMap.from_radial(riesz_kernel(alpha, 1))
        sigma = random_measure(rng, 80)
        mu = random_measure(rng, 80)

        e = energy_dyadic(K, mu, sigma, exps, window)
        wm = wolff_integral(K, sigma, mu, exps, window)
        scene = DyadicScene(K, sigma, mu, window)
        mm = sum(
            w * scene.maximal(x) ** exps.p_prime
            for x, w in zip(sigma.positions, sigma.weights)
        )
        fub = check_fubini(K, mu, sigma, exps, window)
        ratio = check_energy_wolff_ratio(K, mu, sigma, exps, window)
        ratios.append(ratio)
        print(f"{seed:>4} {alpha:>6.3f} {e:>12.4g} {wm:>12.4g} "
              f"{mm:>12.4g} {ratio:>8.3f} {fub:>9.1e}")

    print(f"\nenergy/Wolff-mass ratios span [{min(ratios):.3f}, {max(ratios):.3f}]"
          " while the quantities themselves span orders of magnitude;")
    print("the Fubini column is the exact-identity residual (pure roundoff).")


if __name__ == "__main__":
    main()
