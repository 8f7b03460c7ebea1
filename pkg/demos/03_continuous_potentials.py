#!/usr/bin/env python3
"""Continuous radial potentials against their closed forms.

With sigma a fine midpoint-grid surrogate of Lebesgue measure on the line and
mu a unit mass at the origin, the cutoff kernel k(r) = r^(-1/2) gives closed
forms for the cumulative kernel, the Wolff potential, the kernel maximal
function, and the energy.  The table shows the computed values converging to
those forms as the grid refines, with the characteristic sqrt(cell/r) error
of the midpoint surrogate at small radii.
"""

import math

from wolffpot import (
    AtomicMeasure,
    Exponents,
    bar_k,
    energy_continuous,
    lebesgue_grid,
    m_k_maximal,
    riesz_kernel,
    wolff_continuous,
)


def main():
    kern = riesz_kernel(0.5, 1, cutoff=1.0)
    delta0 = AtomicMeasure([[0.0]], [1.0])
    exps = Exponents(p=2.0)

    print("cumulative kernel bar_k(r)(0) vs 2 r^(-1/2):")
    print(f"{'grid level':>10} " + " ".join(f"r=2^-{e:<2}" for e in (6, 4, 2, 0)))
    for level in (8, 10, 12, 14):
        grid = lebesgue_grid([(-2.0, 2.0)], level)
        row = []
        for e in (6, 4, 2, 0):
            r = 2.0 ** -e
            row.append(bar_k(kern, grid, [0.0], r) / (2 * r ** -0.5) - 1.0)
        print(f"{level:>10} " + " ".join(f"{v:+.4f}" for v in row))
    print("(relative errors; they halve with every two extra levels)\n")

    grid = lebesgue_grid([(-2.0, 2.0)], 12)
    print("Wolff potential W(x) vs 4 ln(1/|x|), grid level 12:")
    for e in (5, 4, 3, 2, 1):
        x = 2.0 ** -e
        got = wolff_continuous(kern, grid, delta0, exps, [x])
        want = 4 * math.log(1 / x)
        print(f"  |x| = 2^-{e}:  {got:9.5f} vs {want:9.5f}  ({got/want-1:+.3%})")

    print("\nkernel maximal function M_k(x) vs 2 |x|^(-1/2):")
    for e in (4, 2, 1):
        x = 2.0 ** -e
        got = m_k_maximal(kern, grid, delta0, [x])
        want = 2 * x ** -0.5
        print(f"  |x| = 2^-{e}:  {got:9.5f} vs {want:9.5f}  ({got/want-1:+.3%})")

    kern34 = riesz_kernel(0.75, 1, cutoff=1.0)
    print("\nenergy for the exponent-3/4 kernel vs the exact integral 4:")
    for level in (8, 10, 12, 14):
        g = lebesgue_grid([(-1.0, 1.0)], level)
        e = energy_continuous(kern34, delta0, g, exps)
        print(f"  level {level}: {e:.6f}  ({e/4-1:+.3%})")


if __name__ == "__main__":
    main()
