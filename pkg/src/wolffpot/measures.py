"""Finite atomic measures and measure diagnostics.

An :class:`AtomicMeasure` is a finite nonnegative weighted point set.  It is
the package's universal stand-in for a locally finite Borel measure: explicit
atom lists model genuinely atomic measures, while fine midpoint grids model
Lebesgue measure at dyadic-cube granularity (cube masses are then exact for
every cube at or above the grid level).

Balls are closed, so ``r -> ball_mass(x, r)`` is a right-continuous step
function; cubes are half-open, so same-level cube masses are exactly additive
over children.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    GridAlignmentError,
    WolffpotError,
)
from .lattice import DyadicCube, Key, LatticeWindow


class AtomicMeasure:
    """Finite atomic measure ``sum_i w_i delta_{x_i}`` with ``w_i >= 0``."""

    def __init__(self, positions, weights):
        pos = np.asarray(positions, dtype=float)
        if pos.ndim == 0:
            pos = pos.reshape(1, 1)
        elif pos.ndim == 1:
            # a flat sequence is read as atoms on the line, one per entry
            pos = pos.reshape(-1, 1)
        w = np.asarray(weights, dtype=float).reshape(-1)
        if pos.shape[0] != w.shape[0]:
            raise WolffpotError(
                f"{pos.shape[0]} positions but {w.shape[0]} weights"
            )
        if not np.all(np.isfinite(pos)):
            raise WolffpotError("positions must be finite")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise WolffpotError("weights must be finite and nonnegative")
        self.positions = pos
        self.weights = w

    @classmethod
    def empty(cls, dimension: int) -> "AtomicMeasure":
        return cls(np.zeros((0, dimension)), np.zeros(0))

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def scaled(self, c: float) -> "AtomicMeasure":
        return AtomicMeasure(self.positions, c * self.weights)

    def translated(self, t) -> "AtomicMeasure":
        return AtomicMeasure(self.positions + np.asarray(t, dtype=float), self.weights)

    # -- masses ---------------------------------------------------------------

    def cube_mass(self, cube: DyadicCube) -> float:
        """Total weight of atoms inside the half-open cube (exact)."""
        if cube.dimension != self.dimension:
            raise DimensionMismatchError(
                f"cube dimension {cube.dimension} != measure dimension {self.dimension}"
            )
        if self.n_atoms == 0:
            return 0.0
        scale = 2.0 ** cube.level
        shifted = (self.positions - np.asarray(cube.shift)) * scale
        inside = np.all(np.floor(shifted) == np.asarray(cube.index), axis=1)
        return float(np.sum(self.weights[inside]))

    def ball_mass(self, center, radius: float) -> float:
        """Total weight of atoms in the closed Euclidean ball ``B(center, radius)``."""
        if radius <= 0:
            raise WolffpotError(f"radius must be positive, got {radius}")
        if self.n_atoms == 0:
            return 0.0
        d = np.linalg.norm(self.positions - np.asarray(center, dtype=float), axis=1)
        return float(np.sum(self.weights[d <= radius]))

    def radial_profile(self, center):
        """Sorted distinct distances from ``center`` and cumulative masses.

        Returns ``(dists, cum)`` with ``cum[j]`` the mass of the closed ball of
        radius ``dists[j]``; this is the jump representation of
        ``r -> ball_mass(center, r)``.
        """
        if self.n_atoms == 0:
            return np.zeros(0), np.zeros(0)
        d = np.linalg.norm(self.positions - np.asarray(center, dtype=float), axis=1)
        order = np.argsort(d, kind="stable")
        d = d[order]
        w = self.weights[order]
        dists, start = np.unique(d, return_index=True)
        cum = np.cumsum(w)
        ends = np.append(start[1:], len(w)) - 1
        return dists, cum[ends]


def lebesgue_grid(box, level: int) -> AtomicMeasure:
    """Midpoint-grid surrogate of Lebesgue measure on an aligned box.

    One atom sits at the center of every level-``level`` cell of the unshifted
    lattice inside ``box``; each weight is the cell volume.  Cube masses then
    equal Lebesgue volumes exactly for every dyadic cube at level <= ``level``
    that meets the box.
    """
    n = len(box)
    scale = 2.0 ** level
    axes = []
    for d, (lo, hi) in enumerate(box):
        a, b = lo * scale, hi * scale
        ka, kb = round(a), round(b)
        if abs(a - ka) > 1e-9 or abs(b - kb) > 1e-9 or kb <= ka:
            raise GridAlignmentError(
                f"box side {d} [{lo}, {hi}) is not a union of level-{level} cells"
            )
        axes.append((np.arange(ka, kb) + 0.5) * 2.0 ** (-level))
    mesh = np.meshgrid(*axes, indexing="ij")
    positions = np.stack([m.ravel() for m in mesh], axis=1)
    weights = np.full(positions.shape[0], 2.0 ** (-level * n))
    return AtomicMeasure(positions, weights)


def bernoulli_cascade(gamma: float, depth: int) -> AtomicMeasure:
    """Binary multiplicative cascade on [0, 1) with heavy-child ratio 2^-gamma.

    At every split the left child receives the fraction ``theta = 2^-gamma``
    of its parent's mass and the right child the rest, so along heavy chains
    ``sigma(2^j Q) = 2^{j gamma} sigma(Q)`` exactly: the measure is reverse
    doubling of order ``gamma`` with constant one.  Requires ``0 < gamma <= 1``
    so that the heavy fraction is at least one half.
    """
    if not (0.0 < gamma <= 1.0):
        raise WolffpotError(f"cascade exponent gamma must lie in (0, 1], got {gamma}")
    theta = 2.0 ** (-gamma)
    m = 1 << depth
    weights = np.empty(m)
    for j in range(m):
        ones = bin(j).count("1")  # 1-bits choose the light child
        weights[j] = theta ** (depth - ones) * (1.0 - theta) ** ones
    positions = ((np.arange(m) + 0.5) * 2.0 ** (-depth)).reshape(-1, 1)
    return AtomicMeasure(positions, weights)


def cube_mass_table(measure: AtomicMeasure, window: LatticeWindow) -> dict[Key, float]:
    """Sparse per-cube masses: every window cube containing an atom.

    Keys absent from the table have mass zero.  Atoms outside the window's
    root region do not belong to any window cube and are skipped.
    """
    if measure.dimension != window.dimension:
        raise DimensionMismatchError("measure and window dimensions differ")
    table: dict[Key, float] = {}
    fine = window.fine_level
    for pos, w in zip(measure.positions, measure.weights):
        if not window.contains_point(pos):
            continue
        leaf = window.level_index(pos, fine)
        for level in range(window.coarse_level, fine + 1):
            d = fine - level
            key = (level, tuple(k >> d for k in leaf))
            table[key] = table.get(key, 0.0) + float(w)
    return table


def reverse_doubling_check(
    measure: AtomicMeasure, window: LatticeWindow, gamma: float
):
    """Empirical dyadic reverse-doubling diagnostic of order ``gamma``.

    For every window cube ``Q`` with positive mass and every admissible
    dilation ``j >= 0`` the ratio ``sigma(2^j Q) / (2^{j gamma} sigma(Q))`` is
    computed; ``best_constant`` is the smallest such ratio, i.e. the largest
    ``C`` with ``sigma(2^j Q) >= C 2^{j gamma} sigma(Q)`` on the window.

    On a finite window the minimum is always positive, so ``holds`` reports
    whether the constant has stabilized rather than merely being nonzero: the
    check fails when the worst ratio is still strictly decaying at the deepest
    admissible dilation (a point mass decays like ``2^{-j gamma}`` all the way
    to the window boundary, while grids and cascades stabilize immediately).
    """
    if gamma <= 0:
        raise WolffpotError("gamma must be positive")
    table = cube_mass_table(measure, window)
    if not table:
        raise DegenerateInputError("no window cube has positive mass")
    worst: dict[int, float] = {}
    for (level, idx), mass in table.items():
        if mass <= 0:
            continue
        for j in range(0, level - window.coarse_level + 1):
            up = (level - j, tuple(k >> j for k in idx))
            ratio = table[up] / (2.0 ** (j * gamma) * mass)
            if j not in worst or ratio < worst[j]:
                worst[j] = ratio
    best_constant = min(worst.values())
    js = sorted(worst)
    if len(js) >= 2:
        last, prev = worst[js[-1]], worst[js[-2]]
        holds = best_constant > 0 and last >= prev * (1.0 - 1e-9)
    else:
        holds = best_constant > 0
    return holds, best_constant


def doubling_constant(measure: AtomicMeasure, sample_points, radii) -> float:
    """Empirical doubling constant ``max sigma(B(x,2r)) / sigma(B(x,r))``.

    Pairs with ``sigma(B(x,r)) = 0`` are skipped; this is a diagnostic over the
    given samples, not a certificate.
    """
    best = None
    for x in sample_points:
        for r in radii:
            m = measure.ball_mass(x, r)
            if m <= 0:
                continue
            ratio = measure.ball_mass(x, 2 * r) / m
            if best is None or ratio > best:
                best = ratio
    if best is None:
        raise DegenerateInputError("all sampled ball masses are zero")
    return best
