"""Dyadic cube lattices restricted to finite level windows.

A dyadic cube at level ``l`` with integer index ``k`` in the lattice shifted
by ``z`` is the half-open box ``z + prod_i [k_i 2^-l, (k_i+1) 2^-l)``.  Levels
are arbitrary integers, so negative levels give cubes of side larger than one.
Cube coordinates are stored as integers; the shift enters only when a point is
tested for membership, which keeps containment and ancestry exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .errors import (
    DimensionMismatchError,
    LevelRangeError,
    OutOfWindowError,
    GridAlignmentError,
)

Key = tuple[int, tuple[int, ...]]  # (level, index), shift implied by the window


@dataclass(frozen=True)
class DyadicCube:
    """Half-open dyadic cube ``z + prod_i [k_i 2^-level, (k_i+1) 2^-level)``."""

    level: int
    index: tuple[int, ...]
    shift: tuple[float, ...]

    def __post_init__(self):
        if len(self.index) != len(self.shift):
            raise DimensionMismatchError(
                f"index has dimension {len(self.index)}, shift {len(self.shift)}"
            )

    @property
    def dimension(self) -> int:
        return len(self.index)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def key(self) -> Key:
        return (self.level, self.index)

    def lower(self) -> tuple[float, ...]:
        s = self.side
        return tuple(z + k * s for z, k in zip(self.shift, self.index))

    def upper(self) -> tuple[float, ...]:
        s = self.side
        return tuple(z + (k + 1) * s for z, k in zip(self.shift, self.index))

    def center(self) -> tuple[float, ...]:
        s = self.side
        return tuple(z + (k + 0.5) * s for z, k in zip(self.shift, self.index))

    def contains(self, point) -> bool:
        # Same floor arithmetic as cube_at, so membership and lookup agree
        # bit for bit on the half-open boundaries.
        scale = 2.0 ** self.level
        return all(
            math.floor((x - z) * scale) == k
            for x, z, k in zip(point, self.shift, self.index)
        )

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1, tuple(k >> 1 for k in self.index), self.shift)

    def children(self) -> list["DyadicCube"]:
        base = tuple(2 * k for k in self.index)
        return [
            DyadicCube(self.level + 1, tuple(b + o for b, o in zip(base, off)), self.shift)
            for off in product((0, 1), repeat=self.dimension)
        ]


@dataclass(frozen=True)
class LatticeWindow:
    """Finite slab of a (possibly shifted) dyadic lattice.

    The window holds every descendant, down to ``fine_level``, of a fixed set
    of root cubes at ``coarse_level``.  It is the index set of all dyadic sums
    in this package.
    """

    dimension: int
    coarse_level: int
    fine_level: int
    root_indices: tuple[tuple[int, ...], ...]
    shift: tuple[float, ...]

    def __post_init__(self):
        if self.coarse_level > self.fine_level:
            raise LevelRangeError(
                f"coarse_level {self.coarse_level} > fine_level {self.fine_level}"
            )
        if len(self.shift) != self.dimension:
            raise DimensionMismatchError("shift dimension does not match window")
        for idx in self.root_indices:
            if len(idx) != self.dimension:
                raise DimensionMismatchError("root index dimension mismatch")
        if len(set(self.root_indices)) != len(self.root_indices):
            raise GridAlignmentError("duplicate root cubes")
        object.__setattr__(self, "_root_set", frozenset(self.root_indices))

    @classmethod
    def from_box(
        cls,
        box,
        coarse_level: int,
        fine_level: int,
        shift=None,
    ) -> "LatticeWindow":
        """Window whose root region is an axis-aligned box.

        The box must be a union of coarse-level cells of the (shifted)
        lattice; each side is a pair ``(lo, hi)``.
        """
        n = len(box)
        shift = tuple(shift) if shift is not None else (0.0,) * n
        scale = 2.0 ** coarse_level
        ranges = []
        for d, (lo, hi) in enumerate(box):
            a = (lo - shift[d]) * scale
            b = (hi - shift[d]) * scale
            ka, kb = round(a), round(b)
            if abs(a - ka) > 1e-9 or abs(b - kb) > 1e-9 or kb <= ka:
                raise GridAlignmentError(
                    f"box side {d} [{lo}, {hi}) is not a union of level-{coarse_level} cells"
                )
            ranges.append(range(ka, kb))
        roots = tuple(sorted(product(*ranges)))
        return cls(n, coarse_level, fine_level, roots, shift)

    # -- basic geometry -----------------------------------------------------

    @property
    def depth(self) -> int:
        return self.fine_level - self.coarse_level

    @property
    def n_cubes(self) -> int:
        per_root = sum(2 ** (self.dimension * d) for d in range(self.depth + 1))
        return len(self.root_indices) * per_root

    def cube(self, level: int, index: tuple[int, ...]) -> DyadicCube:
        return DyadicCube(level, tuple(index), self.shift)

    def level_index(self, point, level: int) -> tuple[int, ...]:
        scale = 2.0 ** level
        return tuple(math.floor((x - z) * scale) for x, z in zip(point, self.shift))

    def contains_point(self, point) -> bool:
        if len(point) != self.dimension:
            raise DimensionMismatchError("point dimension does not match window")
        return self.level_index(point, self.coarse_level) in self._root_set

    def cube_at(self, point, level: int) -> DyadicCube:
        """Unique cube of the given level containing the point."""
        if not (self.coarse_level <= level <= self.fine_level):
            raise LevelRangeError(
                f"level {level} outside [{self.coarse_level}, {self.fine_level}]"
            )
        if not self.contains_point(point):
            raise OutOfWindowError(f"point {tuple(point)} outside root region")
        return self.cube(level, self.level_index(point, level))

    def leaf_at(self, point) -> DyadicCube:
        return self.cube_at(point, self.fine_level)

    def leaf_key(self, point) -> Key:
        if not self.contains_point(point):
            raise OutOfWindowError(f"point {tuple(point)} outside root region")
        return (self.fine_level, self.level_index(point, self.fine_level))

    def chain_keys(self, point) -> list[Key]:
        """Keys of the ancestor chain of ``point``, coarse to fine."""
        fine = self.leaf_key(point)[1]
        out = []
        for level in range(self.coarse_level, self.fine_level + 1):
            d = self.fine_level - level
            out.append((level, tuple(k >> d for k in fine)))
        return out

    def chain(self, point) -> list[DyadicCube]:
        return [self.cube(lvl, idx) for lvl, idx in self.chain_keys(point)]

    def in_window(self, cube: DyadicCube) -> bool:
        if not (self.coarse_level <= cube.level <= self.fine_level):
            return False
        d = cube.level - self.coarse_level
        root = tuple(k >> d for k in cube.index)
        return root in self._root_set

    # -- navigation ----------------------------------------------------------

    def parent_key(self, key: Key) -> Key | None:
        level, idx = key
        if level <= self.coarse_level:
            return None
        return (level - 1, tuple(k >> 1 for k in idx))

    def child_keys(self, key: Key) -> list[Key]:
        level, idx = key
        if level >= self.fine_level:
            return []
        base = tuple(2 * k for k in idx)
        return [
            (level + 1, tuple(b + o for b, o in zip(base, off)))
            for off in product((0, 1), repeat=self.dimension)
        ]

    def ancestor(self, cube: DyadicCube, j: int) -> DyadicCube:
        """The cube ``2^j Q``: the ancestor of side ``2^j r_Q`` containing ``Q``."""
        if j < 0:
            raise LevelRangeError("dilation exponent j must be >= 0")
        level = cube.level - j
        if level < self.coarse_level:
            raise LevelRangeError(
                f"2^{j} Q has level {level}, below coarse level {self.coarse_level}"
            )
        return self.cube(level, tuple(k >> j for k in cube.index))

    # -- enumeration ----------------------------------------------------------

    def level_keys(self, level: int) -> list[Key]:
        if not (self.coarse_level <= level <= self.fine_level):
            raise LevelRangeError(f"level {level} outside window")
        d = level - self.coarse_level
        offsets = list(product(range(2 ** d), repeat=self.dimension))
        keys = []
        for root in self.root_indices:
            base = tuple(k << d for k in root)
            for off in offsets:
                keys.append((level, tuple(b + o for b, o in zip(base, off))))
        keys.sort(key=lambda k: k[1])
        return keys

    def keys(self):
        for level in range(self.coarse_level, self.fine_level + 1):
            yield from self.level_keys(level)

    def cubes(self):
        for level, idx in self.keys():
            yield self.cube(level, idx)

    def descendant_keys(self, key: Key):
        """All window keys of cubes contained in ``key`` (including itself)."""
        level, idx = key
        for lvl in range(level, self.fine_level + 1):
            d = lvl - level
            base = tuple(k << d for k in idx)
            for off in product(range(2 ** d), repeat=self.dimension):
                yield (lvl, tuple(b + o for b, o in zip(base, off)))


def cube_at(point, level: int, window: LatticeWindow) -> DyadicCube:
    """Unique cube of ``window``'s lattice at ``level`` containing ``point``."""
    return window.cube_at(point, level)


def ancestor_pow2(cube: DyadicCube, j: int, window: LatticeWindow) -> DyadicCube:
    """The dilated cube ``2^j Q`` within the window."""
    return window.ancestor(cube, j)


def cubes_of_window(window: LatticeWindow) -> list[DyadicCube]:
    """Deterministic enumeration, coarse to fine and lexicographic per level."""
    return list(window.cubes())
