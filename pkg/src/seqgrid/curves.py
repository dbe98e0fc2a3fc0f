"""Space-filling curves over square grids, as explicit index/cell bijections.

Four traversals of the 2**n x 2**n grid are supported: the Hilbert curve,
plain row-major reshaping, the boustrophedon snake, and the anti-diagonal
zigzag ("diag-snake").  Every curve is materialized as a pair of lookup
tables so index -> cell and cell -> index are O(1) and all kinds get
uniform treatment.

Grid cells are (row, col) with row 0 at the top.  All four curves start at
(0, 0).  The Hilbert curve uses the orientation whose first half fills the
top half of the grid, i.e. order 1 visits (0,0), (0,1), (1,1), (1,0) and
every order ends at (2**n - 1, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "MAX_ORDER",
    "CurveKind",
    "CurveMapping",
    "GridPoint",
    "generate_curve",
    "index_to_point",
    "point_to_index",
]

# Tables are materialized in memory; 4**12 cells is the largest grid that
# stays cheap to build and hold, and it keeps indices within int32.
MAX_ORDER = 12

GridPoint = tuple[int, int]


class CurveKind(str, Enum):
    HILBERT = "hilbert"
    RESHAPE = "reshape"
    SNAKE = "snake"
    DIAGSNAKE = "diagsnake"


@dataclass(frozen=True, eq=False)
class CurveMapping:
    """Bijection between [0, 4**order) and the 2**order x 2**order grid.

    ``forward[i]`` is the (row, col) cell visited at sequence index ``i``;
    ``inverse[row, col]`` is the index visiting that cell.  Both tables are
    read-only, so a mapping can be shared freely between workers.
    """

    kind: CurveKind
    order: int
    forward: np.ndarray
    inverse: np.ndarray

    @property
    def side(self) -> int:
        return 1 << self.order

    @property
    def size(self) -> int:
        return 1 << (2 * self.order)

    def __len__(self) -> int:
        return self.size


def _hilbert_points(order: int) -> np.ndarray:
    # Quadrant order is top-left, top-right, bottom-right, bottom-left; the
    # first and last quadrants hold transposed / anti-transposed copies of
    # the previous order, which is what keeps the first half of the curve
    # in the top half of the grid.
    pts = np.zeros((1, 2), dtype=np.int32)
    for m in range(1, order + 1):
        s = 1 << (m - 1)
        r, c = pts[:, 0], pts[:, 1]
        pts = np.concatenate(
            (
                np.column_stack((c, r)),
                np.column_stack((r, c + s)),
                np.column_stack((r + s, c + s)),
                np.column_stack((2 * s - 1 - c, s - 1 - r)),
            )
        )
    return pts


def _reshape_points(order: int) -> np.ndarray:
    side = 1 << order
    idx = np.arange(side * side, dtype=np.int32)
    return np.column_stack((idx // side, idx % side))


def _snake_points(order: int) -> np.ndarray:
    side = 1 << order
    rows = np.repeat(np.arange(side, dtype=np.int32), side)
    cols = np.tile(np.arange(side, dtype=np.int32), side)
    odd = rows % 2 == 1
    cols[odd] = side - 1 - cols[odd]
    return np.column_stack((rows, cols))


def _diagsnake_points(order: int) -> np.ndarray:
    side = 1 << order
    rows = np.repeat(np.arange(side, dtype=np.int64), side)
    cols = np.tile(np.arange(side, dtype=np.int64), side)
    diag = rows + cols
    # Even anti-diagonals are walked upward (decreasing row), odd ones
    # downward, so each diagonal is entered next to where the previous one
    # ended.  Ends at (side-1, side-1).
    within = np.where(diag % 2 == 0, -rows, rows)
    ordering = np.lexsort((within, diag))
    return np.column_stack((rows[ordering], cols[ordering])).astype(np.int32)


_BUILDERS = {
    CurveKind.HILBERT: _hilbert_points,
    CurveKind.RESHAPE: _reshape_points,
    CurveKind.SNAKE: _snake_points,
    CurveKind.DIAGSNAKE: _diagsnake_points,
}


def generate_curve(kind: CurveKind | str, order: int) -> CurveMapping:
    """Materialize the curve of the given kind covering a 2**order grid.

    Deterministic for fixed (kind, order).  Raises ValueError for negative
    orders and for orders above MAX_ORDER.
    """
    kind = CurveKind(kind)
    if order < 0:
        raise ValueError(f"curve order must be >= 0, got {order}")
    if order > MAX_ORDER:
        raise ValueError(
            f"curve order {order} exceeds the supported maximum {MAX_ORDER} "
            f"(4**{MAX_ORDER} = {4**MAX_ORDER} cells)"
        )
    forward = _BUILDERS[kind](order)
    side = 1 << order
    inverse = np.empty((side, side), dtype=np.int32)
    inverse[forward[:, 0], forward[:, 1]] = np.arange(side * side, dtype=np.int32)
    forward.setflags(write=False)
    inverse.setflags(write=False)
    return CurveMapping(kind=kind, order=order, forward=forward, inverse=inverse)


def index_to_point(mapping: CurveMapping, index: int) -> GridPoint:
    """Cell visited at ``index``; raises IndexError outside [0, 4**order)."""
    if not 0 <= index < mapping.size:
        raise IndexError(f"sequence index {index} outside [0, {mapping.size})")
    row, col = mapping.forward[index]
    return int(row), int(col)


def point_to_index(mapping: CurveMapping, point: GridPoint) -> int:
    """Sequence index visiting ``point``; inverse of index_to_point."""
    row, col = point
    if not (0 <= row < mapping.side and 0 <= col < mapping.side):
        raise IndexError(f"grid point {point} outside the {mapping.side}x{mapping.side} grid")
    return int(mapping.inverse[row, col])
