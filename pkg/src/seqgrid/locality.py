"""Locality statistics for curves: weighted pair distances and their spread.

For every unordered pair of sequence positions, the pair's separation in
the sequence is multiplied by its Euclidean separation in the image.  The
ratio mean/max of that weighted-distance set (``gamma``) measures how well
a curve keeps long-range pairs relatively close: higher is better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .curves import CurveKind, CurveMapping, generate_curve, index_to_point

__all__ = [
    "SEQUENCE_KIND",
    "DEFAULT_LENGTHS",
    "GammaReport",
    "seq_distance",
    "curve_distance",
    "gamma",
    "gamma_table",
    "gamma_from_points",
    "format_gamma_table",
    "gamma_csv",
]

# Pseudo-kind for the unmapped 1-D baseline, where the image distance of a
# pair equals its sequence distance.
SEQUENCE_KIND = "sequence"

DEFAULT_LENGTHS = (16, 64, 256, 1024, 4096)

_CSV_HEADER = "kind,length,gamma,mean_delta,max_delta"


@dataclass(frozen=True)
class GammaReport:
    kind: str
    length: int
    gamma: float
    mean_delta: float
    max_delta: float
    pair_count: int


def seq_distance(x: int, y: int) -> int:
    """Separation of two positions within the sequence."""
    if x == y:
        raise ValueError(f"positions must differ, got {x} twice")
    if x < 0 or y < 0:
        raise ValueError(f"positions must be non-negative, got ({x}, {y})")
    return abs(x - y)


def curve_distance(mapping: CurveMapping, x: int, y: int) -> float:
    """Euclidean distance between the cells visited at indices x and y."""
    if x == y:
        raise ValueError(f"positions must differ, got {x} twice")
    rx, cx = index_to_point(mapping, x)
    ry, cy = index_to_point(mapping, y)
    return math.hypot(rx - ry, cx - cy)


def _points_for(kind: CurveKind | str, length: int) -> np.ndarray:
    if kind == SEQUENCE_KIND:
        if length < 2:
            raise ValueError(f"sequence length must be >= 2, got {length}")
        return np.arange(length, dtype=np.float64).reshape(-1, 1)
    kind = CurveKind(kind)
    order = (length.bit_length() - 1) // 2 if length > 0 else 0
    if length < 1 or 4**order != length:
        raise ValueError(f"2-D curves need a power-of-4 length, got {length}")
    return generate_curve(kind, order).forward.astype(np.float64)


def gamma_from_points(points: np.ndarray, block: int = 512) -> tuple[float, float, int]:
    """Streaming (mean, max, pair count) of the weighted distances.

    Works on any (L, d) coordinate array, visiting each unordered pair once
    in O(block * L) memory.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 2:
        raise ValueError("need at least two points")
    pos = np.arange(n, dtype=np.float64)
    total = 0.0
    largest = 0.0
    pairs = 0
    for start in range(0, n, block):
        stop = min(start + block, n)
        diff = points[start:stop, None, :] - points[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        weighted = dist * np.abs(pos[start:stop, None] - pos[None, :])
        upper = pos[None, :] > pos[start:stop, None]
        chunk = weighted[upper]
        if chunk.size == 0:  # block holding only the final position
            continue
        total += float(chunk.sum())
        largest = max(largest, float(chunk.max()))
        pairs += chunk.size
    return total / pairs, largest, pairs


def gamma(kind: CurveKind | str, length: int) -> GammaReport:
    """Mean/max ratio of the weighted pair distances for one curve/length.

    2-D kinds require full-square occupancy (length a power of 4); the
    1-D baseline SEQUENCE_KIND accepts any length >= 2.
    """
    points = _points_for(kind, length)
    mean, largest, pairs = gamma_from_points(points)
    name = kind if kind == SEQUENCE_KIND else CurveKind(kind).value
    return GammaReport(
        kind=name,
        length=length,
        gamma=mean / largest,
        mean_delta=mean,
        max_delta=largest,
        pair_count=pairs,
    )


def gamma_table(
    lengths: Sequence[int] = DEFAULT_LENGTHS,
    kinds: Sequence[CurveKind | str] = (
        CurveKind.RESHAPE,
        CurveKind.SNAKE,
        CurveKind.DIAGSNAKE,
        CurveKind.HILBERT,
    ),
) -> list[GammaReport]:
    """Full cross of kinds x lengths, row-major by kind."""
    return [gamma(kind, length) for kind in kinds for length in lengths]


def format_gamma_table(reports: Iterable[GammaReport]) -> str:
    """Aligned text table, one row per kind, one column per length."""
    reports = list(reports)
    lengths = sorted({r.length for r in reports})
    kinds = list(dict.fromkeys(r.kind for r in reports))
    cells = {(r.kind, r.length): r.gamma for r in reports}
    name_width = max(len("curve"), *(len(k) for k in kinds))
    header = "curve".ljust(name_width) + "".join(f"{n:>8}" for n in lengths)
    lines = [header]
    for kind in kinds:
        row = kind.ljust(name_width)
        for length in lengths:
            value = cells.get((kind, length))
            row += f"{value:8.2f}" if value is not None else f"{'-':>8}"
        lines.append(row)
    return "\n".join(lines)


def gamma_csv(reports: Iterable[GammaReport]) -> str:
    lines = [_CSV_HEADER]
    for r in reports:
        lines.append(f"{r.kind},{r.length},{r.gamma:.6f},{r.mean_delta:.6f},{r.max_delta:.6f}")
    return "\n".join(lines) + "\n"
