"""Lay k-mer codes onto a curve, pick the grid order, crop to content rows.

Images store one integer code per pixel; the reserved value 4**k (one past
the last valid code) marks an empty pixel.  Expansion to 4**k one-hot
channels happens only at export/load via ``to_onehot``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curves import CurveKind, generate_curve

__all__ = [
    "MAX_K",
    "SequenceImage",
    "required_order",
    "layout",
    "crop",
    "flatten_1d",
    "image_to_kmers",
    "to_onehot",
]

# Codes plus the sentinel must fit the uint16 pixel payload.
MAX_K = 7


@dataclass(frozen=True)
class SequenceImage:
    """Grid of k-mer codes; cells equal to ``sentinel`` are empty.

    ``crop_start``/``crop_stop`` record which rows of the full 2**order
    grid this image retains; an uncropped image spans all of them.  A flat
    single-row layout has ``curve`` None.
    """

    grid: np.ndarray
    k: int
    seq_len: int
    curve: CurveKind | None
    order: int
    crop_start: int
    crop_stop: int

    @property
    def height(self) -> int:
        return self.grid.shape[0]

    @property
    def width(self) -> int:
        return self.grid.shape[1]

    @property
    def channels(self) -> int:
        return 4**self.k

    @property
    def sentinel(self) -> int:
        return 4**self.k

    @property
    def num_codes(self) -> int:
        return self.seq_len - self.k + 1

    @property
    def fill_ratio(self) -> float:
        return self.num_codes / (self.height * self.width)


def _checked_codes(codes: np.ndarray, k: int) -> np.ndarray:
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}], got {k}")
    codes = np.asarray(codes)
    if codes.ndim != 1 or codes.size == 0:
        raise ValueError("codes must be a non-empty 1-D array")
    if codes.min() < 0 or codes.max() >= 4**k:
        raise ValueError(f"codes must lie in [0, 4**{k})")
    return codes.astype(np.uint16)


def required_order(num_kmers: int) -> int:
    """Smallest curve order n with 4**n >= num_kmers."""
    if num_kmers < 1:
        raise ValueError(f"need at least one k-mer, got {num_kmers}")
    order = 0
    while (1 << (2 * order)) < num_kmers:
        order += 1
    return order


def layout(codes: np.ndarray, k: int, kind: CurveKind | str) -> SequenceImage:
    """Place codes along the curve of the smallest order that fits them.

    Pixel ``forward[i]`` holds ``codes[i]``; the remaining pixels hold the
    sentinel.  The result is uncropped (full square grid).
    """
    codes = _checked_codes(codes, k)
    order = required_order(codes.size)
    mapping = generate_curve(kind, order)
    grid = np.full((mapping.side, mapping.side), 4**k, dtype=np.uint16)
    cells = mapping.forward[: codes.size]
    grid[cells[:, 0], cells[:, 1]] = codes
    grid.setflags(write=False)
    return SequenceImage(
        grid=grid,
        k=k,
        seq_len=codes.size + k - 1,
        curve=mapping.kind,
        order=order,
        crop_start=0,
        crop_stop=mapping.side,
    )


def crop(image: SequenceImage) -> SequenceImage:
    """Retain the minimal contiguous row range holding every occupied pixel.

    Width is never touched.  Raises ValueError on a fully empty image.
    """
    occupied = (image.grid != image.sentinel).any(axis=1)
    if not occupied.any():
        raise ValueError("cannot crop an image with no occupied pixels")
    rows = np.flatnonzero(occupied)
    lo, hi = int(rows[0]), int(rows[-1]) + 1
    if lo == 0 and hi == image.height:
        return image
    return replace(
        image,
        grid=image.grid[lo:hi],
        crop_start=image.crop_start + lo,
        crop_stop=image.crop_start + hi,
    )


def flatten_1d(codes: np.ndarray, k: int) -> SequenceImage:
    """1 x (L - k + 1) layout that skips the 2D mapping entirely."""
    codes = _checked_codes(codes, k)
    grid = codes.reshape(1, -1).copy()
    grid.setflags(write=False)
    return SequenceImage(
        grid=grid,
        k=k,
        seq_len=codes.size + k - 1,
        curve=None,
        order=0,
        crop_start=0,
        crop_stop=1,
    )


def image_to_kmers(image: SequenceImage) -> np.ndarray:
    """Recover the k-mer codes in sequence order (inverse of layout)."""
    n = image.num_codes
    if image.curve is None:
        codes = image.grid[0, :n].astype(np.int64)
    else:
        mapping = generate_curve(image.curve, image.order)
        cells = mapping.forward[:n]
        rows = cells[:, 0] - image.crop_start
        if rows.min() < 0 or rows.max() >= image.height:
            raise ValueError("crop range does not cover the occupied pixels")
        codes = image.grid[rows, cells[:, 1]].astype(np.int64)
    if (codes >= image.channels).any():
        raise ValueError("image contains sentinel pixels where codes were expected")
    return codes


def to_onehot(image: SequenceImage, dtype=np.float32) -> np.ndarray:
    """Expand to the (H, W, 4**k) one-hot view; empty pixels are all-zero."""
    channels = np.arange(image.channels, dtype=image.grid.dtype)
    return (image.grid[..., None] == channels).astype(dtype)
