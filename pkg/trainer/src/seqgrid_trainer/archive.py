"""Reader for seqgrid tensor archives and split manifests.

Parses the documented binary layout directly (magic "SQGA", 30-byte
little-endian header, u16 label + u16 code grid per record) so the trainer
depends only on the file format, not on the encoder package.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

__all__ = ["ArchiveData", "EncodedSet", "read_archive", "read_split", "expand_onehot"]

_MAGIC = b"SQGA"
_VERSION = 1
_HEADER = struct.Struct("<4sHIHHIHBBHHI")
_CURVE_NAMES = {0: "hilbert", 1: "reshape", 2: "snake", 3: "diagsnake", 4: "flat"}


class ArchiveError(ValueError):
    pass


@dataclass
class ArchiveData:
    grids: np.ndarray  # (records, height, width) uint16
    labels: np.ndarray  # (records,) int64
    k: int
    curve: str
    order: int
    crop: tuple[int, int]
    seq_len: int
    class_names: tuple[str, ...] = ()
    ids: tuple[str, ...] = ()
    source: str = ""
    split_manifest: str = ""

    @property
    def records(self) -> int:
        return self.grids.shape[0]

    @property
    def height(self) -> int:
        return self.grids.shape[1]

    @property
    def width(self) -> int:
        return self.grids.shape[2]

    @property
    def channels(self) -> int:
        return 4**self.k

    @property
    def num_classes(self) -> int:
        if self.class_names:
            return len(self.class_names)
        return int(self.labels.max()) + 1


def read_archive(path: str | Path) -> ArchiveData:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _HEADER.size:
        raise ArchiveError(f"{path}: too short for an archive header")
    (magic, version, records, height, width, channels, k, curve_code, order,
     crop_start, crop_stop, seq_len) = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ArchiveError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise ArchiveError(f"{path}: unsupported version {version}")
    if channels != 4**k:
        raise ArchiveError(f"{path}: channels {channels} != 4**{k}")
    expected = _HEADER.size + records * (1 + height * width) * 2
    if len(blob) != expected:
        raise ArchiveError(f"{path}: {len(blob)} bytes, header implies {expected}")
    payload = np.frombuffer(blob, dtype="<u2", offset=_HEADER.size)
    payload = payload.reshape(records, 1 + height * width)

    data = ArchiveData(
        grids=payload[:, 1:].reshape(records, height, width),
        labels=payload[:, 0].astype(np.int64),
        k=k,
        curve=_CURVE_NAMES.get(curve_code, str(curve_code)),
        order=order,
        crop=(crop_start, crop_stop),
        seq_len=seq_len,
    )
    sidecar = path.with_name(path.name + ".json")
    if sidecar.exists():
        manifest = json.loads(sidecar.read_text())
        data.class_names = tuple(manifest.get("class_names", ()))
        data.ids = tuple(manifest.get("ids", ()))
        data.source = manifest.get("source", "")
        data.split_manifest = manifest.get("split_manifest", "")
    return data


def read_split(path: str | Path) -> dict[str, list[int]]:
    manifest = json.loads(Path(path).read_text())
    return {part: list(manifest[part]) for part in ("train", "validation", "test")}


def expand_onehot(grids: np.ndarray, channels: int) -> np.ndarray:
    """Code grids -> (N, C, H, W) float32 one-hot; sentinel pixels all-zero."""
    n, height, width = grids.shape
    out = np.zeros((n, channels, height, width), dtype=np.float32)
    ni, ri, ci = np.nonzero(grids < channels)
    out[ni, grids[ni, ri, ci].astype(np.int64), ri, ci] = 1.0
    return out


@dataclass
class EncodedSet:
    """One split's worth of records, expanded lazily per batch."""

    grids: np.ndarray
    labels: np.ndarray
    channels: int
    class_names: tuple[str, ...] = ()

    @classmethod
    def from_archive(cls, archive: ArchiveData, indices=None) -> "EncodedSet":
        if indices is None:
            grids, labels = archive.grids, archive.labels
        else:
            indices = np.asarray(indices, dtype=np.int64)
            grids, labels = archive.grids[indices], archive.labels[indices]
        return cls(
            grids=grids,
            labels=labels,
            channels=archive.channels,
            class_names=archive.class_names,
        )

    def __len__(self) -> int:
        return self.grids.shape[0]

    @property
    def input_hwc(self) -> tuple[int, int, int]:
        return self.grids.shape[1], self.grids.shape[2], self.channels

    def batch(self, indices: np.ndarray) -> tuple[torch.Tensor, torch.Tensor]:
        x = torch.from_numpy(expand_onehot(self.grids[indices], self.channels))
        y = torch.from_numpy(self.labels[indices])
        return x, y
