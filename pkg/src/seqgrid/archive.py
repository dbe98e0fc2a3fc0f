"""Binary tensor archives: per-record code grids plus a JSON manifest.

Layout (all integers little-endian)::

    header : magic "SQGA" | u16 version | u32 records | u16 height
             | u16 width | u32 channels | u16 k | u8 curve | u8 order
             | u16 crop_start | u16 crop_stop | u32 sequence_length
    record : u16 label | height*width u16 codes, repeated `records` times

A pixel equal to 4**k (one past the last code) is empty.  Grids are stored
as codes, never expanded one-hot channels; consumers expand at load.  The
sidecar ``<path>.json`` mirrors the header and carries provenance, so the
file can be consumed from any language without this package.
"""

from __future__ import annotations

import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curves import CurveKind
from .datasets import Dataset
from .errors import ArchiveFormatError, DataFormatError
from .imaging import SequenceImage, crop, flatten_1d, image_to_kmers, layout
from .kmer import kmers_to_sequence, sequence_to_kmers

__all__ = [
    "MAGIC",
    "VERSION",
    "FLAT_LAYOUT",
    "TensorArchive",
    "encode_dataset",
    "load_archive",
    "record_image",
    "decode_record",
]

MAGIC = b"SQGA"
VERSION = 1
FLAT_LAYOUT = "flat"

_HEADER = struct.Struct("<4sHIHHIHBBHHI")
_CURVE_CODES = {
    CurveKind.HILBERT.value: 0,
    CurveKind.RESHAPE.value: 1,
    CurveKind.SNAKE.value: 2,
    CurveKind.DIAGSNAKE.value: 3,
    FLAT_LAYOUT: 4,
}
_CURVE_NAMES = {v: k for k, v in _CURVE_CODES.items()}


@dataclass
class TensorArchive:
    """All encoded records of one dataset, sharing a single geometry."""

    grids: np.ndarray  # (records, height, width) uint16
    labels: np.ndarray  # (records,) uint16
    k: int
    curve: str  # CurveKind value, or "flat"
    order: int
    crop_start: int
    crop_stop: int
    seq_len: int
    class_names: tuple[str, ...] = ()
    ids: tuple[str, ...] = ()
    source: str = ""
    split_manifest: str = ""

    @property
    def record_count(self) -> int:
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
    def sentinel(self) -> int:
        return 4**self.k

    def manifest(self) -> dict:
        return {
            "magic": MAGIC.decode("ascii"),
            "version": VERSION,
            "records": self.record_count,
            "height": self.height,
            "width": self.width,
            "channels": self.channels,
            "k": self.k,
            "curve": self.curve,
            "order": self.order,
            "crop": [self.crop_start, self.crop_stop],
            "sequence_length": self.seq_len,
            "sentinel": self.sentinel,
            "class_names": list(self.class_names),
            "ids": list(self.ids),
            "source": self.source,
            "split_manifest": self.split_manifest,
        }

    def save(self, path: str | Path) -> Path:
        """Write the binary archive and its JSON sidecar; returns the path.

        Output is byte-identical for identical inputs: no timestamps, fixed
        key order, fixed little-endian layout.
        """
        path = Path(path)
        header = _HEADER.pack(
            MAGIC,
            VERSION,
            self.record_count,
            self.height,
            self.width,
            self.channels,
            self.k,
            _CURVE_CODES[self.curve],
            self.order,
            self.crop_start,
            self.crop_stop,
            self.seq_len,
        )
        payload = np.empty((self.record_count, 1 + self.height * self.width), dtype="<u2")
        payload[:, 0] = self.labels
        payload[:, 1:] = self.grids.reshape(self.record_count, -1)
        with path.open("wb") as handle:
            handle.write(header)
            handle.write(payload.tobytes())
        sidecar = path.with_name(path.name + ".json")
        sidecar.write_text(json.dumps(self.manifest(), sort_keys=True, indent=2) + "\n")
        return path


def _encode_one(record, k: int, kind: CurveKind | None) -> np.ndarray:
    codes = sequence_to_kmers(record.sequence, k)
    if kind is None:
        image = flatten_1d(codes, k)
    else:
        image = crop(layout(codes, k, kind))
    return image.grid


def encode_dataset(
    dataset: Dataset,
    kind: CurveKind | str | None,
    k: int,
    jobs: int = 1,
    split_manifest: str = "",
) -> TensorArchive:
    """Encode every record of a dataset into one archive.

    ``kind`` None selects the flat 1 x (L-k+1) layout.  All sequences must
    share one length, since every grid in an archive has the same shape;
    offenders are listed in the error.  Workers run per record and write
    back in input order, so the result is independent of ``jobs``.
    """
    if not dataset.records:
        raise DataFormatError("nothing to encode: dataset has no records", dataset.source)
    lengths = dataset.sequence_lengths()
    if len(lengths) > 1:
        expected = max(lengths, key=lambda n: sum(len(r.sequence) == n for r in dataset.records))
        offenders = [
            f"{r.id} (length {len(r.sequence)})"
            for r in dataset.records
            if len(r.sequence) != expected
        ]
        shown = ", ".join(offenders[:10])
        more = f" and {len(offenders) - 10} more" if len(offenders) > 10 else ""
        raise DataFormatError(
            f"sequences must share one length (majority is {expected}); offenders: {shown}{more}",
            dataset.source,
        )

    kind = None if kind in (None, FLAT_LAYOUT) else CurveKind(kind)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            grids = list(pool.map(lambda r: _encode_one(r, k, kind), dataset.records))
    else:
        grids = [_encode_one(r, k, kind) for r in dataset.records]

    first_codes = sequence_to_kmers(dataset.records[0].sequence, k)
    reference = (
        crop(layout(first_codes, k, kind)) if kind is not None else flatten_1d(first_codes, k)
    )
    return TensorArchive(
        grids=np.stack(grids),
        labels=np.asarray([r.label for r in dataset.records], dtype=np.uint16),
        k=k,
        curve=reference.curve.value if reference.curve is not None else FLAT_LAYOUT,
        order=reference.order,
        crop_start=reference.crop_start,
        crop_stop=reference.crop_stop,
        seq_len=reference.seq_len,
        class_names=dataset.class_names,
        ids=tuple(r.id for r in dataset.records),
        source=dataset.source,
        split_manifest=split_manifest,
    )


def load_archive(path: str | Path) -> TensorArchive:
    """Read an archive and, when present, its JSON sidecar."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _HEADER.size:
        raise ArchiveFormatError(f"{path}: too short for an archive header")
    (
        magic,
        version,
        records,
        height,
        width,
        channels,
        k,
        curve_code,
        order,
        crop_start,
        crop_stop,
        seq_len,
    ) = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ArchiveFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise ArchiveFormatError(f"{path}: unsupported version {version}, expected {VERSION}")
    if curve_code not in _CURVE_NAMES:
        raise ArchiveFormatError(f"{path}: unknown curve code {curve_code}")
    if channels != 4**k:
        raise ArchiveFormatError(f"{path}: channels {channels} != 4**{k}")
    expected_bytes = _HEADER.size + records * (1 + height * width) * 2
    if len(blob) != expected_bytes:
        raise ArchiveFormatError(
            f"{path}: payload is {len(blob)} bytes, header implies {expected_bytes}"
        )
    payload = np.frombuffer(blob, dtype="<u2", offset=_HEADER.size)
    payload = payload.reshape(records, 1 + height * width)
    grids = payload[:, 1:].reshape(records, height, width)

    archive = TensorArchive(
        grids=grids,
        labels=payload[:, 0].copy(),
        k=k,
        curve=_CURVE_NAMES[curve_code],
        order=order,
        crop_start=crop_start,
        crop_stop=crop_stop,
        seq_len=seq_len,
    )
    sidecar = path.with_name(path.name + ".json")
    if sidecar.exists():
        manifest = json.loads(sidecar.read_text())
        for key, value in (
            ("records", records),
            ("height", height),
            ("width", width),
            ("channels", channels),
            ("k", k),
            ("curve", archive.curve),
            ("order", order),
            ("crop", [crop_start, crop_stop]),
            ("sequence_length", seq_len),
        ):
            if manifest.get(key) != value:
                raise ArchiveFormatError(
                    f"{sidecar}: manifest {key}={manifest.get(key)!r} disagrees with header {value!r}"
                )
        archive.class_names = tuple(manifest.get("class_names", ()))
        archive.ids = tuple(manifest.get("ids", ()))
        archive.source = manifest.get("source", "")
        archive.split_manifest = manifest.get("split_manifest", "")
    return archive


def record_image(archive: TensorArchive, index: int) -> SequenceImage:
    if not 0 <= index < archive.record_count:
        raise IndexError(f"record {index} outside [0, {archive.record_count})")
    curve = None if archive.curve == FLAT_LAYOUT else CurveKind(archive.curve)
    return SequenceImage(
        grid=archive.grids[index],
        k=archive.k,
        seq_len=archive.seq_len,
        curve=curve,
        order=archive.order,
        crop_start=archive.crop_start,
        crop_stop=archive.crop_stop,
    )


def decode_record(archive: TensorArchive, index: int) -> str:
    """Rebuild the sanitized input sequence of one record."""
    image = record_image(archive, index)
    return kmers_to_sequence(image_to_kmers(image), archive.k)
