"""Loaders for labeled DNA records and reproducible train/val/test splits.

The canonical on-disk form is a tab-separated file, one record per line::

    id<TAB>label<TAB>sequence

with ``#`` comment lines and blank lines ignored.  ``convert`` in the CLI
turns raw public formats into this shape so every other command parses a
single format.

Splits shuffle with SplitMix64 driving a Fisher-Yates pass (constants in
``SplitMix64``), never the platform RNG, so the same seed produces the
same split in any implementation.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DataFormatError, InvalidBaseError
from .kmer import sanitize

__all__ = [
    "CHROMATIN_CLASSES",
    "SPLICE_CLASSES",
    "SPLIT_FRACTIONS",
    "MIN_SPLIT_RECORDS",
    "LabeledRecord",
    "Dataset",
    "DatasetSplit",
    "SplitMix64",
    "load_tsv",
    "load_chromatin",
    "load_splice",
    "write_tsv",
    "split",
]

log = logging.getLogger(__name__)

CHROMATIN_CLASSES = ("negative", "positive")
SPLICE_CLASSES = ("EI", "IE", "N")
CHROMATIN_SEQUENCE_LENGTH = 500
SPLICE_SEQUENCE_LENGTH = 61

SPLIT_FRACTIONS = (0.90, 0.05, 0.05)
MIN_SPLIT_RECORDS = 20


@dataclass(frozen=True)
class LabeledRecord:
    id: str
    sequence: str
    label: int


@dataclass
class Dataset:
    records: list[LabeledRecord]
    class_names: tuple[str, ...]
    replaced_bases: int = 0
    skipped: int = 0
    source: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def sequence_lengths(self) -> set[int]:
        return {len(r.sequence) for r in self.records}


def _label_index(token: str, class_names: tuple[str, ...], path: str, line: int) -> int:
    if token in class_names:
        return class_names.index(token)
    if token.isdigit() and int(token) < len(class_names):
        return int(token)
    raise DataFormatError(
        f"unknown label {token!r} (expected one of {list(class_names)})", path, line
    )


def load_tsv(
    path: str | Path,
    class_names: Sequence[str] | None = None,
    expected_length: int | None = None,
) -> Dataset:
    """Read the canonical TSV format.

    When ``class_names`` is omitted the vocabulary is the sorted set of
    distinct label tokens.  Records whose sanitized sequence does not match
    ``expected_length`` are skipped with a warning; malformed lines raise
    DataFormatError naming the line.
    """
    path = Path(path)
    rows: list[tuple[int, str, str, str]] = []
    with path.open("r", encoding="ascii") as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            fields = text.split("\t")
            if len(fields) != 3 or not all(fields):
                raise DataFormatError(
                    f"expected 3 tab-separated fields, got {len(fields)}", str(path), lineno
                )
            rows.append((lineno, *fields))

    if class_names is None:
        vocabulary = tuple(sorted({token for _, _, token, _ in rows}))
    else:
        vocabulary = tuple(class_names)

    records: list[LabeledRecord] = []
    replaced = 0
    skipped = 0
    for lineno, rec_id, token, seq in rows:
        label = _label_index(token, vocabulary, str(path), lineno)
        try:
            cleaned, n_replaced = sanitize(seq)
        except InvalidBaseError as exc:
            raise DataFormatError(str(exc), str(path), lineno) from exc
        if expected_length is not None and len(cleaned) != expected_length:
            log.warning(
                "%s:%d: skipping %r, sequence length %d != %d",
                path, lineno, rec_id, len(cleaned), expected_length,
            )
            skipped += 1
            continue
        replaced += n_replaced
        records.append(LabeledRecord(id=rec_id, sequence=cleaned, label=label))

    if not records:
        log.warning("%s: no records loaded", path)
    return Dataset(
        records=records,
        class_names=vocabulary,
        replaced_bases=replaced,
        skipped=skipped,
        source=str(path),
    )


def load_chromatin(path: str | Path) -> Dataset:
    """Chromatin-occupancy records: binary labels, 500-base sequences."""
    dataset = load_tsv(
        path,
        class_names=CHROMATIN_CLASSES,
        expected_length=CHROMATIN_SEQUENCE_LENGTH,
    )
    log.info("%s: %d chromatin records (%d skipped)", path, len(dataset), dataset.skipped)
    return dataset


def load_splice(path: str | Path) -> Dataset:
    """Splice-junction records in the raw UCI format.

    Each line is ``LABEL,IDENTIFIER,SEQUENCE`` with optional padding
    whitespace.  Sequences are loaded at whatever length the file provides;
    a length other than 61 is reported, not rejected.
    """
    path = Path(path)
    records: list[LabeledRecord] = []
    replaced = 0
    with path.open("r", encoding="ascii") as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            fields = [f.strip() for f in text.split(",")]
            if len(fields) != 3 or not all(fields):
                raise DataFormatError(
                    f"expected 'label,identifier,sequence', got {text[:40]!r}",
                    str(path), lineno,
                )
            token, rec_id, seq = fields
            label = _label_index(token, SPLICE_CLASSES, str(path), lineno)
            try:
                cleaned, n_replaced = sanitize(seq)
            except InvalidBaseError as exc:
                raise DataFormatError(str(exc), str(path), lineno) from exc
            replaced += n_replaced
            records.append(LabeledRecord(id=rec_id, sequence=cleaned, label=label))

    lengths = {len(r.sequence) for r in records}
    if lengths and lengths != {SPLICE_SEQUENCE_LENGTH}:
        log.warning(
            "%s: splice sequence lengths %s differ from the expected %d",
            path, sorted(lengths), SPLICE_SEQUENCE_LENGTH,
        )
    log.info("%s: %d splice records", path, len(records))
    return Dataset(
        records=records,
        class_names=SPLICE_CLASSES,
        replaced_bases=replaced,
        source=str(path),
    )


def write_tsv(dataset: Dataset, path: str | Path) -> None:
    """Write records in the canonical TSV format (labels as class names)."""
    path = Path(path)
    with path.open("w", encoding="ascii", newline="\n") as handle:
        for record in dataset.records:
            handle.write(
                f"{record.id}\t{dataset.class_names[record.label]}\t{record.sequence}\n"
            )


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014).

    state += 0x9E3779B97F4A7C15; the output mixes the state with two
    xor-shift-multiply rounds (0xBF58476D1CE4E5B9, 0x94D049BB133111EB).
    Chosen because it is trivially portable across languages.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def _shuffled_indices(n: int, seed: int) -> list[int]:
    rng = SplitMix64(seed)
    indices = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next_uint64() % (i + 1)
        indices[i], indices[j] = indices[j], indices[i]
    return indices


@dataclass(frozen=True)
class DatasetSplit:
    """90/5/5 partition of record indices, reproducible from the seed."""

    train: tuple[int, ...]
    validation: tuple[int, ...]
    test: tuple[int, ...]
    seed: int
    fractions: tuple[float, float, float] = SPLIT_FRACTIONS

    def sizes(self) -> tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)

    def to_manifest(self) -> dict:
        return {
            "seed": self.seed,
            "fractions": list(self.fractions),
            "train": list(self.train),
            "validation": list(self.validation),
            "test": list(self.test),
        }

    @classmethod
    def from_manifest(cls, manifest: dict) -> "DatasetSplit":
        return cls(
            train=tuple(manifest["train"]),
            validation=tuple(manifest["validation"]),
            test=tuple(manifest["test"]),
            seed=manifest["seed"],
            fractions=tuple(manifest["fractions"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_manifest(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "DatasetSplit":
        return cls.from_manifest(json.loads(Path(path).read_text()))


def split(records: Sequence, seed: int) -> DatasetSplit:
    """Partition len(records) indices into 90% train / 5% validation / rest.

    Sizes are floor(0.90 n) and floor(0.05 n) computed in exact integer
    arithmetic; the test part takes the remainder.  Deterministic for a
    fixed seed.
    """
    n = len(records)
    if n < MIN_SPLIT_RECORDS:
        raise ValueError(f"need at least {MIN_SPLIT_RECORDS} records to split, got {n}")
    shuffled = _shuffled_indices(n, seed)
    n_train = 9 * n // 10
    n_val = n // 20
    return DatasetSplit(
        train=tuple(shuffled[:n_train]),
        validation=tuple(shuffled[n_train : n_train + n_val]),
        test=tuple(shuffled[n_train + n_val :]),
        seed=seed,
    )
