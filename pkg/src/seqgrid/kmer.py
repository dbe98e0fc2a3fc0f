"""Overlapping k-mer codes for DNA strings.

k-mers are numbered in base 4 with A=0, C=1, G=2, T=3 and the leftmost
base most significant, so each code is also the k-mer's one-hot channel
in a vector of length 4**k.  One-hot vectors are never materialized here;
only integer codes flow downstream.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import InvalidBaseError

__all__ = [
    "BASE_ORDER",
    "sanitize",
    "kmer_to_index",
    "index_to_kmer",
    "sequence_to_kmers",
    "kmers_to_sequence",
]

BASE_ORDER = "ACGT"
_BASE_CODE = {base: i for i, base in enumerate(BASE_ORDER)}

# IUPAC ambiguity codes collapse to 'A' (deterministic, reported via the
# replacement count); U is RNA notation for T.
_SUBSTITUTIONS = str.maketrans({code: "A" for code in "RYSWKMBDHVN"} | {"U": "T"})
_NON_ACGT = re.compile(r"[^ACGT]")

_CODE_LUT = np.full(256, 255, dtype=np.uint8)
for _base, _code in _BASE_CODE.items():
    _CODE_LUT[ord(_base)] = _code


def sanitize(raw: str) -> tuple[str, int]:
    """Uppercase and collapse IUPAC ambiguity codes; count replacements.

    Returns the cleaned sequence (alphabet {A,C,G,T}) and how many
    characters were substituted.  Characters outside the IUPAC nucleotide
    codes raise InvalidBaseError naming the position.
    """
    seq = raw.upper()
    cleaned = seq.translate(_SUBSTITUTIONS)
    bad = _NON_ACGT.search(cleaned)
    if bad is not None:
        raise InvalidBaseError(seq[bad.start()], bad.start())
    replaced = len(seq) - sum(seq.count(base) for base in BASE_ORDER)
    return cleaned, replaced


def kmer_to_index(word: str) -> int:
    """Base-4 positional code of a k-mer over {A,C,G,T}."""
    code = 0
    for position, char in enumerate(word):
        base = _BASE_CODE.get(char)
        if base is None:
            raise InvalidBaseError(char, position)
        code = code * 4 + base
    return code


def index_to_kmer(code: int, k: int) -> str:
    """Inverse of kmer_to_index for words of length k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 <= code < 4**k:
        raise ValueError(f"code {code} outside [0, 4**{k})")
    bases = []
    for _ in range(k):
        bases.append(BASE_ORDER[code % 4])
        code //= 4
    return "".join(reversed(bases))


def sequence_to_kmers(seq: str, k: int) -> np.ndarray:
    """Codes of all overlapping k-mers (stride 1); length len(seq) - k + 1.

    The sequence must already be sanitized ({A,C,G,T} only).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(seq) < k:
        raise ValueError(f"sequence of length {len(seq)} is shorter than k={k}")
    digits = _CODE_LUT[np.frombuffer(seq.encode("ascii"), dtype=np.uint8)]
    invalid = np.flatnonzero(digits == 255)
    if invalid.size:
        position = int(invalid[0])
        raise InvalidBaseError(seq[position], position)
    weights = 4 ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return np.correlate(digits.astype(np.int64), weights, mode="valid")


def kmers_to_sequence(codes: np.ndarray, k: int) -> str:
    """Rebuild the sequence from overlapping k-mer codes.

    Assumes the codes came from sequence_to_kmers, i.e. consecutive words
    overlap consistently; only the final base of each code after the first
    is consumed.
    """
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size == 0:
        raise ValueError("cannot rebuild a sequence from zero k-mers")
    head = index_to_kmer(int(codes[0]), k)
    tail = "".join(BASE_ORDER[int(c) % 4] for c in codes[1:])
    return head + tail
