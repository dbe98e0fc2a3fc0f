import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqgrid.errors import InvalidBaseError
from seqgrid.kmer import (
    index_to_kmer,
    kmer_to_index,
    kmers_to_sequence,
    sanitize,
    sequence_to_kmers,
)

dna = st.text(alphabet="ACGT", min_size=1, max_size=200)


def test_kmer_to_index_examples():
    assert kmer_to_index("AAAA") == 0
    assert kmer_to_index("ACGT") == 27  # 0*64 + 1*16 + 2*4 + 3
    assert kmer_to_index("T") == 3


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_kmer_index_is_a_bijection(k):
    words = ["".join(w) for w in itertools.product("ACGT", repeat=k)]
    codes = [kmer_to_index(w) for w in words]
    assert sorted(codes) == list(range(4**k))
    for word, code in zip(words, codes):
        assert index_to_kmer(code, k) == word


def test_kmer_to_index_rejects_bad_base():
    with pytest.raises(InvalidBaseError) as err:
        kmer_to_index("ACXT")
    assert err.value.position == 2
    assert err.value.char == "X"


def test_sequence_to_kmers_worked_example():
    codes = sequence_to_kmers("TGACGAC", 3)
    assert len(codes) == 5
    expected = [kmer_to_index(w) for w in ["TGA", "GAC", "ACG", "CGA", "GAC"]]
    assert codes.tolist() == expected


def test_sequence_to_kmers_window_count():
    seq = "".join(random.Random(1).choice("ACGT") for _ in range(500))
    assert len(sequence_to_kmers(seq, 4)) == 497


def test_single_base():
    assert sequence_to_kmers("A", 1).tolist() == [0]


def test_sequence_shorter_than_k():
    with pytest.raises(ValueError):
        sequence_to_kmers("ACG", 4)
    with pytest.raises(ValueError):
        sequence_to_kmers("ACG", 0)


def test_sequence_to_kmers_rejects_unsanitized():
    with pytest.raises(InvalidBaseError) as err:
        sequence_to_kmers("ACGNACG", 2)
    assert err.value.position == 3


def test_sanitize_examples():
    assert sanitize("acgt") == ("ACGT", 0)
    assert sanitize("ACNGT") == ("ACAGT", 1)
    assert sanitize("acguRY") == ("ACGTAA", 3)  # U->T plus two ambiguity codes


def test_sanitize_rejects_non_iupac():
    with pytest.raises(InvalidBaseError) as err:
        sanitize("ACXGT")
    assert err.value.position == 2
    assert err.value.char == "X"


@given(seq=dna, k=st.integers(min_value=1, max_value=6))
def test_round_trip_reconstructs_sequence(seq, k):
    if len(seq) < k:
        seq = seq + "A" * (k - len(seq))
    codes = sequence_to_kmers(seq, k)
    assert kmers_to_sequence(codes, k) == seq


@given(seq=dna, k=st.integers(min_value=1, max_value=6))
def test_window_count_property(seq, k):
    if len(seq) < k:
        return
    assert len(sequence_to_kmers(seq, k)) + k - 1 == len(seq)


@given(seq=dna)
def test_codes_stay_in_range(seq):
    codes = sequence_to_kmers(seq, 1)
    assert codes.min() >= 0 and codes.max() < 4
    assert isinstance(codes, np.ndarray)
