"""seqgrid: DNA sequences as 2D image tensors via space-filling curves."""

from .archive import TensorArchive, decode_record, encode_dataset, load_archive
from .curves import CurveKind, CurveMapping, generate_curve, index_to_point, point_to_index
from .datasets import (
    Dataset,
    DatasetSplit,
    LabeledRecord,
    load_chromatin,
    load_splice,
    load_tsv,
    split,
)
from .errors import ArchiveFormatError, DataFormatError, InvalidBaseError, SeqGridError
from .imaging import SequenceImage, crop, flatten_1d, image_to_kmers, layout, required_order, to_onehot
from .kmer import kmer_to_index, index_to_kmer, kmers_to_sequence, sanitize, sequence_to_kmers
from .locality import GammaReport, curve_distance, gamma, gamma_table, seq_distance

__version__ = "0.1.0"
