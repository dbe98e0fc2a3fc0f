"""Training harness for curve-encoded DNA sequence archives."""

from .archive import ArchiveData, EncodedSet, expand_onehot, read_archive, read_split
from .metrics import MetricReport, average_precision, evaluate_scores, roc_auc
from .model import (
    ComputationBlockSpec,
    HCNN,
    ResidualBlockSpec,
    build_hcnn,
    build_seq_hcnn,
    count_parameters,
)
from .training import TrainConfig, TrainResult, early_stop_check, evaluate, train

__version__ = "0.1.0"
