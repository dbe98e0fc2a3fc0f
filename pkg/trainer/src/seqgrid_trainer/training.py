"""Training loop with the two-part early-stopping rule.

After each epoch the validation error E_val = 1 - accuracy is recorded.
Training stops when the generalization loss GL = 100 * (E_val / E_opt - 1)
exceeds alpha (E_opt being the best error so far), or when no epoch in the
last N set a new best ("no improvement in N steps").
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import torch
from torch import nn

from .archive import EncodedSet
from .metrics import MetricReport, evaluate_scores

__all__ = ["TrainConfig", "EpochStats", "TrainResult", "early_stop_check", "train", "evaluate"]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.003
    batch_size: int = 300
    max_epochs: int = 10
    gl_alpha: float = 5.0
    nii_n: int = 2
    seed: int = 0
    early_stopping: bool = True
    # Optional fit-the-set target, for memorization/overfit checks with the
    # epoch cap lifted; training stops once train accuracy reaches it.
    target_train_accuracy: float | None = None

    def __post_init__(self):
        if self.learning_rate <= 0 or self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError(f"learning rate, batch size and epochs must be positive: {self}")
        if self.gl_alpha <= 0 or self.nii_n < 1:
            raise ValueError(f"gl_alpha must be > 0 and nii_n >= 1: {self}")


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_accuracy: float

    @property
    def val_error(self) -> float:
        return 1.0 - self.val_accuracy


@dataclass
class TrainResult:
    history: list[EpochStats] = field(default_factory=list)
    stopped_early: bool = False
    stop_reason: str = ""

    def history_json(self) -> str:
        payload = {
            "stopped_early": self.stopped_early,
            "stop_reason": self.stop_reason,
            "epochs": [asdict(e) for e in self.history],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def history_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["epoch", "train_loss", "train_accuracy", "val_accuracy"])
        for e in self.history:
            writer.writerow(
                [e.epoch, f"{e.train_loss:.6f}", f"{e.train_accuracy:.6f}",
                 f"{e.val_accuracy:.6f}"]
            )
        return buffer.getvalue()


def early_stop_check(
    val_errors: Sequence[float], alpha: float = 5.0, patience: int = 2
) -> bool:
    """True when training should stop after the last recorded epoch."""
    errors = list(val_errors)
    if not errors:
        return False
    best = min(errors)
    current = errors[-1]
    if best > 0 and 100.0 * (current / best - 1.0) > alpha:
        return True
    if len(errors) > patience:
        cutoff = len(errors) - patience
        best_before = min(errors[:cutoff])
        if all(e >= best_before for e in errors[cutoff:]):
            return True
    return False


@torch.no_grad()
def _accuracy(model: nn.Module, data: EncodedSet, batch_size: int) -> float:
    model.eval()
    correct = 0
    for start in range(0, len(data), batch_size):
        indices = np.arange(start, min(start + batch_size, len(data)))
        x, y = data.batch(indices)
        correct += int((model(x).argmax(dim=1) == y).sum())
    return correct / len(data)


def train(
    model: nn.Module,
    train_set: EncodedSet,
    val_set: EncodedSet,
    config: TrainConfig = TrainConfig(),
) -> TrainResult:
    """Adam on cross entropy; deterministic for a fixed seed up to backend
    kernel nondeterminism (single-threaded CPU runs reproduce exactly)."""
    if len(train_set) == 0 or len(val_set) == 0:
        raise ValueError("train and validation sets must be non-empty")
    if train_set.input_hwc != val_set.input_hwc:
        raise ValueError(
            f"dimension mismatch: train {train_set.input_hwc} vs val {val_set.input_hwc}"
        )
    torch.manual_seed(config.seed)
    generator = torch.Generator().manual_seed(config.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()

    result = TrainResult()
    n = len(train_set)
    for epoch in range(1, config.max_epochs + 1):
        model.train()
        order = torch.randperm(n, generator=generator).numpy()
        total_loss = 0.0
        for start in range(0, n, config.batch_size):
            indices = order[start : start + config.batch_size]
            x, y = train_set.batch(indices)
            optimizer.zero_grad()
            loss = loss_fn(model(x), y)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach()) * len(indices)
        stats = EpochStats(
            epoch=epoch,
            train_loss=total_loss / n,
            train_accuracy=_accuracy(model, train_set, config.batch_size),
            val_accuracy=_accuracy(model, val_set, config.batch_size),
        )
        result.history.append(stats)
        if (
            config.target_train_accuracy is not None
            and stats.train_accuracy >= config.target_train_accuracy
        ):
            result.stop_reason = f"reached train accuracy target at epoch {epoch}"
            break
        if config.early_stopping and early_stop_check(
            [e.val_error for e in result.history], config.gl_alpha, config.nii_n
        ):
            result.stopped_early = True
            result.stop_reason = f"early stop after epoch {epoch}"
            break
    return result


@torch.no_grad()
def evaluate(model: nn.Module, test_set: EncodedSet, batch_size: int = 300) -> MetricReport:
    """Metric suite over a held-out set."""
    model.eval()
    chunks = []
    for start in range(0, len(test_set), batch_size):
        indices = np.arange(start, min(start + batch_size, len(test_set)))
        x, _ = test_set.batch(indices)
        chunks.append(torch.softmax(model(x), dim=1).numpy())
    probabilities = np.concatenate(chunks)
    return evaluate_scores(test_set.labels, probabilities)
