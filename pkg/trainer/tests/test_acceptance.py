"""Acceptance suite for the training harness.

One criterion per test, each printing a PASS line (run with ``pytest -s``).
The overfit check trains a real model and takes the longest.
"""

import statistics

import numpy as np
import pytest
import torch

from seqgrid_trainer.archive import EncodedSet, read_archive
from seqgrid_trainer.model import build_hcnn, build_seq_hcnn, count_parameters
from seqgrid_trainer.training import TrainConfig, early_stop_check, train

from test_model import TABLE_ROWS


def _ok(line: str) -> None:
    print(f"ACCEPTANCE PASS: {line}")


def test_shape_trace_matches_table():
    assert build_hcnn((16, 32, 256), 2).shape_trace() == TABLE_ROWS
    _ok("shape trace on 16x32x256 matches the expected output size at "
        "every stage")


def test_parameter_counts():
    hcnn = count_parameters(build_hcnn((16, 32, 256), 2))
    seq = count_parameters(build_seq_hcnn((1, 497, 256), 2))
    assert abs(hcnn - 961_000) / 961_000 < 0.15, f"hcnn has {hcnn} parameters"
    assert abs(hcnn - seq) / hcnn < 0.01, f"hcnn {hcnn} vs seq {seq}"
    _ok(f"parameter counts: hcnn {hcnn} within 961K +/- 15%; "
        f"seq twin {seq} differs by {abs(hcnn - seq) / hcnn:.2%} < 1%")


def test_overfit_oracle(overfit_archive):
    archive = read_archive(overfit_archive)
    assert (archive.height, archive.width, archive.channels) == (16, 32, 256)
    data = EncodedSet.from_archive(archive)
    assert len(data) == 100
    torch.manual_seed(2)
    model = build_hcnn(data.input_hwc, archive.num_classes)
    # default optimizer settings (lr 0.003, batch 300 -> full batch here);
    # 20 epochs is plenty, far under the 200-epoch cap, and long enough for
    # the windowed-median check to bite
    config = TrainConfig(max_epochs=20, seed=2, early_stopping=False)
    result = train(model, data, data, config)
    best = max(e.train_accuracy for e in result.history)
    reached = next(e.epoch for e in result.history if e.train_accuracy > 0.95)
    assert best > 0.95, f"only reached {best:.2%} in {len(result.history)} epochs"

    losses = [e.train_loss for e in result.history]
    medians = [
        statistics.median(losses[i : i + 10]) for i in range(len(losses) - 9)
    ]
    assert len(medians) >= 10
    drops = [b <= a + 1e-6 for a, b in zip(medians, medians[1:])]
    assert all(drops), f"10-epoch loss medians rose: {medians}"
    _ok(f"100 random-label records memorized: {best:.1%} train accuracy by "
        f"epoch {reached} (cap 200); all {len(medians)} 10-epoch loss medians "
        "non-increasing")


def test_early_stopping_hand_traces():
    def first_stop(errors, alpha, patience):
        for t in range(1, len(errors) + 1):
            if early_stop_check(errors[:t], alpha, patience):
                return t
        return None

    assert first_stop([0.30, 0.28, 0.29, 0.30], alpha=5, patience=2) == 4
    assert first_stop([0.5, 0.4, 0.3, 0.2], alpha=5, patience=2) is None
    assert early_stop_check([0.10, 0.11], alpha=5, patience=5)  # GL = 10 > 5
    _ok("hand-traced stopping: plateau [0.30,0.28,0.29,0.30] stops at epoch 4 "
        "(Nii-2); improving run never stops; error ratio 1.10 trips alpha=5")


def test_gradient_check():
    torch.manual_seed(7)
    model = build_hcnn((8, 8, 4), 3).double().eval()
    x = torch.randn(3, 4, 8, 8, dtype=torch.float64)
    y = torch.tensor([0, 1, 2])
    loss_fn = torch.nn.CrossEntropyLoss()

    def loss_value() -> torch.Tensor:
        return loss_fn(model(x), y)

    model.zero_grad()
    loss_value().backward()

    rng = np.random.default_rng(0)
    h = 1e-6
    checked = 0
    worst = 0.0
    for name, param in model.named_parameters():
        flat = param.detach().view(-1)
        grads = param.grad.view(-1)
        picks = rng.choice(flat.numel(), size=min(2, flat.numel()), replace=False)
        for idx in picks:
            backprop = float(grads[idx])
            if abs(backprop) < 1e-7:  # too small for a meaningful ratio
                continue
            with torch.no_grad():
                original = float(flat[idx])
                flat[idx] = original + h
                upper = float(loss_value())
                flat[idx] = original - h
                lower = float(loss_value())
                flat[idx] = original
            finite = (upper - lower) / (2 * h)
            rel = abs(finite - backprop) / max(abs(finite), abs(backprop))
            assert rel < 1e-3, f"{name}[{idx}]: fd {finite:.3e} vs bp {backprop:.3e}"
            worst = max(worst, rel)
            checked += 1
    assert checked >= 10
    _ok(f"finite differences match backprop on {checked} sampled parameters "
        f"(worst relative error {worst:.2e} < 1e-3, float64)")
