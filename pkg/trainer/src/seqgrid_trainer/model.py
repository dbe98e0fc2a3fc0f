"""Residual CNN over curve-encoded sequence images, plus its 1-D twin.

The network reduces the sparse 4**k-channel input with two large padded
convolutions, runs five computation blocks (each the sum of two residual
blocks and an identity path), pools down to a handful of nodes and
classifies through three small fully connected layers.  The flat variant
replaces every h x w filter with an (h*w) x 1 filter and flattens the
pooling windows the same way, so the channel algebra and parameter count
stay essentially identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import nn

# Even filter sizes with padding="same" are intentional here; torch warns
# about the asymmetric-padding copy they require.
warnings.filterwarnings(
    "ignore", message="Using padding='same' with even kernel lengths", category=UserWarning
)

__all__ = [
    "ResidualBlockSpec",
    "ComputationBlockSpec",
    "HCNN",
    "build_hcnn",
    "build_seq_hcnn",
    "count_parameters",
]


@dataclass(frozen=True)
class ResidualBlockSpec:
    filter_a: int  # first conv filter size
    filter_b: int  # second conv filter size
    d_link: int  # channels out of the first conv
    d_out: int  # channels out of the block

    def __post_init__(self):
        if min(self.filter_a, self.filter_b, self.d_link, self.d_out) < 1:
            raise ValueError(f"all residual-block sizes must be positive: {self}")
        if self.d_link >= self.d_out:
            raise ValueError(f"d_link must be < d_out, got {self.d_link} >= {self.d_out}")


@dataclass(frozen=True)
class ComputationBlockSpec:
    filters: tuple[int, int, int, int]
    d_link: int
    d_out: int

    def residual_specs(self) -> tuple[ResidualBlockSpec, ResidualBlockSpec]:
        k1, k2, k3, k4 = self.filters
        return (
            ResidualBlockSpec(k1, k2, self.d_link, self.d_out),
            ResidualBlockSpec(k3, k4, self.d_link, self.d_out),
        )


# Canonical block line-up: two computation blocks
# between the first two pools, three after, all with d_link=4, d_out=32.
EARLY_BLOCKS = (
    ComputationBlockSpec((8, 4, 4, 3), 4, 32),
    ComputationBlockSpec((3, 3, 3, 3), 4, 32),
)
LATE_BLOCKS = (
    ComputationBlockSpec((2, 4, 4, 3), 4, 32),
    ComputationBlockSpec((2, 2, 2, 2), 4, 32),
    ComputationBlockSpec((3, 2, 2, 3), 4, 32),
)
FIRST_CONV_CHANNELS = 64
FC_WIDTHS = (64, 100, 50)


def _kernel(size: int, flat: bool) -> tuple[int, int]:
    return (1, size * size) if flat else (size, size)


class ResidualBlock(nn.Module):
    """conv -> BN -> ELU -> conv -> BN branch, concatenated with the
    (1x1-projected) input to reach d_out channels, then ELU."""

    def __init__(self, in_channels: int, spec: ResidualBlockSpec, flat: bool = False):
        super().__init__()
        self.conv1 = nn.Conv2d(in_channels, spec.d_link, _kernel(spec.filter_a, flat),
                               padding="same")
        self.bn1 = nn.BatchNorm2d(spec.d_link)
        self.conv2 = nn.Conv2d(spec.d_link, spec.d_link, _kernel(spec.filter_b, flat),
                               padding="same")
        self.bn2 = nn.BatchNorm2d(spec.d_link)
        passthrough = spec.d_out - spec.d_link
        if in_channels == passthrough:
            self.project: nn.Module = nn.Identity()
        else:
            self.project = nn.Conv2d(in_channels, passthrough, 1)

    def forward(self, x):
        branch = self.bn2(self.conv2(F.elu(self.bn1(self.conv1(x)))))
        return F.elu(torch.cat((branch, self.project(x)), dim=1))


class ComputationBlock(nn.Module):
    """Sum of two residual blocks and an identity path, then BN and ELU."""

    def __init__(self, in_channels: int, spec: ComputationBlockSpec, flat: bool = False):
        super().__init__()
        first, second = spec.residual_specs()
        self.residual1 = ResidualBlock(in_channels, first, flat)
        self.residual2 = ResidualBlock(in_channels, second, flat)
        if in_channels == spec.d_out:
            self.identity: nn.Module = nn.Identity()
        else:
            self.identity = nn.Conv2d(in_channels, spec.d_out, 1)
        self.bn = nn.BatchNorm2d(spec.d_out)

    def forward(self, x):
        return F.elu(self.bn(self.residual1(x) + self.residual2(x) + self.identity(x)))


def _pool_for(h: int, w: int, flat: bool) -> tuple[nn.Module, int, int]:
    # Windows clamp to the remaining extent so the cascade stays integral
    # on small inputs (e.g. 8x8 splice images) without changing any shape
    # on the canonical 16x32 input.
    if flat:
        kernel = (1, min(4, w))
    else:
        kernel = (min(2, h), min(2, w))
    pool = nn.AvgPool2d(kernel_size=kernel, stride=kernel)
    return pool, (h - kernel[0]) // kernel[0] + 1, (w - kernel[1]) // kernel[1] + 1


class HCNN(nn.Module):
    """The full classifier; ``forward`` returns logits."""

    def __init__(self, input_hwc: tuple[int, int, int], num_classes: int,
                 flat: bool = False):
        super().__init__()
        height, width, channels = input_hwc
        if num_classes < 2:
            raise ValueError(f"need at least 2 classes, got {num_classes}")
        self.input_hwc = tuple(input_hwc)
        self.num_classes = num_classes
        self.flat = flat

        self.conv1 = nn.Conv2d(channels, FIRST_CONV_CHANNELS, _kernel(7, flat),
                               padding="same")
        self.bn1 = nn.BatchNorm2d(FIRST_CONV_CHANNELS)
        self.conv2 = nn.Conv2d(FIRST_CONV_CHANNELS, FIRST_CONV_CHANNELS,
                               _kernel(5, flat), padding="same")
        self.bn2 = nn.BatchNorm2d(FIRST_CONV_CHANNELS)

        h, w = height, width
        self.pool1, h, w = _pool_for(h, w, flat)
        if h < 1 or w < 1:
            raise ValueError(f"input {input_hwc} is too small for the pooling cascade")

        blocks = []
        in_channels = FIRST_CONV_CHANNELS
        for spec in EARLY_BLOCKS:
            blocks.append(ComputationBlock(in_channels, spec, flat))
            in_channels = spec.d_out
        self.early_blocks = nn.ModuleList(blocks)
        self.pool2, h, w = _pool_for(h, w, flat)

        blocks = []
        for spec in LATE_BLOCKS:
            blocks.append(ComputationBlock(in_channels, spec, flat))
            in_channels = spec.d_out
        self.late_blocks = nn.ModuleList(blocks)
        self.pool3, h, w = _pool_for(h, w, flat)

        self.bn_tail = nn.BatchNorm2d(in_channels)
        self.pool4, h, w = _pool_for(h, w, flat)
        if h < 1 or w < 1:
            raise ValueError(f"input {input_hwc} is too small for the pooling cascade")

        flat_dim = h * w * in_channels
        self.fc1 = nn.Linear(flat_dim, FC_WIDTHS[0])
        self.dropout1 = nn.Dropout(0.5)
        self.fc2 = nn.Linear(FC_WIDTHS[0], FC_WIDTHS[1])
        self.dropout2 = nn.Dropout(0.5)
        self.fc3 = nn.Linear(FC_WIDTHS[1], FC_WIDTHS[2])
        self.head = nn.Linear(FC_WIDTHS[2], num_classes)

    def forward(self, x):
        x = self.bn1(self.conv1(x))
        x = self.bn2(self.conv2(x))
        x = self.pool1(F.elu(x))
        for block in self.early_blocks:
            x = block(x)
        x = self.pool2(x)
        for block in self.late_blocks:
            x = block(x)
        x = self.pool3(x)
        x = self.pool4(F.elu(self.bn_tail(x)))
        x = torch.flatten(x, 1)
        x = self.dropout1(F.elu(self.fc1(x)))
        x = self.dropout2(F.elu(self.fc2(x)))
        x = self.fc3(x)
        return self.head(x)

    @torch.no_grad()
    def predict_proba(self, x) -> torch.Tensor:
        self.eval()
        return F.softmax(self.forward(x), dim=1)

    @torch.no_grad()
    def shape_trace(self) -> list[tuple[str, tuple[int, int, int]]]:
        """(stage, (height, width, channels)) after every sized stage,
        one entry per sized stage."""
        training = self.training
        self.eval()
        height, width, channels = self.input_hwc
        x = torch.zeros(1, channels, height, width)

        def hwc(t) -> tuple[int, int, int]:
            return t.shape[2], t.shape[3], t.shape[1]

        trace = [("input", hwc(x))]
        x = self.bn1(self.conv1(x))
        trace.append(("conv1", hwc(x)))
        x = self.bn2(self.conv2(x))
        trace.append(("conv2", hwc(x)))
        x = self.pool1(F.elu(x))
        trace.append(("pool1", hwc(x)))
        for i, block in enumerate(self.early_blocks, start=1):
            x = block(x)
            trace.append((f"block{i}", hwc(x)))
        x = self.pool2(x)
        trace.append(("pool2", hwc(x)))
        for i, block in enumerate(self.late_blocks, start=len(self.early_blocks) + 1):
            x = block(x)
            trace.append((f"block{i}", hwc(x)))
        x = self.pool3(x)
        trace.append(("pool3", hwc(x)))
        x = self.pool4(F.elu(self.bn_tail(x)))
        trace.append(("pool4", hwc(x)))
        self.train(training)
        return trace


def build_hcnn(input_hwc: tuple[int, int, int], num_classes: int) -> HCNN:
    """2-D model; ``input_hwc`` comes from the archive header."""
    return HCNN(input_hwc, num_classes, flat=False)


def build_seq_hcnn(input_hwc: tuple[int, int, int], num_classes: int = 2) -> HCNN:
    """1-row twin: every h x w filter becomes (h*w) x 1, pooling windows
    flatten likewise; parameter count stays within 1% of the 2-D model."""
    if input_hwc[0] != 1:
        raise ValueError(f"flat model expects height 1, got {input_hwc[0]}")
    return HCNN(input_hwc, num_classes, flat=True)


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)
