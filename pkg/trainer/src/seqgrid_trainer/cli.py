"""Train a model on an encoded archive, using a split manifest.

Writes per-epoch history and the test metric suite as JSON and CSV into
the output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import torch

from .archive import EncodedSet, read_archive, read_split
from .model import build_hcnn, build_seq_hcnn, count_parameters
from .training import TrainConfig, evaluate, train


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqgrid-train", description=__doc__)
    parser.add_argument("--archive", required=True, help="seqgrid tensor archive")
    parser.add_argument("--split", required=True, help="split manifest JSON")
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--lr", type=float, default=0.003)
    parser.add_argument("--batch-size", type=int, default=300)
    parser.add_argument("--max-epochs", type=int, default=10)
    parser.add_argument("--gl-alpha", type=float, default=5.0)
    parser.add_argument("--nii", type=int, default=2,
                        help="stop after this many epochs without improvement")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--no-early-stop", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    archive = read_archive(args.archive)
    parts = read_split(args.split)

    config = TrainConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
        gl_alpha=args.gl_alpha,
        nii_n=args.nii,
        seed=args.seed,
        early_stopping=not args.no_early_stop,
    )
    train_set = EncodedSet.from_archive(archive, parts["train"])
    val_set = EncodedSet.from_archive(archive, parts["validation"])
    test_set = EncodedSet.from_archive(archive, parts["test"])

    input_hwc = train_set.input_hwc
    builder = build_seq_hcnn if archive.curve == "flat" else build_hcnn
    torch.manual_seed(config.seed)  # initialization, then train(), share the seed
    model = builder(input_hwc, archive.num_classes)
    print(f"{archive.curve} archive {args.archive}: input {input_hwc}, "
          f"{archive.num_classes} classes, {count_parameters(model)} parameters")
    print(f"train/val/test sizes: {len(train_set)}/{len(val_set)}/{len(test_set)}")

    result = train(model, train_set, val_set, config)
    for stats in result.history:
        print(f"epoch {stats.epoch}: loss {stats.train_loss:.4f} "
              f"train acc {stats.train_accuracy:.3f} val acc {stats.val_accuracy:.3f}")
    if result.stopped_early:
        print(result.stop_reason)

    report = evaluate(model, test_set, config.batch_size)
    print("test:", ", ".join(f"{k} {v:.3f}" for k, v in report.as_dict().items()))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "history.json").write_text(result.history_json())
    (out_dir / "history.csv").write_text(result.history_csv())
    (out_dir / "metrics.json").write_text(report.to_json())
    (out_dir / "metrics.csv").write_text(report.to_csv())
    print(f"wrote history and metrics under {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
