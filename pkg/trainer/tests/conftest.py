"""Fixture archives are produced through the encoder CLI, the same file
interface real runs consume."""

import random
import subprocess
import sys
from pathlib import Path

import pytest


def run_seqgrid(*args) -> None:
    subprocess.run([sys.executable, "-m", "seqgrid.cli", *args], check=True,
                   capture_output=True, text=True)


def write_tsv(path: Path, rows) -> Path:
    path.write_text("".join(f"{rid}\t{label}\t{seq}\n" for rid, label, seq in rows))
    return path


def random_dna(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("ACGT") for _ in range(length))


@pytest.fixture(scope="session")
def small_archive(tmp_path_factory):
    """24 records, 40 bases, k=2, snake curve, plus a seed-7 split manifest."""
    root = tmp_path_factory.mktemp("small")
    rng = random.Random(11)
    rows = [(f"s{i:03d}", i % 2, random_dna(rng, 40)) for i in range(24)]
    tsv = write_tsv(root / "small.tsv", rows)
    archive = root / "small.sga"
    split = root / "small_split.json"
    run_seqgrid("encode", str(tsv), "--curve", "snake", "--k", "2",
                "--split-manifest", str(split), "--out", str(archive))
    run_seqgrid("split", str(tsv), "--seed", "7", "--out", str(split))
    return {"tsv": tsv, "archive": archive, "split": split, "rows": rows}


def memorization_rows(n: int, seed: int, length: int = 500):
    """Random sequences with i.i.d. random labels: nothing to generalize,
    so reaching high train accuracy requires actually memorizing the set."""
    rng = random.Random(seed)
    return [
        (f"m{i:03d}", rng.randrange(2), random_dna(rng, length)) for i in range(n)
    ]


@pytest.fixture(scope="session")
def overfit_archive(tmp_path_factory):
    """100 random-label 500-base records encoded with k=4 on the hilbert curve."""
    root = tmp_path_factory.mktemp("overfit")
    tsv = write_tsv(root / "noise.tsv", memorization_rows(100, seed=5))
    archive = root / "noise.sga"
    run_seqgrid("encode", str(tsv), "--curve", "hilbert", "--k", "4",
                "--out", str(archive))
    return archive
