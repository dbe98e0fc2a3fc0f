import random
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


def random_dna(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("ACGT") for _ in range(length))


def write_records(path: Path, sequences, labels=None) -> Path:
    """Write sequences as a canonical TSV with alternating 0/1 labels."""
    lines = []
    for i, seq in enumerate(sequences):
        label = labels[i] if labels is not None else i % 2
        lines.append(f"r{i:04d}\t{label}\t{seq}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
