"""Command-line front door.

Subcommands: ``encode`` (TSV -> tensor archive), ``gamma`` (locality
table), ``split`` (90/5/5 manifest), ``inspect`` (archive debugging),
``convert`` (raw public formats -> canonical TSV).

Exit codes: 0 success, 1 usage error, 2 data error.  ``--json-errors``
switches error reporting to one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .archive import FLAT_LAYOUT, decode_record, encode_dataset, load_archive, record_image
from .curves import CurveKind
from .datasets import DatasetSplit, load_splice, load_tsv, split, write_tsv
from .errors import SeqGridError
from .imaging import image_to_kmers
from .kmer import sanitize
from .locality import (
    DEFAULT_LENGTHS,
    SEQUENCE_KIND,
    format_gamma_table,
    gamma_csv,
    gamma_table,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_HEAT_RAMP = ".:-=+*#%@"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad arguments; 2 is reserved for data errors here.
    def error(self, message):
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def cmd_encode(args) -> int:
    dataset = load_tsv(args.input)
    kind = None if args.flat else CurveKind(args.curve)
    archive = encode_dataset(dataset, kind, args.k, jobs=args.jobs,
                             split_manifest=args.split_manifest or "")
    out = archive.save(args.out)
    image = record_image(archive, 0)
    cells = archive.height * archive.width
    print(
        f"encoded {archive.record_count} records from {args.input}: "
        f"{archive.height}x{archive.width}x{archive.channels} "
        f"({archive.curve}, order {archive.order}, k={archive.k})"
    )
    print(f"fill {image.num_codes}/{cells} ({image.fill_ratio:.1%})")
    print(f"wrote {out} and {out.name}.json")
    return EXIT_OK


def cmd_gamma(args) -> int:
    kinds = []
    for name in args.curves.split(","):
        name = name.strip()
        if name == SEQUENCE_KIND:
            kinds.append(SEQUENCE_KIND)
            continue
        try:
            kinds.append(CurveKind(name))
        except ValueError:
            raise _UsageError(
                f"unknown curve {name!r} (choose from "
                f"{[k.value for k in CurveKind] + [SEQUENCE_KIND]})"
            )
    for length in args.lengths:
        order = (max(length, 1).bit_length() - 1) // 2
        if length < 2 or (4**order != length and any(k != SEQUENCE_KIND for k in kinds)):
            raise _UsageError(f"length {length} is not a power of 4 >= 16")
    reports = gamma_table(args.lengths, kinds)
    print(format_gamma_table(reports))
    if args.out:
        Path(args.out).write_text(gamma_csv(reports))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_split(args) -> int:
    dataset = load_tsv(args.input)
    result = split(dataset.records, args.seed)
    result.save(args.out)
    n_train, n_val, n_test = result.sizes()
    print(f"split {len(dataset)} records (seed {args.seed}): "
          f"train {n_train}, validation {n_val}, test {n_test}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _heat_row(row, sentinel: int, channels: int) -> str:
    chars = []
    for code in row:
        if code == sentinel:
            chars.append(" ")
        else:
            chars.append(_HEAT_RAMP[int(code) * len(_HEAT_RAMP) // channels])
    return "".join(chars)


def cmd_inspect(args) -> int:
    archive = load_archive(args.archive)
    if not 0 <= args.record < archive.record_count:
        raise _UsageError(
            f"record {args.record} outside [0, {archive.record_count})"
        )
    image = record_image(archive, args.record)
    cells = image.height * image.width
    label = int(archive.labels[args.record])
    label_name = (
        archive.class_names[label] if label < len(archive.class_names) else str(label)
    )
    print(f"record {args.record} of {archive.record_count} in {args.archive}")
    print(
        f"dims {image.height}x{image.width}x{image.channels} "
        f"({archive.curve}, order {archive.order}, k={archive.k})"
    )
    print(f"crop rows [{archive.crop_start}, {archive.crop_stop})")
    print(f"label {label} ({label_name})")
    print(f"fill {image.num_codes}/{cells} ({image.fill_ratio:.1%})")
    for row in image.grid:
        print(_heat_row(row, image.sentinel, image.channels))
    if args.verify:
        originals = load_tsv(args.verify)
        if args.record >= len(originals.records):
            raise _UsageError(f"record {args.record} not present in {args.verify}")
        expected, _ = sanitize(originals.records[args.record].sequence)
        decoded = decode_record(archive, args.record)
        if decoded != expected:
            mismatch = next(
                (i for i, (a, b) in enumerate(zip(decoded, expected)) if a != b),
                min(len(decoded), len(expected)),
            )
            print(f"VERIFY FAILED: decoded sequence diverges at base {mismatch} "
                  f"(decoded {len(decoded)} bases, original {len(expected)})")
            return EXIT_DATA
        print(f"verify OK: decoded sequence matches {args.verify}")
    return EXIT_OK


def cmd_convert(args) -> int:
    if args.format == "splice":
        dataset = load_splice(args.input)
    else:
        dataset = _load_fasta(args.input)
    write_tsv(dataset, args.out)
    print(f"converted {len(dataset)} records to {args.out}")
    return EXIT_OK


def _load_fasta(path: str):
    """FASTA where each header is '>id label'; used by convert only."""
    from .datasets import Dataset, LabeledRecord
    from .errors import DataFormatError

    path = Path(path)
    raw: list[tuple[str, str, str]] = []
    header: tuple[str, str] | None = None
    chunks: list[str] = []

    def flush(lineno):
        if header is None:
            return
        if not chunks:
            raise DataFormatError("header without sequence", str(path), lineno)
        raw.append((header[0], header[1], "".join(chunks)))

    with path.open("r", encoding="ascii") as handle:
        lineno = 0
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith(">"):
                flush(lineno)
                parts = text[1:].split()
                if len(parts) < 2:
                    raise DataFormatError(
                        "FASTA header must be '>id label'", str(path), lineno
                    )
                header = (parts[0], parts[1])
                chunks.clear()
            else:
                chunks.append(text)
        flush(lineno)

    vocabulary = tuple(sorted({label for _, label, _ in raw}))
    records = []
    replaced = 0
    for rec_id, label, seq in raw:
        cleaned, n = sanitize(seq)
        replaced += n
        records.append(
            LabeledRecord(id=rec_id, sequence=cleaned, label=vocabulary.index(label))
        )
    return Dataset(
        records=records,
        class_names=vocabulary,
        replaced_bases=replaced,
        source=str(path),
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="seqgrid", description=__doc__.splitlines()[0])
    parser.add_argument("--json-errors", action="store_true",
                        help="report errors as JSON on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    encode = commands.add_parser("encode", help="encode a TSV into a tensor archive")
    encode.add_argument("input", help="canonical TSV (id<TAB>label<TAB>sequence)")
    encode.add_argument("--curve", choices=[k.value for k in CurveKind],
                        default=CurveKind.HILBERT.value)
    encode.add_argument("--k", type=_positive_int, default=4, help="k-mer length")
    encode.add_argument("--flat", action="store_true",
                        help="emit the 1-row layout instead of a 2D curve")
    encode.add_argument("--jobs", type=_positive_int, default=1)
    encode.add_argument("--split-manifest", default="",
                        help="path of a split manifest to reference from the archive")
    encode.add_argument("--out", required=True)
    encode.set_defaults(func=cmd_encode)

    gamma_cmd = commands.add_parser("gamma", help="locality table for curves")
    gamma_cmd.add_argument("--lengths", type=_int_list,
                           default=list(DEFAULT_LENGTHS),
                           help="comma-separated, powers of 4 (default 16,...,4096)")
    gamma_cmd.add_argument("--curves",
                           default=",".join(k.value for k in
                                            (CurveKind.RESHAPE, CurveKind.SNAKE,
                                             CurveKind.DIAGSNAKE, CurveKind.HILBERT)),
                           help="comma-separated kinds; 'sequence' adds the 1D baseline")
    gamma_cmd.add_argument("--out", default="", help="also write CSV here")
    gamma_cmd.set_defaults(func=cmd_gamma)

    split_cmd = commands.add_parser("split", help="write a 90/5/5 split manifest")
    split_cmd.add_argument("input")
    split_cmd.add_argument("--seed", type=int, required=True)
    split_cmd.add_argument("--out", required=True)
    split_cmd.set_defaults(func=cmd_split)

    inspect_cmd = commands.add_parser("inspect", help="render one archive record")
    inspect_cmd.add_argument("archive")
    inspect_cmd.add_argument("--record", type=int, default=0)
    inspect_cmd.add_argument("--verify", default="",
                             help="TSV with the original records to verify against")
    inspect_cmd.set_defaults(func=cmd_inspect)

    convert = commands.add_parser("convert", help="raw public format -> canonical TSV")
    convert.add_argument("input")
    convert.add_argument("--format", choices=["splice", "fasta"], required=True)
    convert.add_argument("--out", required=True)
    convert.set_defaults(func=cmd_convert)
    return parser


def _report(message: str, code: int, as_json: bool) -> int:
    if as_json:
        print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json-errors" in argv
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return _report(str(exc), EXIT_USAGE, as_json)
    try:
        return args.func(args)
    except _UsageError as exc:
        return _report(str(exc), EXIT_USAGE, as_json)
    except SeqGridError as exc:
        return _report(str(exc), EXIT_DATA, as_json)
    except OSError as exc:
        return _report(str(exc), EXIT_DATA, as_json)


if __name__ == "__main__":
    sys.exit(main())
