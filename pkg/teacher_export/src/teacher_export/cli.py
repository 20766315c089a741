"""CLI: teacher-export --input UNITS --output OUT.jsonl [--model ...]"""

from __future__ import annotations

import argparse
import sys

from .exporter import DEFAULT_MODEL, ExportJob, ModelLoadError, cross_encode, export, make_encoder


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="teacher-export", description=__doc__)
    p.add_argument("--input", required=True, help="sub-chunk store, corpus/query JSONL, or pairs TSV")
    p.add_argument("--output", required=True, help="output embedding JSONL")
    p.add_argument("--model", default=DEFAULT_MODEL,
                   help=f"model name, or 'hash' for the offline stand-in (default {DEFAULT_MODEL})")
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--max-length", dest="max_length", type=int, default=512)
    p.add_argument("--role", choices=["query", "passage", "sentence"], default="passage")
    p.add_argument("--cross-encode", dest="cross_encode", default=None, metavar="QUERIES",
                   help="also score QUERIES against every input unit into OUTPUT.ce.tsv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        encoder = make_encoder(args.model)
        job = ExportJob(args.input, args.output, args.model, args.batch,
                        args.max_length, args.role)
        n = export(job, encoder)
        print(f"exported {n} records -> {args.output}")
        if args.cross_encode:
            ce_path = str(args.output) + ".ce.tsv"
            m = cross_encode(args.cross_encode, args.input, ce_path, encoder,
                             max_length=args.max_length, batch=args.batch)
            print(f"wrote {m} cross-encode scores -> {ce_path}")
    except (ModelLoadError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
