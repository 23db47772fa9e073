"""Command-line interface.

Commands: ``index`` (build and persist a reference index), ``extract``
(top-k keyphrases for a source against a reference), ``compare-baseline``
(time the pruned pipeline against exhaustive counting), and ``bench``
(F1@k benchmark over a gold-keyphrase dataset).

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data-format error.
The stop-word list resolves in order: ``--stopwords``, the
``ELSKE_STOPWORDS`` environment variable, then the packaged English list.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .baseline import timed_compare
from .condensing import CondenseParams, condense
from .datasets import load_dataset
from .errors import DatasetError, IndexFormatError, IngestionError
from .evaluation import run_benchmark
from .extraction import PipelineConfig, extract
from .index import MAGIC, build_index, read_index, save_index
from .text import default_stopword_lines, ingest_collection, ingest_document

# Published F1@5/F1@10 for this method on the four standard datasets,
# printed as context in bench reports.
_REPORTED_F1 = "SemEval 22.0/22.5, Krapivin 22.6/19.5, Inspec 20.7/23.6, NUS 26.1/20.6"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return k


def _k_list(value: str) -> list[int]:
    try:
        ks = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad k list {value!r}") from exc
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("k values must be positive integers")
    return ks


def _lambda_value(value: str) -> float:
    lam = float(value)
    if not 0.0 < lam <= 1.0:
        raise argparse.ArgumentTypeError("lambda must be in (0, 1]")
    return lam


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elske", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, reference_required):
        p.add_argument("--input", required=True, help="source text file")
        p.add_argument("--reference", required=reference_required,
                       help="reference collection: text file or prebuilt index")
        p.add_argument("--k", type=_positive_int, default=1000)
        p.add_argument("--lambda", dest="lam", type=_lambda_value, default=0.1)
        p.add_argument("--pivot", type=int, default=500,
                       help="frequency pivot for sublinear scaling; 0 disables scaling")
        p.add_argument("--stopwords", help="stop-word file, one word per line")
        p.add_argument("--mode", choices=("document", "collection"),
                       default="collection")
        p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
        p.add_argument("--overextract", type=float, default=1.0,
                       help="internal widening factor for the rank-k cutoff")

    p_index = sub.add_parser("index", help="build and persist a reference index")
    p_index.add_argument("--input", required=True, help="collection, one doc per line")
    p_index.add_argument("--out", required=True, help="output index path")
    p_index.set_defaults(func=cmd_index)

    p_extract = sub.add_parser("extract", help="extract top-k keyphrases")
    common(p_extract, reference_required=True)
    p_extract.set_defaults(func=cmd_extract)

    p_cmp = sub.add_parser("compare-baseline",
                           help="time pruned extraction against exhaustive counting")
    common(p_cmp, reference_required=True)
    p_cmp.add_argument("--runs", type=_positive_int, default=3)
    p_cmp.set_defaults(func=cmd_compare)

    p_bench = sub.add_parser("bench", help="F1@k benchmark on a gold dataset")
    p_bench.add_argument("--dataset", required=True)
    p_bench.add_argument("--name", help="dataset name for the report")
    p_bench.add_argument("--k", type=_k_list, default=[5, 10],
                         help="comma-separated list, e.g. 5,10")
    p_bench.add_argument("--reference",
                         help="reference index/text (default: the dataset itself)")
    p_bench.add_argument("--stopwords")
    p_bench.add_argument("--lambda", dest="lam", type=_lambda_value, default=0.1)
    p_bench.add_argument("--pivot", type=int, default=500)
    p_bench.add_argument("--overextract", type=float, default=1.0)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def _stopword_lines(args) -> list[str]:
    path = getattr(args, "stopwords", None) or os.environ.get("ELSKE_STOPWORDS")
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read().splitlines()
    return default_stopword_lines()


def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _load_reference(path: str):
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return read_index(path)
    return build_index(ingest_collection(_read_lines(path)))


def _load_source(args):
    stops = _stopword_lines(args)
    if args.mode == "document":
        with open(args.input, "r", encoding="utf-8") as fh:
            return ingest_document(fh.read(), stops)
    return ingest_collection(_read_lines(args.input), stops)


def _config(args) -> PipelineConfig:
    return PipelineConfig(pivot=args.pivot, overextract=args.overextract)


def cmd_index(args) -> int:
    corpus = ingest_collection(_read_lines(args.input))
    index = build_index(corpus)
    save_index(index, args.out)
    print(f"docs\t{index.n_docs}")
    print(f"vocabulary\t{len(index.vocab)}")
    return 0


def cmd_extract(args) -> int:
    corpus = _load_source(args)
    index = _load_reference(args.reference)
    cset = extract(corpus, index, args.k, _config(args))
    ranked = condense(cset, CondenseParams(lam=args.lam), k=args.k)
    if len(ranked) < args.k:
        print(f"warning: only {len(ranked)} phrases survived condensing "
              f"(asked for {args.k})", file=sys.stderr)
    for rank, cand in enumerate(ranked, 1):
        record = {
            "rank": rank,
            "phrase": corpus.phrase_text(cand.phrase),
            "frequency": cand.f_s,
            "score": round(cand.score, 4),
        }
        if args.format == "jsonl":
            print(json.dumps(record))
        else:
            print(f"{rank}\t{record['phrase']}\t{cand.f_s}\t{cand.score:.4f}")
    return 0


def cmd_compare(args) -> int:
    corpus = _load_source(args)
    index = _load_reference(args.reference)
    report = timed_compare(corpus, index, args.k, _config(args), runs=args.runs)
    record = report.as_record()
    if args.format == "jsonl":
        print(json.dumps(record))
    else:
        keys = list(record)
        print("\t".join(keys))
        print("\t".join(str(record[key]) for key in keys))
    return 0


def cmd_bench(args) -> int:
    dataset = load_dataset(args.dataset)
    if not dataset:
        raise DatasetError(f"no usable documents in {args.dataset}")
    name = args.name or os.path.basename(os.path.normpath(args.dataset))
    reference = _load_reference(args.reference) if args.reference else None
    results = run_benchmark(
        dataset, args.k, reference=reference,
        stopword_lines=_stopword_lines(args), dataset_name=name,
        config=PipelineConfig(pivot=args.pivot, overextract=args.overextract),
        condense_params=CondenseParams(lam=args.lam),
    )
    print("dataset\tk\tprecision\trecall\tf1\tdocs\tskipped")
    for r in results:
        print(f"{r.dataset}\t{r.k}\t{r.precision:.4f}\t{r.recall:.4f}"
              f"\t{r.f1:.4f}\t{r.docs_evaluated}\t{r.docs_skipped}")
    print(f"# reported F1@5/F1@10 for this method: {_REPORTED_F1}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (IngestionError, IndexFormatError, DatasetError) as exc:
        print(f"elske: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"elske: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
