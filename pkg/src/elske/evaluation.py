"""Benchmark harness: F1@k against gold keyphrases on standard datasets.

Follows the present-keyphrase protocol of the keyphrase-generation
literature: titles and abstracts are analyzed, phrases are compared after
per-word Porter stemming, and only gold keyphrases whose stemmed token
sequence occurs in the stemmed document count ("present"); documents with
no present gold keyphrase are skipped.  Precision and recall are computed
per document over the stem-deduplicated top-k predictions and
macro-averaged.

Unless a prebuilt reference index is supplied, document frequencies come
from the dataset's own documents, which keeps runs self-contained but is
one source of difference from published numbers whose reference corpora
are unspecified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .condensing import CondenseParams, condense
from .errors import IngestionError
from .extraction import PipelineConfig, extract
from .index import ReferenceIndex, build_index
from .stemming import porter_stem
from .text import Vocabulary, ingest_collection, ingest_document, tokenize


@dataclass
class BenchmarkDocument:
    title: str
    abstract: str
    gold_keyphrases: list[str]

    @property
    def text(self) -> str:
        # The line break keeps title and abstract in separate segments.
        return f"{self.title}\n{self.abstract}" if self.title else self.abstract


@dataclass
class EvalResult:
    dataset: str
    k: int
    precision: float
    recall: float
    f1: float
    docs_evaluated: int
    docs_skipped: int


def _phrase_words(text: str) -> list[str]:
    """Split a phrase with the corpus tokenizer rules (flattened)."""
    vocab = Vocabulary()
    doc = tokenize(text, vocab, 0)
    return [vocab.token(t) for seg in doc.segments for t in seg]


def stem_phrase(words: Sequence[str]) -> list[str]:
    """Per-word Porter stems after case folding."""
    return [porter_stem(w.casefold()) for w in words]


def present_keyphrases(gold: Iterable[Sequence[str]], doc_tokens: Sequence[str],
                       ) -> list[tuple[str, ...]]:
    """Gold phrases whose stemmed sequence occurs contiguously in the doc.

    Matching ignores segment boundaries, per the evaluation convention in
    the benchmark literature.
    """
    stemmed_doc = [porter_stem(t.casefold()) for t in doc_tokens]
    present = []
    for phrase in gold:
        needle = tuple(stem_phrase(phrase))
        m = len(needle)
        if m == 0:
            continue
        if any(tuple(stemmed_doc[i : i + m]) == needle
               for i in range(len(stemmed_doc) - m + 1)):
            present.append(needle)
    return present


@dataclass
class DocScore:
    precision: float
    recall: float
    matches: int

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0


def f1_at_k(predictions: Sequence[Sequence[str]], gold_present: set[tuple[str, ...]],
            k: int) -> DocScore:
    """Score one document's ranked predictions against its present gold.

    Predictions are stemmed, deduplicated keeping the highest-ranked
    instance, then truncated at k; a match is exact stemmed-sequence
    equality.  Precision divides by min(k, predictions) since fewer than
    k phrases may have been returned.
    """
    seen: list[tuple[str, ...]] = []
    for phrase in predictions:
        stemmed = tuple(stem_phrase(phrase))
        if stemmed and stemmed not in seen:
            seen.append(stemmed)
    top = seen[:k]
    matches = sum(1 for s in top if s in gold_present)
    precision = matches / min(k, len(top)) if top else 0.0
    recall = matches / len(gold_present) if gold_present else 0.0
    return DocScore(precision=precision, recall=recall, matches=matches)


def predict_keyphrases(doc: BenchmarkDocument, reference: ReferenceIndex, k: int,
                       stopword_lines: Iterable[str] | None = None,
                       config: PipelineConfig | None = None,
                       condense_params: CondenseParams | None = None,
                       ) -> list[list[str]]:
    """Document-mode extraction + condensing, rendered as word lists."""
    corpus = ingest_document(doc.text, stopword_lines)
    cset = extract(corpus, reference, k, config)
    ranked = condense(cset, condense_params, k=k)
    return [[corpus.vocab.token(t) for t in c.phrase] for c in ranked]


def run_benchmark(dataset: Sequence[BenchmarkDocument], k_values: Sequence[int],
                  reference: ReferenceIndex | None = None,
                  stopword_lines: Iterable[str] | None = None,
                  dataset_name: str = "dataset",
                  config: PipelineConfig | None = None,
                  condense_params: CondenseParams | None = None,
                  ) -> list[EvalResult]:
    """Evaluate F1@k for each requested k over the dataset."""
    stop_lines = list(stopword_lines) if stopword_lines is not None else None
    if reference is None:
        reference = build_index(
            ingest_collection([d.text for d in dataset], stop_lines))

    k_max = max(k_values)
    per_k: dict[int, list[DocScore]] = {k: [] for k in k_values}
    skipped = 0
    for doc in dataset:
        try:
            corpus = ingest_document(doc.text, stop_lines)
        except IngestionError:
            skipped += 1
            continue
        doc_words = [corpus.vocab.token(t) for t in corpus.flat_tokens.tolist()]
        gold = present_keyphrases(
            [_phrase_words(g) for g in doc.gold_keyphrases], doc_words)
        if not gold:
            skipped += 1
            continue
        cset = extract(corpus, reference, k_max, config)
        ranked = condense(cset, condense_params, k=k_max)
        predictions = [[corpus.vocab.token(t) for t in c.phrase] for c in ranked]
        gold_set = set(gold)
        for k in k_values:
            per_k[k].append(f1_at_k(predictions, gold_set, k))

    results = []
    for k in k_values:
        rows = per_k[k]
        n = len(rows)
        precision = sum(r.precision for r in rows) / n if n else 0.0
        recall = sum(r.recall for r in rows) / n if n else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        results.append(EvalResult(dataset=dataset_name, k=k, precision=precision,
                                  recall=recall, f1=f1, docs_evaluated=n,
                                  docs_skipped=skipped))
    return results
