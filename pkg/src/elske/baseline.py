"""Exhaustive extraction: the correctness oracle and timing baseline.

Counts every n-gram at every position, then runs the same sub-phrase
discard and the same scoring/filtering code as the pruned pipeline, so
differences in output would indicate a pipeline bug and differences in
runtime measure exactly the value of the pruning.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .extraction import (
    PipelineConfig,
    _assemble_final,
    _discard_equal_subphrases,
    _score_step1,
    count_unigrams_bigrams,
    extract,
    phrase_tuple,
)
from .index import ReferenceIndex
from .kernels import BACKEND
from .scoring import ScoredCandidate, ScoringParams
from .text import SourceCorpus


def _max_segment_len(corpus: SourceCorpus) -> int:
    if len(corpus.segment_offsets) < 2:
        return 0
    return int(np.diff(corpus.segment_offsets).max())


def enumerate_all_ngrams(corpus: SourceCorpus, max_n: int | None = None,
                         ) -> dict[tuple[int, ...], int]:
    """Exact count of every n-gram (n <= max_n) within segments.

    ``max_n`` defaults to the longest segment length.  Overlapping
    occurrences count at every position.
    """
    if max_n is None:
        max_n = _max_segment_len(corpus)
    kernel = count_unigrams_bigrams(corpus).kernel
    return {phrase_tuple(p): c for p, c in kernel.enumerate_ngrams(max_n).items()}


def baseline_top_k(corpus: SourceCorpus, index: ReferenceIndex, k: int,
                   config: PipelineConfig | None = None) -> list[ScoredCandidate]:
    """Full ranking of all n-grams, truncated at the rank-k cutoff score.

    The cutoff, the sub-phrase discard and the scoring are the pipeline's
    own; only candidate collection is exhaustive.  Pure stop-word phrases
    and frequency-1 phrases of length >= 3 are never candidates.
    """
    config = config or PipelineConfig()
    counts = count_unigrams_bigrams(corpus)
    params = ScoringParams.for_source(counts.f_max, index.n_docs, config.pivot)
    stop_flags = corpus.stop_flags()
    id_map = index.id_map_from(corpus.vocab)

    step1 = _score_step1(counts, index, stop_flags, id_map, params)
    cutoff = step1.kth_score(config.effective_k(k))

    max_n = min(_max_segment_len(corpus), config.max_phrase_len)
    everything = counts.kernel.enumerate_ngrams(max_n, min_count_long=2)
    long_pool = {
        p: c for p, c in everything.items()
        if len(p) >= 12 and not stop_flags[np.frombuffer(p, dtype=np.int32)].all()
    }
    uni_keep, bi_keep, removed_long = _discard_equal_subphrases(
        step1, long_pool, counts, stop_flags)
    return _assemble_final(step1, uni_keep, bi_keep, long_pool, removed_long,
                           cutoff, params, index, id_map)


@dataclass
class TimingReport:
    """Wall-clock comparison over identical inputs, single-threaded."""

    baseline_seconds: float
    pipeline_seconds: float
    speedup: float
    docs: int
    tokens: int
    k: int
    runs: int
    backend: str

    def as_record(self) -> dict:
        return {
            "docs": self.docs,
            "tokens": self.tokens,
            "k": self.k,
            "runs": self.runs,
            "backend": self.backend,
            "baseline_seconds": round(self.baseline_seconds, 4),
            "pipeline_seconds": round(self.pipeline_seconds, 4),
            "speedup": round(self.speedup, 2),
            "measured": "candidate selection only; tokenization and index build excluded",
        }


def timed_compare(corpus: SourceCorpus, index: ReferenceIndex, k: int,
                  config: PipelineConfig | None = None, runs: int = 3) -> TimingReport:
    """Average wall time of the exhaustive and pruned paths over ``runs`` runs.

    The measured region covers candidate selection only (counting through
    cutoff filtering); tokenization and index construction are shared
    setup and happen before this call.
    """
    baseline_total = 0.0
    for _ in range(runs):
        start = time.perf_counter()
        baseline_top_k(corpus, index, k, config)
        baseline_total += time.perf_counter() - start
    pipeline_total = 0.0
    for _ in range(runs):
        start = time.perf_counter()
        extract(corpus, index, k, config)
        pipeline_total += time.perf_counter() - start
    baseline_mean = baseline_total / runs
    pipeline_mean = pipeline_total / runs
    return TimingReport(
        baseline_seconds=baseline_mean,
        pipeline_seconds=pipeline_mean,
        speedup=baseline_mean / pipeline_mean if pipeline_mean > 0 else float("inf"),
        docs=corpus.n_docs,
        tokens=corpus.total_token_count,
        k=k,
        runs=runs,
        backend=BACKEND,
    )
