"""Threshold-pruned candidate extraction.

The pipeline finds every phrase (any length, within segments) whose
PF-IDF score reaches the score of the k-th best unigram/bigram candidate,
without counting every n-gram:

1. count unigrams and bigrams, score the non-stop ones, and take the
   score at rank k as the global cutoff;
2. derive the minimum source frequency any phrase at that cutoff must
   have, then count longer phrases by window growth, stopping a window as
   soon as the trailing bigram falls under the threshold (a phrase can
   never outnumber its bigrams);
3. discard phrases that are contiguous sub-phrases of an equally frequent
   longer phrase (they only ever occur inside it);
4. look up reference document frequencies, score, and keep everything at
   or above the cutoff.

The exhaustive counterpart in :mod:`elske.baseline` shares steps 3 and 4
through the private helpers here, which is what makes the two paths
comparable both for timing and for the equivalence tests.

Internally phrases travel as little-endian int32 byte strings (the kernel
key convention); the public operations speak token-id tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .index import ReferenceIndex, pack_bigram
from .kernels import NgramKernel
from .scoring import (
    DEFAULT_PIVOT,
    ScoredCandidate,
    ScoringParams,
    frequency_threshold,
    pf_idf_many,
    rank_key,
)
from .text import SourceCorpus

_LOW32 = (1 << 32) - 1


@dataclass
class PipelineConfig:
    """Tunables that do not change with the corpus."""

    pivot: int = DEFAULT_PIVOT           # 0 disables sublinear scaling
    max_phrase_len: int = 50             # safety cap for pathological inputs
    overextract: float = 1.0             # widen the rank-k cutoff to ceil(c * k)

    def effective_k(self, k: int) -> int:
        return max(1, math.ceil(self.overextract * k))


@dataclass
class NgramCounts:
    """Unigram/bigram tallies over the whole source, stop words included."""

    unigram_freq: np.ndarray     # count per token id
    f_max: int                   # max unigram count
    kernel: NgramKernel = field(repr=False)

    @property
    def bigram_keys(self) -> np.ndarray:
        return self.kernel.bigram_keys

    @property
    def bigram_counts(self) -> np.ndarray:
        return self.kernel.bigram_counts

    def bigram_count(self, u: int, v: int) -> int:
        return self.kernel.bigram_count(u, v)

    def bigram_items(self) -> Iterator[tuple[tuple[int, int], int]]:
        for key, count in zip(self.kernel.bigram_keys.tolist(),
                              self.kernel.bigram_counts.tolist()):
            yield (key >> 32, key & _LOW32), count


def count_unigrams_bigrams(corpus: SourceCorpus) -> NgramCounts:
    """Exact per-segment counts with overlapping occurrences."""
    kernel = NgramKernel(corpus.flat_tokens, corpus.segment_offsets, len(corpus.vocab))
    return NgramCounts(unigram_freq=kernel.unigram_counts, f_max=kernel.f_max, kernel=kernel)


def phrase_bytes(phrase) -> bytes:
    return np.asarray(phrase, dtype=np.int32).tobytes()


def phrase_tuple(key: bytes) -> tuple[int, ...]:
    return tuple(np.frombuffer(key, dtype=np.int32).tolist())


# ---------------------------------------------------------------------------
# step 1: unigram/bigram candidates and the rank-k cutoff

@dataclass
class _Step1:
    """Scored unigram/bigram candidate arrays (the step-1 ranking)."""

    uni_ids: np.ndarray
    uni_fs: np.ndarray
    uni_fd: np.ndarray
    uni_scores: np.ndarray
    bi_keys: np.ndarray      # packed (u << 32) | v, ascending
    bi_fs: np.ndarray
    bi_fd: np.ndarray
    bi_scores: np.ndarray

    def kth_score(self, k: int) -> float:
        """Score at rank k (ties in score cannot change this value)."""
        pool = np.concatenate((self.uni_scores, self.bi_scores))
        if len(pool) < k:
            return 0.0
        return float(np.partition(pool, len(pool) - k)[len(pool) - k])


def _score_step1(counts: NgramCounts, index: ReferenceIndex, stop_flags: np.ndarray,
                 id_map: np.ndarray, params: ScoringParams) -> _Step1:
    uni_ids = np.flatnonzero((counts.unigram_freq > 0) & ~stop_flags)
    uni_fs = counts.unigram_freq[uni_ids]
    uni_fd = index.unigram_doc_freqs(id_map[uni_ids])
    uni_scores = pf_idf_many(uni_fs, uni_fd, params)

    keys, bi_fs = counts.bigram_keys, counts.bigram_counts
    u, v = keys >> 32, keys & _LOW32
    candidate = ~(stop_flags[u] & stop_flags[v])
    keys, bi_fs, u, v = keys[candidate], bi_fs[candidate], u[candidate], v[candidate]

    ref_u, ref_v = id_map[u], id_map[v]
    known = (ref_u >= 0) & (ref_v >= 0)
    bi_fd = np.zeros(len(keys), dtype=np.int64)
    if known.any():
        bi_fd[known] = index.bigram_doc_freqs((ref_u[known] << 32) | ref_v[known])
    bi_scores = pf_idf_many(bi_fs, bi_fd, params)

    return _Step1(uni_ids=uni_ids, uni_fs=uni_fs, uni_fd=uni_fd, uni_scores=uni_scores,
                  bi_keys=keys, bi_fs=bi_fs, bi_fd=bi_fd, bi_scores=bi_scores)


def top_k_uni_bigrams(counts: NgramCounts, index: ReferenceIndex, k: int,
                      params: ScoringParams, stop_flags: np.ndarray,
                      id_map: np.ndarray | None = None,
                      ) -> tuple[list[ScoredCandidate], float, int]:
    """Rank every non-stop unigram and not-all-stop bigram by PF-IDF.

    Returns the full ranking, the score at rank k (0 when fewer than k
    candidates exist) and the derived minimum frequency threshold.
    """
    if id_map is None:
        id_map = np.arange(len(stop_flags), dtype=np.int64)
    step1 = _score_step1(counts, index, stop_flags, id_map, params)
    ranked = [
        ScoredCandidate((int(t),), int(fs), max(1, int(fd)), float(s))
        for t, fs, fd, s in zip(step1.uni_ids, step1.uni_fs, step1.uni_fd, step1.uni_scores)
    ]
    ranked.extend(
        ScoredCandidate((int(key) >> 32, int(key) & _LOW32), int(fs), max(1, int(fd)), float(s))
        for key, fs, fd, s in zip(step1.bi_keys, step1.bi_fs, step1.bi_fd, step1.bi_scores)
    )
    ranked.sort(key=ScoredCandidate.rank_key)
    cutoff = step1.kth_score(k)
    return ranked, cutoff, frequency_threshold(cutoff, params)


# ---------------------------------------------------------------------------
# step 2: longer phrases above the frequency threshold

def _long_phrases_bytes(counts: NgramCounts, freq_threshold_: int, max_len: int,
                        stop_flags: np.ndarray) -> dict[bytes, int]:
    # Frequency-1 long phrases are never candidates, so the effective
    # threshold is at least 2 even when the rank-k bound allows 1.
    effective = max(freq_threshold_, 2)
    grown = counts.kernel.grow_phrases(effective, max_len)
    return {p: c for p, c in grown.items()
            if not stop_flags[np.frombuffer(p, dtype=np.int32)].all()}


def extract_long_phrases(corpus: SourceCorpus, counts: NgramCounts,
                         freq_threshold_: int, max_len: int = 50) -> dict[tuple[int, ...], int]:
    """Count phrases of length >= 3 reaching ``max(freq_threshold_, 2)``."""
    pool = _long_phrases_bytes(counts, freq_threshold_, max_len, corpus.stop_flags())
    return {phrase_tuple(p): c for p, c in pool.items()}


# ---------------------------------------------------------------------------
# step 3: drop equal-frequency sub-phrases

def discard_same_frequency_subphrases(freqs: Mapping[tuple[int, ...], int],
                                      ) -> dict[tuple[int, ...], int]:
    """Remove phrases occurring only inside an equally frequent longer phrase.

    Operates on the union of unigram/bigram candidates and longer
    phrases; a phrase goes when any longer phrase in the map contains it
    contiguously with the same count (chains collapse to their longest
    member, since frequency equality is transitive along containment).
    """
    removed = set()
    for p, c in freqs.items():
        m = len(p)
        for size in range(1, m):
            for i in range(m - size + 1):
                q = p[i : i + size]
                if freqs.get(q) == c:
                    removed.add(q)
    return {p: c for p, c in freqs.items() if p not in removed}


def _discard_equal_subphrases(step1: _Step1, long_pool: dict[bytes, int],
                              counts: NgramCounts, stop_flags: np.ndarray,
                              ) -> tuple[np.ndarray, np.ndarray, set[bytes]]:
    """Array-shaped step 3 over (step-1 candidates) | (long phrases).

    Returns keep-masks for the unigram and bigram candidate arrays plus
    the set of removed long-phrase keys.  Same removal predicate as
    ``discard_same_frequency_subphrases``, engineered for large pools.
    """
    removed_long: set[bytes] = set()
    uni_q: list[np.ndarray] = []
    uni_qc: list[np.ndarray] = []
    bi_q: list[np.ndarray] = []
    bi_qc: list[np.ndarray] = []

    for p, c in long_pool.items():
        toks = np.frombuffer(p, dtype=np.int32).astype(np.int64)
        m = len(toks)
        uni_q.append(toks)
        uni_qc.append(np.full(m, c, dtype=np.int64))
        bi_q.append((toks[:-1] << 32) | toks[1:])
        bi_qc.append(np.full(m - 1, c, dtype=np.int64))
        for size in range(3, m):
            for i in range(m - size + 1):
                q = p[4 * i : 4 * (i + size)]
                if long_pool.get(q) == c:
                    removed_long.add(q)

    # Unigrams swallowed by an equally frequent candidate bigram.
    u, v = step1.bi_keys >> 32, step1.bi_keys & _LOW32
    removed_uni = [
        u[counts.unigram_freq[u] == step1.bi_fs],
        v[counts.unigram_freq[v] == step1.bi_fs],
    ]
    if uni_q:
        qt, qc = np.concatenate(uni_q), np.concatenate(uni_qc)
        hit = ~stop_flags[qt] & (counts.unigram_freq[qt] == qc)
        removed_uni.append(qt[hit])
    removed_uni_ids = np.unique(np.concatenate(removed_uni))
    # Stop-word unigrams are not candidates, so only candidate ids matter.
    uni_keep = ~np.isin(step1.uni_ids, removed_uni_ids)

    bi_keep = np.ones(len(step1.bi_keys), dtype=bool)
    if bi_q:
        qk, qc = np.concatenate(bi_q), np.concatenate(bi_qc)
        # Membership in the candidate pool == key present in step1.bi_keys
        # (pure stop-word bigrams were already excluded there).
        idx = np.searchsorted(step1.bi_keys, qk)
        if len(step1.bi_keys):
            idx[idx >= len(step1.bi_keys)] = 0
            hit = (step1.bi_keys[idx] == qk) & (step1.bi_fs[idx] == qc)
            removed_bi = np.unique(qk[hit])
            bi_keep = ~np.isin(step1.bi_keys, removed_bi)
    return uni_keep, bi_keep, removed_long


# ---------------------------------------------------------------------------
# step 4: reference document frequencies, final scores, cutoff filter

def _phrase_doc_freq(phrase_key: bytes, index: ReferenceIndex, id_map: np.ndarray) -> int:
    toks = np.frombuffer(phrase_key, dtype=np.int32)
    ref = id_map[toks]
    if (ref < 0).any():
        return 0
    return index.doc_frequency(ref.tolist())


def finalize_candidates(freqs: Mapping[tuple[int, ...], int], index: ReferenceIndex,
                        score_cutoff: float, params: ScoringParams,
                        id_map: np.ndarray | None = None) -> list[ScoredCandidate]:
    """Score surviving phrases and keep those at or above the cutoff, ranked.

    Stored document frequencies are clamped to at least 1, matching the
    scoring clamp for phrases absent from the reference.
    """
    phrases = list(freqs.keys())
    if not phrases:
        return []
    if id_map is None:
        size = max(max(p) for p in phrases) + 1
        id_map = np.arange(size, dtype=np.int64)
    fs = np.fromiter((freqs[p] for p in phrases), dtype=np.int64, count=len(phrases))
    fd = np.fromiter(
        (_phrase_doc_freq(phrase_bytes(p), index, id_map) for p in phrases),
        dtype=np.int64, count=len(phrases),
    )
    scores = pf_idf_many(fs, fd, params)
    out = [
        ScoredCandidate(p, int(f), max(1, int(d)), float(s))
        for p, f, d, s in zip(phrases, fs, fd, scores)
        if s >= score_cutoff
    ]
    out.sort(key=ScoredCandidate.rank_key)
    return out


# ---------------------------------------------------------------------------
# orchestration

class ExtractionContext:
    """Step-1 scores kept around for the condensing stage.

    Overhang scoring never needs anything beyond these: any overhang term
    occurs in the source, and one that is not purely stop words was a
    step-1 candidate.
    """

    def __init__(self, step1: _Step1, stop_flags: np.ndarray, vocab_size: int):
        self._uni = np.full(vocab_size, np.nan)
        self._uni[step1.uni_ids] = step1.uni_scores
        self._bi_keys = step1.bi_keys
        self._bi_scores = step1.bi_scores
        self.stop_flags = stop_flags

    def is_stop(self, token: int) -> bool:
        return bool(self.stop_flags[token])

    def unigram_score(self, token: int) -> float | None:
        s = self._uni[token]
        return None if np.isnan(s) else float(s)

    def bigram_score(self, u: int, v: int) -> float | None:
        key = pack_bigram(u, v)
        i = np.searchsorted(self._bi_keys, key)
        if i < len(self._bi_keys) and self._bi_keys[i] == key:
            return float(self._bi_scores[i])
        return None


@dataclass
class CandidateSet:
    """Everything scoring at or above the rank-k cutoff, ranked."""

    candidates: list[ScoredCandidate]
    score_cutoff: float      # score of the k-th step-1 candidate
    freq_threshold: int      # minimum frequency implied by the cutoff
    k: int
    context: ExtractionContext | None = field(default=None, repr=False, compare=False)


def _assemble_final(step1: _Step1, uni_keep: np.ndarray, bi_keep: np.ndarray,
                    long_pool: dict[bytes, int], removed_long: set[bytes],
                    cutoff: float, params: ScoringParams, index: ReferenceIndex,
                    id_map: np.ndarray) -> list[ScoredCandidate]:
    """Step 4, shared with the exhaustive baseline: score, filter, rank."""
    final: list[ScoredCandidate] = []
    sel = uni_keep & (step1.uni_scores >= cutoff)
    final.extend(
        ScoredCandidate((int(t),), int(fs), max(1, int(fd)), float(s))
        for t, fs, fd, s in zip(step1.uni_ids[sel], step1.uni_fs[sel],
                                step1.uni_fd[sel], step1.uni_scores[sel])
    )
    sel = bi_keep & (step1.bi_scores >= cutoff)
    final.extend(
        ScoredCandidate((int(key) >> 32, int(key) & _LOW32), int(fs), max(1, int(fd)), float(s))
        for key, fs, fd, s in zip(step1.bi_keys[sel], step1.bi_fs[sel],
                                  step1.bi_fd[sel], step1.bi_scores[sel])
    )

    survivors = [p for p in long_pool if p not in removed_long]
    if survivors:
        fs = np.fromiter((long_pool[p] for p in survivors), dtype=np.int64,
                         count=len(survivors))
        fd = np.fromiter((_phrase_doc_freq(p, index, id_map) for p in survivors),
                         dtype=np.int64, count=len(survivors))
        scores = pf_idf_many(fs, fd, params)
        final.extend(
            ScoredCandidate(phrase_tuple(p), int(f), max(1, int(d)), float(s))
            for p, f, d, s in zip(survivors, fs, fd, scores)
            if s >= cutoff
        )

    final.sort(key=ScoredCandidate.rank_key)
    return final


def extract(corpus: SourceCorpus, index: ReferenceIndex, k: int,
            config: PipelineConfig | None = None) -> CandidateSet:
    """Run the four-step pipeline; deterministic for identical inputs."""
    if k < 1:
        raise ValueError("k must be at least 1")
    config = config or PipelineConfig()
    counts = count_unigrams_bigrams(corpus)
    params = ScoringParams.for_source(counts.f_max, index.n_docs, config.pivot)
    stop_flags = corpus.stop_flags()
    id_map = index.id_map_from(corpus.vocab)

    step1 = _score_step1(counts, index, stop_flags, id_map, params)
    k_eff = config.effective_k(k)
    cutoff = step1.kth_score(k_eff)
    f_th = frequency_threshold(cutoff, params)

    long_pool = _long_phrases_bytes(counts, f_th, config.max_phrase_len, stop_flags)
    uni_keep, bi_keep, removed_long = _discard_equal_subphrases(
        step1, long_pool, counts, stop_flags)
    final = _assemble_final(step1, uni_keep, bi_keep, long_pool, removed_long,
                            cutoff, params, index, id_map)
    return CandidateSet(
        candidates=final,
        score_cutoff=cutoff,
        freq_threshold=f_th,
        k=k_eff,
        context=ExtractionContext(step1, stop_flags, len(corpus.vocab)),
    )
