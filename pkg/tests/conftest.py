"""Shared helpers: synthetic corpora and brute-force oracles."""

from __future__ import annotations

import numpy as np
import pytest

from elske.text import SourceCorpus, ingest_collection


def zipf_lines(rng: np.random.Generator, n_docs: int, max_doc_len: int,
               vocab_size: int, stop_fraction: float = 0.1,
               alpha: float = 1.1, segment_prob: float = 0.08,
               ) -> tuple[list[str], list[str]]:
    """Random collection with Zipf-distributed words.

    The most probable ``stop_fraction`` of the vocabulary doubles as the
    stop-word list, mirroring real text where stop words dominate.
    Occasional periods split documents into several segments.
    """
    ranks = np.arange(1, vocab_size + 1)
    probs = 1.0 / ranks**alpha
    probs /= probs.sum()
    n_stop = max(1, int(vocab_size * stop_fraction))
    stop_lines = [f"w{r}" for r in range(vocab_size - n_stop, vocab_size)]
    # Highest-probability ranks get the largest ids so stop ids are stable.
    word_of = np.array([f"w{vocab_size - 1 - i}" for i in range(vocab_size)])

    lines = []
    for _ in range(n_docs):
        length = int(rng.integers(1, max_doc_len + 1))
        words = word_of[rng.choice(vocab_size, size=length, p=probs)]
        breaks = rng.random(length) < segment_prob
        parts = [w + "." if b else w for w, b in zip(words, breaks)]
        lines.append(" ".join(parts))
    return lines, stop_lines


def random_corpus(seed: int, n_docs: int = 30, max_doc_len: int = 12,
                  vocab_size: int = 12, **kw) -> SourceCorpus:
    rng = np.random.default_rng(seed)
    lines, stops = zipf_lines(rng, n_docs, max_doc_len, vocab_size, **kw)
    return ingest_collection(lines, stops)


# --- brute-force oracles -----------------------------------------------------

def brute_ngram_counts(corpus: SourceCorpus, max_n: int | None = None,
                       ) -> dict[tuple[int, ...], int]:
    """Count every n-gram within segments by direct enumeration."""
    counts: dict[tuple[int, ...], int] = {}
    for doc in corpus.docs:
        for seg in doc.segments:
            top = len(seg) if max_n is None else min(max_n, len(seg))
            for size in range(1, top + 1):
                for i in range(len(seg) - size + 1):
                    p = tuple(seg[i : i + size])
                    counts[p] = counts.get(p, 0) + 1
    return counts


def brute_doc_frequency(corpus: SourceCorpus, phrase) -> int:
    """Number of docs containing the phrase contiguously inside a segment."""
    phrase = tuple(phrase)
    m = len(phrase)
    hits = 0
    for doc in corpus.docs:
        if any(
            tuple(seg[i : i + m]) == phrase
            for seg in doc.segments
            for i in range(len(seg) - m + 1)
        ):
            hits += 1
    return hits


@pytest.fixture
def tiny_corpus() -> SourceCorpus:
    return ingest_collection(
        ["happy birthday to you. see you", "happy birthday again", "the cat"],
        ["the", "to", "you"],
    )
