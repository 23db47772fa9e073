"""Tokenization and corpus ingestion.

Text is case-folded and split into *segments*: maximal token runs that do
not cross sentence-ending punctuation (``. ! ? ;`` or a line break).  A
token is a maximal run of letters, digits, or apostrophes; every other
character separates tokens.  Phrases extracted downstream never cross a
segment boundary, and in collection mode they never cross a document
boundary either (each input line is its own document sharing one
frequency space).

Token strings are interned into dense integer ids through a
:class:`Vocabulary` so the counting kernels can work on flat int32
arrays.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

import numpy as np

from .errors import IngestionError

# Letters/digits/apostrophes form tokens; everything else separates them.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")
# Sentence-ending punctuation plus line breaks start a new segment.
_SEGMENT_RE = re.compile(r"[.!?;\n\r]")


class Vocabulary:
    """Bijective mapping between token strings and dense integer ids."""

    __slots__ = ("_ids", "_tokens")

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._tokens: list[str] = []

    def add(self, token: str) -> int:
        """Intern ``token`` and return its id (stable across repeats)."""
        tid = self._ids.get(token)
        if tid is None:
            tid = len(self._tokens)
            self._ids[token] = tid
            self._tokens.append(token)
        return tid

    def id_of(self, token: str) -> int | None:
        return self._ids.get(token)

    def token(self, tid: int) -> str:
        return self._tokens[tid]

    def tokens(self) -> list[str]:
        """All interned tokens, position == id."""
        return list(self._tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids


@dataclass
class TokenizedDoc:
    doc_id: int
    segments: list[list[int]]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.segments)


def tokenize(raw_text: str, vocab: Vocabulary, doc_id: int) -> TokenizedDoc:
    """Tokenize ``raw_text`` into segments of interned token ids.

    Empty segments are dropped; empty input yields a doc with zero
    segments.
    """
    segments: list[list[int]] = []
    add = vocab.add
    for chunk in _SEGMENT_RE.split(raw_text.casefold()):
        tokens = _TOKEN_RE.findall(chunk)
        if tokens:
            segments.append([add(t) for t in tokens])
    return TokenizedDoc(doc_id=doc_id, segments=segments)


def load_stopwords(lines: Iterable[str], vocab: Vocabulary) -> frozenset[int]:
    """Intern one stop word per line (blank lines ignored) into a set of ids."""
    ids = set()
    for line in lines:
        word = line.strip().casefold()
        if word:
            ids.add(vocab.add(word))
    return frozenset(ids)


def default_stopword_lines() -> list[str]:
    """The packaged English stop-word list (NLTK's list), one word per line."""
    data = resources.files("elske").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return data.splitlines()


@dataclass
class SourceCorpus:
    """Tokenized source text: the document (or collection) to mine.

    ``flat_tokens``/``segment_offsets`` expose every segment concatenated
    into one int32 array for the counting kernels; segment ``s`` spans
    ``flat_tokens[segment_offsets[s]:segment_offsets[s + 1]]`` and belongs
    to document ``segment_doc_ids[s]``.
    """

    docs: list[TokenizedDoc]
    vocab: Vocabulary
    stopwords: frozenset[int]
    total_token_count: int
    flat_tokens: np.ndarray = field(repr=False)
    segment_offsets: np.ndarray = field(repr=False)
    segment_doc_ids: np.ndarray = field(repr=False)

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    def stop_flags(self) -> np.ndarray:
        """Boolean array over token ids: True where the id is a stop word."""
        flags = np.zeros(len(self.vocab), dtype=bool)
        if self.stopwords:
            flags[np.fromiter(self.stopwords, dtype=np.int64)] = True
        return flags

    def phrase_text(self, phrase: Iterable[int]) -> str:
        return " ".join(self.vocab.token(t) for t in phrase)


def _build_corpus(docs: list[TokenizedDoc], vocab: Vocabulary,
                  stopwords: frozenset[int]) -> SourceCorpus:
    total = sum(d.token_count for d in docs)
    flat = np.empty(total, dtype=np.int32)
    offsets = [0]
    seg_docs = []
    pos = 0
    for doc in docs:
        for seg in doc.segments:
            flat[pos:pos + len(seg)] = seg
            pos += len(seg)
            offsets.append(pos)
            seg_docs.append(doc.doc_id)
    return SourceCorpus(
        docs=docs,
        vocab=vocab,
        stopwords=stopwords,
        total_token_count=total,
        flat_tokens=flat,
        segment_offsets=np.asarray(offsets, dtype=np.int64),
        segment_doc_ids=np.asarray(seg_docs, dtype=np.int64),
    )


def ingest_collection(lines: Iterable[str],
                      stopword_lines: Iterable[str] | None = None) -> SourceCorpus:
    """Build a corpus from a collection: one document per line.

    Documents share one vocabulary and one frequency space, but phrases
    never span two documents.  Lines that tokenize to nothing still count
    as (empty) documents; if every line is empty the ingestion fails.
    """
    vocab = Vocabulary()
    docs = [tokenize(line, vocab, doc_id=i) for i, line in enumerate(lines)]
    if not any(d.segments for d in docs):
        raise IngestionError("collection contains no tokenizable documents")
    stop_lines = default_stopword_lines() if stopword_lines is None else stopword_lines
    return _build_corpus(docs, vocab, load_stopwords(stop_lines, vocab))


def ingest_document(text: str,
                    stopword_lines: Iterable[str] | None = None) -> SourceCorpus:
    """Build a corpus from a single document (the whole text as one doc)."""
    vocab = Vocabulary()
    doc = tokenize(text, vocab, doc_id=0)
    if not doc.segments:
        raise IngestionError("document contains no tokenizable text")
    stop_lines = default_stopword_lines() if stopword_lines is None else stopword_lines
    return _build_corpus([doc], vocab, load_stopwords(stop_lines, vocab))
