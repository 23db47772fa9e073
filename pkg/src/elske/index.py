"""Bigram-based reference index answering phrase document frequencies.

The index stores, for a reference collection of N documents, sorted
posting lists of document ids per unigram and per bigram (bigrams within
segments only).  Document frequency queries work for phrases of any
length: unigrams and bigrams read their posting-list length directly;
longer phrases intersect the posting lists of their constituent bigrams
(shortest list first) and then verify true contiguous containment by
scanning each surviving document, because co-occurrence of all bigrams in
a document does not imply the phrase occurs contiguously.

The on-disk format (``persist_index``/``load_index``) is a versioned
little-endian binary with delta-encoded posting lists:

=========  ====================================================
section    contents
=========  ====================================================
magic      8 bytes ``ELSKEIDX``
version    u32 (currently 1)
crc        u32 zlib.crc32 of the payload
length     u64 payload byte length
payload    doc count u64; vocabulary table (u64 count, then
           u32 byte-length + UTF-8 bytes per token, id order);
           unigram section; bigram section; document section
=========  ====================================================

Posting sections hold: u64 entry count, key array (u32 token ids for
unigrams, u64 packed pairs for bigrams, ascending), u32 list lengths, and
one u32 array of per-list delta-encoded doc ids (first id absolute).  The
document section stores u64 offsets and the int32 token blob of every
document, segments separated by -1 sentinels, used by the verification
scan.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexFormatError, IngestionError
from .kernels import count_docs_containing
from .text import SourceCorpus, Vocabulary

MAGIC = b"ELSKEIDX"
FORMAT_VERSION = 1


def pack_bigram(u: int, v: int) -> int:
    return (int(u) << 32) | int(v)


@dataclass
class _PostingTable:
    """Posting lists laid out as one blob plus per-key (start, length)."""

    keys: np.ndarray      # int64, ascending
    starts: np.ndarray    # int64 into blob
    lengths: np.ndarray   # int64
    blob: np.ndarray      # int32 doc ids, sorted within each list

    @classmethod
    def from_pairs(cls, keys: np.ndarray, docs: np.ndarray) -> "_PostingTable":
        """Group (key, doc) occurrence pairs into deduplicated posting lists."""
        if len(keys) == 0:
            empty64 = np.empty(0, dtype=np.int64)
            return cls(empty64, empty64.copy(), empty64.copy(), np.empty(0, dtype=np.int32))
        order = np.lexsort((docs, keys))
        k, d = keys[order], docs[order]
        fresh = np.empty(len(k), dtype=bool)
        fresh[0] = True
        fresh[1:] = (k[1:] != k[:-1]) | (d[1:] != d[:-1])
        k, d = k[fresh], d[fresh]
        uniq, counts = np.unique(k, return_counts=True)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        return cls(uniq.astype(np.int64), starts.astype(np.int64),
                   counts.astype(np.int64), d.astype(np.int32))

    def _slot(self, key: int) -> int:
        i = int(np.searchsorted(self.keys, key))
        if i < len(self.keys) and self.keys[i] == key:
            return i
        return -1

    def list_length(self, key: int) -> int:
        i = self._slot(key)
        return int(self.lengths[i]) if i >= 0 else 0

    def postings(self, key: int) -> np.ndarray:
        i = self._slot(key)
        if i < 0:
            return np.empty(0, dtype=np.int32)
        s = int(self.starts[i])
        return self.blob[s : s + int(self.lengths[i])]

    def list_lengths(self, keys: np.ndarray) -> np.ndarray:
        """Vectorized ``list_length``; unknown keys (including -1) give 0."""
        out = np.zeros(len(keys), dtype=np.int64)
        if len(self.keys) and len(keys):
            idx = np.searchsorted(self.keys, keys)
            idx[idx >= len(self.keys)] = 0
            hit = self.keys[idx] == keys
            out[hit] = self.lengths[idx[hit]]
        return out


@dataclass
class ReferenceIndex:
    n_docs: int
    vocab: Vocabulary
    unigrams: _PostingTable
    bigrams: _PostingTable
    doc_blob: np.ndarray      # int32; segments joined by -1 within each doc
    doc_offsets: np.ndarray   # int64, len n_docs + 1
    _doc_blob_bytes: bytes | None = field(default=None, repr=False)

    def _blob_bytes(self) -> bytes:
        if self._doc_blob_bytes is None:
            self._doc_blob_bytes = self.doc_blob.tobytes()
        return self._doc_blob_bytes

    def doc_frequency(self, phrase) -> int:
        """Exact number of reference docs containing ``phrase`` contiguously.

        Token ids are in this index's own vocabulary space (see
        ``id_map_from`` for translating another corpus's ids).
        """
        phrase = tuple(int(t) for t in phrase)
        if not phrase:
            raise ValueError("phrase must be non-empty")
        if len(phrase) == 1:
            return self.unigrams.list_length(phrase[0])
        if len(phrase) == 2:
            return self.bigrams.list_length(pack_bigram(*phrase))
        keys = {pack_bigram(u, v) for u, v in zip(phrase, phrase[1:])}
        lists = []
        for key in keys:
            postings = self.bigrams.postings(key)
            if len(postings) == 0:
                return 0
            lists.append(postings)
        lists.sort(key=len)
        candidates = lists[0]
        for other in lists[1:]:
            candidates = np.intersect1d(candidates, other, assume_unique=True)
            if len(candidates) == 0:
                return 0
        needle = np.asarray(phrase, dtype=np.int32)
        return count_docs_containing(self.doc_blob, self._blob_bytes(),
                                     self.doc_offsets, candidates.astype(np.int64), needle)

    def unigram_doc_freqs(self, token_ids: np.ndarray) -> np.ndarray:
        return self.unigrams.list_lengths(np.asarray(token_ids, dtype=np.int64))

    def bigram_doc_freqs(self, packed_keys: np.ndarray) -> np.ndarray:
        return self.bigrams.list_lengths(np.asarray(packed_keys, dtype=np.int64))

    def id_map_from(self, vocab: Vocabulary) -> np.ndarray:
        """Map another vocabulary's ids to this index's ids (-1 if absent)."""
        own = self.vocab
        return np.asarray(
            [-1 if (r := own.id_of(t)) is None else r for t in vocab.tokens()],
            dtype=np.int64,
        )


def build_index(corpus: SourceCorpus) -> ReferenceIndex:
    """Index a reference collection for document-frequency queries."""
    if corpus.n_docs == 0 or corpus.total_token_count == 0:
        raise IngestionError("cannot index an empty reference collection")

    tokens = corpus.flat_tokens
    seg_lengths = np.diff(corpus.segment_offsets)
    doc_of_token = np.repeat(corpus.segment_doc_ids, seg_lengths)

    unigrams = _PostingTable.from_pairs(tokens.astype(np.int64), doc_of_token)

    n = len(tokens)
    if n >= 2:
        crossing = np.zeros(n - 1, dtype=bool)
        inner = corpus.segment_offsets[1:-1]
        if len(inner):
            crossing[inner - 1] = True
        valid = ~crossing
        packed = (tokens[:-1].astype(np.int64) << 32) | tokens[1:]
        bigrams = _PostingTable.from_pairs(packed[valid], doc_of_token[:-1][valid])
    else:
        bigrams = _PostingTable.from_pairs(np.empty(0, dtype=np.int64),
                                           np.empty(0, dtype=np.int64))

    parts = []
    doc_offsets = np.empty(corpus.n_docs + 1, dtype=np.int64)
    pos = 0
    sentinel = np.array([-1], dtype=np.int32)
    for d, doc in enumerate(corpus.docs):
        doc_offsets[d] = pos
        for i, seg in enumerate(doc.segments):
            if i:
                parts.append(sentinel)
                pos += 1
            parts.append(np.asarray(seg, dtype=np.int32))
            pos += len(seg)
    doc_offsets[corpus.n_docs] = pos
    blob = np.concatenate(parts) if parts else np.empty(0, dtype=np.int32)

    return ReferenceIndex(
        n_docs=corpus.n_docs,
        vocab=corpus.vocab,
        unigrams=unigrams,
        bigrams=bigrams,
        doc_blob=blob,
        doc_offsets=doc_offsets,
    )


def _delta_encode(table: _PostingTable) -> np.ndarray:
    deltas = np.diff(table.blob.astype(np.int64), prepend=0)
    deltas[table.starts] = table.blob[table.starts] if len(table.blob) else 0
    return deltas.astype(np.uint32)


def _delta_decode(deltas: np.ndarray, starts: np.ndarray) -> np.ndarray:
    if len(deltas) == 0:
        return np.empty(0, dtype=np.int32)
    csum = np.cumsum(deltas.astype(np.int64))
    base = csum[starts] - deltas[starts]
    lengths = np.diff(np.concatenate((starts, [len(deltas)])))
    return (csum - np.repeat(base, lengths)).astype(np.int32)


def _encode_array(a: np.ndarray, dtype: str) -> bytes:
    data = np.ascontiguousarray(a.astype(dtype)).tobytes()
    return struct.pack("<Q", len(a)) + data


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise IndexFormatError("truncated index payload")
        out = self.buf[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def array(self, dtype: str) -> np.ndarray:
        count = self.u64()
        width = np.dtype(dtype).itemsize
        return np.frombuffer(self.take(count * width), dtype=dtype)


def persist_index(index: ReferenceIndex) -> bytes:
    """Serialize to the versioned binary format (see module docstring)."""
    sections = [struct.pack("<Q", index.n_docs)]
    tokens = index.vocab.tokens()
    sections.append(struct.pack("<Q", len(tokens)))
    for tok in tokens:
        raw = tok.encode("utf-8")
        sections.append(struct.pack("<I", len(raw)) + raw)
    for table, key_dtype in ((index.unigrams, "<u4"), (index.bigrams, "<u8")):
        sections.append(_encode_array(table.keys, key_dtype))
        sections.append(_encode_array(table.lengths, "<u4"))
        sections.append(_encode_array(_delta_encode(table), "<u4"))
    sections.append(_encode_array(index.doc_offsets, "<u8"))
    sections.append(_encode_array(index.doc_blob, "<i4"))
    payload = b"".join(sections)
    header = MAGIC + struct.pack("<IIQ", FORMAT_VERSION, zlib.crc32(payload), len(payload))
    return header + payload


def load_index(data: bytes) -> ReferenceIndex:
    """Inverse of ``persist_index``; raises ``IndexFormatError`` on bad input."""
    if len(data) < len(MAGIC) + 16:
        raise IndexFormatError("index data too short")
    if data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("bad magic header")
    version, crc, length = struct.unpack("<IIQ", data[len(MAGIC) : len(MAGIC) + 16])
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported index format version {version}")
    payload = data[len(MAGIC) + 16 :]
    if len(payload) != length:
        raise IndexFormatError("index payload length mismatch")
    if zlib.crc32(payload) != crc:
        raise IndexFormatError("index checksum failure")

    r = _Reader(payload)
    n_docs = r.u64()
    vocab = Vocabulary()
    for _ in range(r.u64()):
        vocab.add(r.take(r.u32()).decode("utf-8"))

    tables = []
    for _key_dtype in ("<u4", "<u8"):
        keys = r.array(_key_dtype).astype(np.int64)
        lengths = r.array("<u4").astype(np.int64)
        deltas = r.array("<u4")
        starts = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
        if len(deltas) != int(lengths.sum()):
            raise IndexFormatError("posting blob length mismatch")
        tables.append(_PostingTable(keys, starts, lengths, _delta_decode(deltas, starts)))

    doc_offsets = r.array("<u8").astype(np.int64)
    doc_blob = r.array("<i4").astype(np.int32)
    if len(doc_offsets) != n_docs + 1 or (len(doc_offsets) and doc_offsets[-1] != len(doc_blob)):
        raise IndexFormatError("document section mismatch")
    return ReferenceIndex(n_docs=n_docs, vocab=vocab, unigrams=tables[0],
                          bigrams=tables[1], doc_blob=doc_blob, doc_offsets=doc_offsets)


def save_index(index: ReferenceIndex, path) -> None:
    with open(path, "wb") as fh:
        fh.write(persist_index(index))


def read_index(path) -> ReferenceIndex:
    with open(path, "rb") as fh:
        return load_index(fh.read())
