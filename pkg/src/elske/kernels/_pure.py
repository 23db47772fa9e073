"""Pure NumPy counting kernels (fallback backend).

Same contracts as the compiled backend; see the package docstring for the
phrase-key convention.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _pack(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Pack two int32 token arrays into one int64 bigram key per position."""
    return (left.astype(np.int64) << 32) | right.astype(np.int64)


class NgramKernel:
    """Per-corpus counting state over a flat token array.

    ``tokens`` is every segment concatenated; segment ``s`` spans
    ``tokens[seg_offsets[s]:seg_offsets[s + 1]]``.  Counting never crosses
    a segment boundary; overlapping occurrences count at every position.
    """

    def __init__(self, tokens: np.ndarray, seg_offsets: np.ndarray, vocab_size: int):
        self.tokens = np.ascontiguousarray(tokens, dtype=np.int32)
        self.seg_offsets = np.asarray(seg_offsets, dtype=np.int64)
        self.vocab_size = vocab_size
        self._token_bytes = self.tokens.tobytes()

        n = len(self.tokens)
        self.unigram_counts = np.bincount(self.tokens, minlength=vocab_size).astype(np.int64)
        self.f_max = int(self.unigram_counts.max()) if n else 0

        # Bigram positions p cover (tokens[p], tokens[p+1]); positions whose
        # second token starts a new segment are crossings and never counted.
        n_pos = max(n - 1, 0)
        crossing = np.zeros(n_pos, dtype=bool)
        inner = self.seg_offsets[1:-1]
        if n_pos and len(inner):
            crossing[inner - 1] = True
        self._valid_pos = ~crossing
        if n_pos:
            packed = _pack(self.tokens[:-1], self.tokens[1:])
            self._packed_pos = packed
            keys, counts = np.unique(packed[self._valid_pos], return_counts=True)
        else:
            self._packed_pos = np.empty(0, dtype=np.int64)
            keys = np.empty(0, dtype=np.int64)
            counts = np.empty(0, dtype=np.int64)
        self.bigram_keys = keys
        self.bigram_counts = counts.astype(np.int64)

    def bigram_count(self, u: int, v: int) -> int:
        key = (int(u) << 32) | int(v)
        i = np.searchsorted(self.bigram_keys, key)
        if i < len(self.bigram_keys) and self.bigram_keys[i] == key:
            return int(self.bigram_counts[i])
        return 0

    def _position_freqs(self) -> np.ndarray:
        """Bigram frequency at each position (0 at segment crossings)."""
        freqs = np.zeros(len(self._packed_pos), dtype=np.int64)
        if len(self._packed_pos) and len(self.bigram_keys):
            idx = np.searchsorted(self.bigram_keys, self._packed_pos)
            idx[idx >= len(self.bigram_keys)] = 0
            hit = self.bigram_keys[idx] == self._packed_pos
            freqs[hit] = self.bigram_counts[idx[hit]]
            freqs[~self._valid_pos] = 0
        return freqs

    def grow_phrases(self, min_count: int, max_len: int) -> dict[bytes, int]:
        """Count phrases of length >= 3 by window growth with bigram pruning.

        A window starting at ``i`` extends to ``j`` only while every
        trailing bigram ``(tokens[j-1], tokens[j])`` occurs at least
        ``min_count`` times; the bound is sound because a phrase can never
        outnumber its constituent bigrams.  Phrases whose final tally is
        below ``min_count`` are dropped from the result.
        """
        n = len(self.tokens)
        if n < 3:
            return {}
        n_pos = n - 1
        ok = self._valid_pos & (self._position_freqs() >= min_count)

        # next_stop[p]: first position >= p where growth must stop.
        next_stop = np.full(n_pos, n_pos, dtype=np.int64)
        bad = np.flatnonzero(~ok)
        next_stop[bad] = bad
        next_stop = np.minimum.accumulate(next_stop[::-1])[::-1]

        counts: dict[bytes, int] = {}
        blob = self._token_bytes
        # Window [i..j] needs positions i..j-1 all ok (an infrequent first
        # bigram caps the phrase below the count filter, so such starts
        # are skipped outright), hence j may reach next_stop[i+1].
        starts = np.flatnonzero(ok[: n - 2])
        limits = np.minimum(next_stop[starts + 1], starts + (max_len - 1))
        keep = limits >= starts + 2
        for i, limit in zip(starts[keep].tolist(), limits[keep].tolist()):
            base = 4 * i
            for j in range(i + 2, limit + 1):
                key = blob[base : 4 * (j + 1)]
                counts[key] = counts.get(key, 0) + 1
        if min_count > 1:
            counts = {k: c for k, c in counts.items() if c >= min_count}
        return counts

    def enumerate_ngrams(self, max_n: int, min_count_long: int = 1) -> dict[bytes, int]:
        """Count every n-gram (n <= max_n) inside segments, at every position.

        Entries of length >= 3 with a count below ``min_count_long`` are
        omitted from the result (they are still counted).
        """
        n = len(self.tokens)
        result: dict[bytes, int] = {}
        if n == 0:
            return result
        seg_lengths = np.diff(self.seg_offsets)
        seg_ids = np.repeat(np.arange(len(seg_lengths)), seg_lengths)
        for size in range(1, max_n + 1):
            if size > n:
                break
            windows = sliding_window_view(self.tokens, size)
            inside = seg_ids[: n - size + 1] == seg_ids[size - 1 :]
            if not inside.any():
                continue
            rows = np.ascontiguousarray(windows[inside])
            flat = rows.view(np.dtype((np.void, 4 * size))).ravel()
            uniq, counts = np.unique(flat, return_counts=True)
            if size >= 3 and min_count_long > 1:
                keep = counts >= min_count_long
                uniq, counts = uniq[keep], counts[keep]
            for key, c in zip(uniq, counts.tolist()):
                result[bytes(key)] = c
        return result


def count_docs_containing(blob: np.ndarray, blob_bytes: bytes, doc_offsets: np.ndarray,
                          doc_ids: np.ndarray, phrase: np.ndarray) -> int:
    """How many of the given docs contain ``phrase`` contiguously.

    ``blob`` stores each doc's segments joined by -1 sentinels, so a byte
    match can never straddle a segment or document boundary; matches are
    accepted only at int32-aligned offsets.
    """
    needle = np.ascontiguousarray(phrase, dtype=np.int32).tobytes()
    found = 0
    for d in doc_ids.tolist():
        start = 4 * int(doc_offsets[d])
        end = 4 * int(doc_offsets[d + 1])
        pos = blob_bytes.find(needle, start, end)
        while pos != -1 and pos % 4 != 0:
            pos = blob_bytes.find(needle, pos + 1, end)
        if pos != -1:
            found += 1
    return found
