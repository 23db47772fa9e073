# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels. Same contracts as elske.kernels._pure."""

from cython.operator cimport dereference as deref, preincrement as inc
from libc.stdint cimport int32_t, int64_t
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map

import numpy as np


cdef class NgramKernel:
    cdef object _tokens_arr
    cdef object _offsets_arr
    cdef const int32_t[::1] _tokens
    cdef const int64_t[::1] _offsets
    cdef unordered_map[int64_t, int64_t] _bigram_map
    cdef public object unigram_counts
    cdef public long long f_max
    cdef public object bigram_keys
    cdef public object bigram_counts
    cdef public long long vocab_size

    def __init__(self, tokens, seg_offsets, vocab_size):
        self._tokens_arr = np.ascontiguousarray(tokens, dtype=np.int32)
        self._offsets_arr = np.ascontiguousarray(seg_offsets, dtype=np.int64)
        self._tokens = self._tokens_arr
        self._offsets = self._offsets_arr
        self.vocab_size = vocab_size
        self._count()

    cdef void _count(self):
        cdef Py_ssize_t n_segs = self._offsets.shape[0] - 1
        cdef Py_ssize_t s, i
        cdef int64_t a, b, key
        uni = np.zeros(self.vocab_size, dtype=np.int64)
        cdef int64_t[::1] uni_v = uni
        self._bigram_map.reserve(self._tokens.shape[0])
        for s in range(n_segs):
            a = self._offsets[s]
            b = self._offsets[s + 1]
            for i in range(a, b):
                uni_v[self._tokens[i]] += 1
            for i in range(a, b - 1):
                key = ((<int64_t> self._tokens[i]) << 32) | <int64_t> self._tokens[i + 1]
                self._bigram_map[key] += 1
        self.unigram_counts = uni
        self.f_max = int(uni.max()) if self.vocab_size and self._tokens.shape[0] else 0

        keys = np.empty(self._bigram_map.size(), dtype=np.int64)
        counts = np.empty(self._bigram_map.size(), dtype=np.int64)
        cdef int64_t[::1] keys_v = keys
        cdef int64_t[::1] counts_v = counts
        cdef Py_ssize_t pos = 0
        cdef unordered_map[int64_t, int64_t].iterator it = self._bigram_map.begin()
        while it != self._bigram_map.end():
            keys_v[pos] = deref(it).first
            counts_v[pos] = deref(it).second
            pos += 1
            inc(it)
        order = np.argsort(keys)
        self.bigram_keys = np.ascontiguousarray(keys[order])
        self.bigram_counts = np.ascontiguousarray(counts[order])

    def bigram_count(self, u, v):
        cdef int64_t key = ((<int64_t> u) << 32) | <int64_t> v
        cdef unordered_map[int64_t, int64_t].iterator it = self._bigram_map.find(key)
        if it == self._bigram_map.end():
            return 0
        return deref(it).second

    def grow_phrases(self, min_count, max_len):
        cdef int64_t threshold = min_count
        cdef int64_t cap = max_len
        cdef unordered_map[string, int64_t] phrases
        cdef unordered_map[int64_t, int64_t].iterator bit
        cdef Py_ssize_t n_segs = self._offsets.shape[0] - 1
        cdef Py_ssize_t s
        cdef int64_t a, b, i, j, limit, key, freq
        for s in range(n_segs):
            a = self._offsets[s]
            b = self._offsets[s + 1]
            for i in range(a, b - 2):
                # A phrase can never outnumber its first bigram either, so
                # infrequent starts cannot yield phrases that survive the
                # final count filter; skipping them changes nothing kept.
                key = ((<int64_t> self._tokens[i]) << 32) | <int64_t> self._tokens[i + 1]
                bit = self._bigram_map.find(key)
                freq = deref(bit).second if bit != self._bigram_map.end() else 0
                if freq < threshold:
                    continue
                limit = b - 1
                if i + cap - 1 < limit:
                    limit = i + cap - 1
                for j in range(i + 2, limit + 1):
                    key = ((<int64_t> self._tokens[j - 1]) << 32) | <int64_t> self._tokens[j]
                    bit = self._bigram_map.find(key)
                    freq = deref(bit).second if bit != self._bigram_map.end() else 0
                    if freq < threshold:
                        break
                    phrases[string(<const char*> &self._tokens[i],
                                   (j - i + 1) * sizeof(int32_t))] += 1
        out = {}
        cdef unordered_map[string, int64_t].iterator pit = phrases.begin()
        while pit != phrases.end():
            if deref(pit).second >= threshold:
                out[deref(pit).first] = deref(pit).second
            inc(pit)
        return out

    def enumerate_ngrams(self, max_n, min_count_long=1):
        cdef int64_t cap = max_n
        cdef int64_t floor_long = min_count_long
        cdef unordered_map[string, int64_t] grams
        cdef Py_ssize_t n_segs = self._offsets.shape[0] - 1
        cdef Py_ssize_t s
        cdef int64_t a, b, i, j, jmax, windows
        # Pre-size for the window count to avoid growth rehashes.
        windows = 0
        for s in range(n_segs):
            a = self._offsets[s]
            b = self._offsets[s + 1]
            jmax = b - a if b - a < cap else cap
            windows += (b - a) * jmax - (jmax * (jmax - 1)) // 2
        grams.reserve(windows)
        for s in range(n_segs):
            a = self._offsets[s]
            b = self._offsets[s + 1]
            for i in range(a, b):
                jmax = i + cap
                if jmax > b:
                    jmax = b
                for j in range(i + 1, jmax + 1):
                    grams[string(<const char*> &self._tokens[i],
                                 (j - i) * sizeof(int32_t))] += 1
        out = {}
        cdef unordered_map[string, int64_t].iterator git = grams.begin()
        while git != grams.end():
            if deref(git).first.size() >= 12 and deref(git).second < floor_long:
                inc(git)
                continue
            out[deref(git).first] = deref(git).second
            inc(git)
        return out


def count_docs_containing(blob, blob_bytes, doc_offsets, doc_ids, phrase):
    cdef const int32_t[::1] blob_v = np.ascontiguousarray(blob, dtype=np.int32)
    cdef const int64_t[::1] offs = np.ascontiguousarray(doc_offsets, dtype=np.int64)
    cdef const int64_t[::1] ids = np.ascontiguousarray(doc_ids, dtype=np.int64)
    cdef const int32_t[::1] needle = np.ascontiguousarray(phrase, dtype=np.int32)
    cdef Py_ssize_t m = needle.shape[0]
    cdef Py_ssize_t n_ids = ids.shape[0]
    cdef Py_ssize_t q, t
    cdef int64_t d, start, end, pos
    cdef bint match
    cdef int64_t found = 0
    for q in range(n_ids):
        d = ids[q]
        start = offs[d]
        end = offs[d + 1]
        for pos in range(start, end - m + 1):
            match = True
            for t in range(m):
                if blob_v[pos + t] != needle[t]:
                    match = False
                    break
            if match:
                found += 1
                break
    return found
