"""PF-IDF scoring with sublinear frequency scaling.

A phrase is scored ``f_s ** (1/mu) * ln(N / f_d)`` where ``f_s`` is its
source frequency, ``f_d`` its reference document frequency (clamped to at
least 1, so phrases absent from the reference get the maximal IDF) and
``N`` the reference document count.  The exponent ``mu`` maps the
source's maximum term frequency down to a pivot (default 500) so that the
frequency and IDF components stay on comparable scales no matter how
large the source is; sources whose maximum frequency is at or below the
pivot keep ``mu = 1``, which for single terms reduces the score to plain
TF-IDF.  Frequency-1 phrases score the same under any ``mu``.

Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_PIVOT = 500


def scaling_exponent(f_max: int, pivot: int = DEFAULT_PIVOT) -> float:
    """Exponent mapping ``f_max`` down to ``pivot``: log base pivot of f_max.

    Returns 1.0 whenever ``f_max <= pivot`` so small sources are scored
    linearly.  Requires ``f_max >= 1`` and ``pivot >= 2``.
    """
    if f_max <= pivot:
        return 1.0
    return math.log(f_max) / math.log(pivot)


@dataclass(frozen=True)
class ScoringParams:
    """Frozen per-extraction scoring inputs.

    ``pivot == 0`` is the "scaling disabled" sentinel: ``mu`` stays 1
    regardless of ``f_max``, turning PF-IDF into plain phrase-frequency
    TF-IDF.
    """

    n_docs: int
    mu: float
    pivot: int = DEFAULT_PIVOT
    f_max: int = 1

    @classmethod
    def for_source(cls, f_max: int, n_docs: int, pivot: int = DEFAULT_PIVOT) -> "ScoringParams":
        f_max = max(1, f_max)
        mu = 1.0 if pivot == 0 else scaling_exponent(f_max, pivot)
        return cls(n_docs=n_docs, mu=mu, pivot=pivot, f_max=f_max)


def pf_idf(f_s: int, f_d: int, params: ScoringParams) -> float:
    """Score a single phrase; ``f_d`` below 1 is clamped to 1."""
    return f_s ** (1.0 / params.mu) * math.log(params.n_docs / max(1, f_d))


def pf_idf_many(f_s: np.ndarray, f_d: np.ndarray, params: ScoringParams) -> np.ndarray:
    """Vectorized scorer; the scorer of record for whole candidate sets.

    Every score that is compared against another score (candidate
    rankings, the cutoff at rank k, threshold checks) must come from this
    function so that equal (f_s, f_d) pairs yield bit-identical floats.
    """
    f_d = np.maximum(np.asarray(f_d, dtype=np.float64), 1.0)
    f_s = np.asarray(f_s, dtype=np.float64)
    return np.power(f_s, 1.0 / params.mu) * np.log(params.n_docs / f_d)


def _score_at_freq(freq: int, params: ScoringParams) -> float:
    """Best possible score for a phrase of the given source frequency."""
    return float(pf_idf_many(np.array([freq]), np.array([1]), params)[0])


def frequency_threshold(score_cutoff: float, params: ScoringParams) -> int:
    """Minimum source frequency any phrase scoring >= ``score_cutoff`` can have.

    This inverts the best case of the score (document frequency 1, hence
    IDF ``ln N``): the smallest integer frequency whose best-case score
    still reaches the cutoff.  Starting from the closed form
    ``ceil((cutoff / ln N) ** mu)`` the result is nudged so the guarantee
    holds in float arithmetic exactly as the vectorized scorer computes it.
    """
    if score_cutoff <= 0.0 or params.n_docs < 2:
        return 1
    log_n = math.log(params.n_docs)
    guess = math.ceil((score_cutoff / log_n) ** params.mu)
    guess = max(1, guess)
    while guess > 1 and _score_at_freq(guess - 1, params) >= score_cutoff:
        guess -= 1
    while _score_at_freq(guess, params) < score_cutoff:
        guess += 1
    return guess


@dataclass(frozen=True)
class ScoredCandidate:
    """A phrase with its source frequency, document frequency and score."""

    phrase: tuple[int, ...]
    f_s: int
    f_d: int
    score: float

    def rank_key(self):
        return rank_key(self.score, self.f_s, self.phrase)


def rank_key(score: float, f_s: int, phrase: tuple[int, ...]):
    """Deterministic total order: score desc, f_s desc, shorter first, token ids."""
    return (-score, -f_s, len(phrase), phrase)
