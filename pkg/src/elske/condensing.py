"""Condensing: prune near-duplicate candidates into a final ranking.

Extraction leaves many variations of the same underlying phrase.  Three
rules thin them out, applied in order, each over the survivors of the
previous one:

1. drop candidates whose only non-stop token scores below the cutoff on
   its own (the stop words alone lifted them over the bar);
2. drop longer variants that add at most two words on either side of a
   surviving candidate unless every added side carries enough weight of
   its own (scores at least ``lam`` times the cutoff and is not purely
   stop words); variants extending by three or more words on a side are
   distinct enough to keep;
3. drop a candidate when a set of mutually exclusive longer phrases
   already accounts for most of its occurrences: subtracting their scores
   from its own lands below the cutoff.

Rule 3's cover set for a base phrase collects candidate phrases that
contain it, shortest first, keeping a new one only if it can never
overlap an occurrence covered by an already kept one: aligned on the
base, both extend the same direction with neither extension a
prefix/suffix of the other.  Rule 3 repeats until stable so the survivors
satisfy its condition against the final set.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .extraction import CandidateSet
from .scoring import ScoredCandidate

Phrase = tuple[int, ...]


@dataclass(frozen=True)
class CondenseParams:
    lam: float = 0.1        # overhang weight relative to the cutoff score
    max_overhang: int = 2


def _occurrences(haystack: Phrase, needle: Phrase) -> list[int]:
    n, m = len(haystack), len(needle)
    return [i for i in range(n - m + 1) if haystack[i : i + m] == needle]


def _contains(haystack: Phrase, needle: Phrase) -> bool:
    return bool(_occurrences(haystack, needle))


def remove_stopword_heavy(cands: list[ScoredCandidate], score_cutoff: float,
                          ctx) -> list[ScoredCandidate]:
    """Rule 1: drop phrases carried over the cutoff by their stop words."""
    out = []
    for c in cands:
        content = [t for t in c.phrase if not ctx.is_stop(t)]
        if len(content) == 1:
            s = ctx.unigram_score(content[0])
            if s is not None and s < score_cutoff:
                continue
        out.append(c)
    return out


def _side_strong(side: Phrase, bar: float, ctx) -> bool:
    if all(ctx.is_stop(t) for t in side):
        return False
    if len(side) == 1:
        s = ctx.unigram_score(side[0])
    else:
        s = ctx.bigram_score(side[0], side[1])
    return s is not None and s >= bar


def remove_redundant_longer(cands: list[ScoredCandidate], score_cutoff: float,
                            lam: float, ctx, max_overhang: int = 2,
                            ) -> list[ScoredCandidate]:
    """Rule 2: drop longer variants whose overhangs add too little.

    Candidates are visited in rank order so the strongest short phrases
    prune their variants first; a variant already removed cannot prune.
    """
    bar = lam * score_cutoff
    # For every candidate, the shorter windows it would be a variant of.
    variants: dict[Phrase, list[tuple[Phrase, int, int]]] = defaultdict(list)
    for c in cands:
        p, m = c.phrase, len(c.phrase)
        for left in range(0, max_overhang + 1):
            for right in range(0, max_overhang + 1):
                if left == right == 0 or m - left - right < 1:
                    continue
                variants[p[left : m - right]].append((p, left, right))

    alive = {c.phrase for c in cands}
    for c in cands:
        if c.phrase not in alive:
            continue
        for longer, left, right in variants.get(c.phrase, ()):
            if longer not in alive:
                continue
            head, tail = longer[:left], longer[len(longer) - right :]
            ok = (not head or _side_strong(head, bar, ctx)) and (
                not tail or _side_strong(tail, bar, ctx))
            if not ok:
                alive.discard(longer)
    return [c for c in cands if c.phrase in alive]


def _conflicting(a: Phrase, off_a: int, b: Phrase, off_b: int, base_len: int) -> bool:
    """Aligned on the base, can a and b never cover the same occurrence?"""
    left_a, left_b = a[:off_a], b[:off_b]
    if left_a and left_b:
        shorter, longer = sorted((left_a, left_b), key=len)
        if longer[len(longer) - len(shorter) :] != shorter:
            return True
    right_a = a[off_a + base_len :]
    right_b = b[off_b + base_len :]
    if right_a and right_b:
        shorter, longer = sorted((right_a, right_b), key=len)
        if longer[: len(shorter)] != shorter:
            return True
    return False


def _incompatible(a: Phrase, b: Phrase, base: Phrase) -> bool:
    """True when no alignment lets a and b share one occurrence of base."""
    for off_a in _occurrences(a, base):
        for off_b in _occurrences(b, base):
            if not _conflicting(a, off_a, b, off_b, len(base)):
                return False
    return True


def _cover_set(c: ScoredCandidate, alive: dict[Phrase, ScoredCandidate],
               ) -> list[ScoredCandidate]:
    """Shortest, pairwise incompatible candidate phrases containing c."""
    base = c.phrase
    longer = [x for x in alive.values()
              if len(x.phrase) > len(base) and _contains(x.phrase, base)]
    longer.sort(key=lambda x: (len(x.phrase),) + x.rank_key())
    cover: list[ScoredCandidate] = []
    for cand in longer:
        if any(_contains(cand.phrase, m.phrase) for m in cover):
            continue
        if all(_incompatible(cand.phrase, m.phrase, base) for m in cover):
            cover.append(cand)
    return cover


def remove_redundant_shorter(cands: list[ScoredCandidate], score_cutoff: float,
                             ) -> list[ScoredCandidate]:
    """Rule 3: drop phrases whose longer variants explain their score."""
    alive = {c.phrase: c for c in cands}
    changed = True
    while changed:
        changed = False
        for c in list(alive.values()):
            if c.phrase not in alive:
                continue
            cover = _cover_set(c, alive)
            if cover and c.score - sum(m.score for m in cover) < score_cutoff:
                del alive[c.phrase]
                changed = True
    return [c for c in cands if c.phrase in alive]


def condense(cset: CandidateSet, params: CondenseParams | None = None,
             k: int | None = None) -> list[ScoredCandidate]:
    """Apply the three rules in order and return up to k ranked phrases."""
    params = params or CondenseParams()
    k = cset.k if k is None else k
    if cset.context is None:
        raise ValueError("candidate set lacks extraction context")
    out = remove_stopword_heavy(cset.candidates, cset.score_cutoff, cset.context)
    out = remove_redundant_longer(out, cset.score_cutoff, params.lam,
                                  cset.context, params.max_overhang)
    out = remove_redundant_shorter(out, cset.score_cutoff)
    out.sort(key=ScoredCandidate.rank_key)
    return out[:k]
