"""Partition-level tf-idf scoring and candidate-term selection.

Each partition of a feedback document is treated as if it were a document
of its own: term frequency is scaled by the partition's modal frequency,
and the idf denominator counts partitions rather than collection
documents. A term's document-level score is its best partition score.
"""

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import UndefinedIdfError


@dataclass(frozen=True)
class CandidateTerm:
    """A scored expansion candidate and the feedback document it came from."""

    term: str
    score: float
    source_doc: str


@dataclass
class CandidateList:
    """Per-topic expansion candidates, highest score first."""

    topic: int
    entries: list


def tf_norm(term: str, partition) -> float:
    """Term frequency scaled by the partition's modal frequency, in [0, 1]."""
    if not partition.term_freqs:
        raise ValueError("cannot score an empty partition")
    peak = max(partition.term_freqs.values())
    return partition.term_freqs.get(term, 0) / peak


def idf_partition(term: str, partitions) -> float:
    """log10 of the partition count over the count of partitions holding the term."""
    containing = sum(1 for p in partitions if term in p.term_freqs)
    if containing == 0:
        raise UndefinedIdfError(f"term {term!r} appears in no partition")
    return math.log10(len(partitions) / containing)


def score_partitions(partitions) -> dict:
    """Best partition-level tf-idf for every term of the document.

    The maximum over partitions represents each term by its strongest
    region; summing or averaging would instead reward terms smeared
    across the document. Query terms are scored like any other term.
    """
    if not partitions:
        raise ValueError("cannot score an empty partition sequence")
    total = len(partitions)
    containing = Counter()
    for part in partitions:
        containing.update(part.term_freqs.keys())
    best = {}
    for part in partitions:
        peak = max(part.term_freqs.values())
        for term, freq in part.term_freqs.items():
            score = (freq / peak) * math.log10(total / containing[term])
            if term not in best or score > best[term]:
                best[term] = score
    return best


def top_n_terms(scores: dict, n: int = 5, source_doc: str = ""):
    """The n top-scoring terms, ties broken by ascending term."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return [CandidateTerm(term, score, source_doc) for term, score in ranked[:n]]


def merge_candidates(per_doc, topic: int) -> CandidateList:
    """Merge per-document candidates into one sorted, deduplicated list.

    A term contributed by several documents keeps its maximum score (and
    that score's source document); the result is ordered by descending
    score, then ascending term.
    """
    best = {}
    for candidates in per_doc:
        for cand in candidates:
            held = best.get(cand.term)
            if held is None or cand.score > held.score:
                best[cand.term] = cand
    entries = sorted(best.values(), key=lambda c: (-c.score, c.term))
    return CandidateList(topic=topic, entries=entries)


def write_keywords(candidate_lists, sink):
    """Write candidates as "topic<TAB>term<TAB>score" lines, 4-decimal scores."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_keywords(candidate_lists, fh)
        return
    for clist in candidate_lists:
        for cand in clist.entries:
            sink.write(f"{clist.topic}\t{cand.term}\t{cand.score:.4f}\n")
