"""Inverted index construction and ranked retrieval.

The index maps terms to (document ordinal, frequency) postings over the
stopword-filtered token streams. Retrieval scores only documents holding
at least one query term, under either Okapi-style probabilistic weighting
(the default) or a plain tf-idf model, and breaks score ties by ascending
document identifier so runs are fully reproducible.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass

from .errors import CollectionError, EmptyQueryError, InputError

INDEX_FORMAT_VERSION = 1


@dataclass
class RankingParams:
    """Retrieval-model configuration shared by both retrieval passes."""

    model: str = "bm25"  # "bm25" or "tfidf"
    k1: float = 1.2
    b: float = 0.75


@dataclass
class RankedList:
    """Ranked (docno, score) pairs for one topic, descending score."""

    topic: int
    entries: list


class InvertedIndex:
    """Immutable postings over a collection; build once, query from anywhere."""

    def __init__(self, postings, doc_lengths, docnos):
        self.postings = postings
        self.doc_lengths = doc_lengths
        self.docnos = docnos
        self._ordinals = {d: i for i, d in enumerate(docnos)}

    @property
    def doc_count(self) -> int:
        return len(self.docnos)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths) / len(self.doc_lengths)

    def ordinal(self, docno: str) -> int:
        return self._ordinals[docno]

    def __eq__(self, other):
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (
            self.postings == other.postings
            and self.doc_lengths == other.doc_lengths
            and self.docnos == other.docnos
        )

    def save(self, path):
        """Dump the index to a versioned JSON file (internal format)."""
        payload = {
            "version": INDEX_FORMAT_VERSION,
            "docnos": self.docnos,
            "doc_lengths": self.doc_lengths,
            "postings": {t: [list(p) for p in plist] for t, plist in self.postings.items()},
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("version") != INDEX_FORMAT_VERSION:
            raise InputError(
                f"unsupported index format version {payload.get('version')!r} in {path}"
            )
        postings = {
            t: [tuple(p) for p in plist] for t, plist in payload["postings"].items()
        }
        return cls(postings, payload["doc_lengths"], payload["docnos"])


def build_index(docs) -> InvertedIndex:
    """Index (docno, token stream) pairs; docnos must be unique."""
    postings = {}
    doc_lengths = []
    docnos = []
    seen = set()
    for docno, stream in docs:
        if docno in seen:
            raise CollectionError(f"duplicate docno {docno!r}")
        seen.add(docno)
        ordinal = len(docnos)
        docnos.append(docno)
        doc_lengths.append(len(stream))
        for term, freq in Counter(stream).items():
            postings.setdefault(term, []).append((ordinal, freq))
    return InvertedIndex(postings, doc_lengths, docnos)


def retrieve(index, query, depth: int, params=None, topic: int = 0) -> RankedList:
    """Score documents matching at least one query term; keep the top ranks.

    The query is a bag: repeated terms weigh proportionally more. Under
    "bm25" each matching term contributes the usual saturated-tf form with
    a non-negative document-frequency weight; under "tfidf" it contributes
    log-scaled term frequency times log10(N/df). Ties break by ascending
    docno and results are truncated to at most `depth` entries.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    params = params or RankingParams()
    query_freqs = Counter(query)
    if not query_freqs:
        raise EmptyQueryError("query has no terms")
    n_docs = index.doc_count
    avg_len = index.avg_doc_length
    scores = {}
    for term, q_weight in query_freqs.items():
        plist = index.postings.get(term)
        if not plist:
            continue
        df = len(plist)
        if params.model == "bm25":
            idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
            for ordinal, tf in plist:
                doc_len = index.doc_lengths[ordinal]
                denom = tf + params.k1 * (1.0 - params.b + params.b * doc_len / avg_len)
                scores[ordinal] = scores.get(ordinal, 0.0) + (
                    q_weight * idf * tf * (params.k1 + 1.0) / denom
                )
        elif params.model == "tfidf":
            idf = math.log10(n_docs / df)
            for ordinal, tf in plist:
                scores[ordinal] = scores.get(ordinal, 0.0) + (
                    q_weight * (1.0 + math.log10(tf)) * idf
                )
        else:
            raise ValueError(f"unknown ranking model {params.model!r}")
    ranked = sorted(
        ((index.docnos[ordinal], score) for ordinal, score in scores.items()),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return RankedList(topic=topic, entries=ranked[:depth])


def feedback_set(ranked: RankedList, n: int = 10):
    """Docnos of the first n entries, fewer when the list is short."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [docno for docno, _ in ranked.entries[:n]]
