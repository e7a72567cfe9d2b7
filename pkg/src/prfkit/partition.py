"""Equi-width and equi-frequency partitioning of feedback documents.

A feedback document is first cut into deciles to measure how its query
terms are spread; that spread fixes the bin size k, and the document is
then re-cut into spans holding exactly k query-term occurrences each.
All positions refer to the stopword-filtered token stream.
"""

from collections import Counter
from dataclasses import dataclass

from .errors import DegenerateDocumentError, NoKeywordError

DECILE_BINS = 10


@dataclass
class Partition:
    """A contiguous token span of one document, inclusive of both ends."""

    doc: str
    start: int
    end: int
    term_freqs: Counter
    keyword_count: int

    def __len__(self):
        return self.end - self.start + 1


@dataclass
class DecileProfile:
    """Equi-width view of a document and the keyword mass per bin."""

    bins: list
    kw_freqs: list
    f_scoremax: int
    total_kw_freq: int


def _make_partition(stream, query_terms, doc, start, end):
    freqs = Counter(stream[i] for i in range(start, end + 1))
    kw = sum(count for term, count in freqs.items() if term in query_terms)
    return Partition(doc=doc, start=start, end=end, term_freqs=freqs, keyword_count=kw)


def peak_bin_keyword_freq(kw_freqs) -> int:
    """Largest per-bin total of query-term occurrences.

    This is the definition of the peak frequency that the bin-size
    derivation divides by. It lives behind its own function so that an
    alternative definition (for example, the highest total frequency of a
    single query term over the whole document) can be substituted and
    compared without touching the decile computation.
    """
    return max(kw_freqs)


def equiwidth_deciles(stream, query_terms, doc: str = "") -> DecileProfile:
    """Cut the stream into up to 10 near-equal bins and count keywords.

    Bin sizes differ by at most one token, with remainder tokens going to
    the earliest bins. Streams shorter than 10 tokens get one single-token
    bin per token.
    """
    n = len(stream)
    if n == 0:
        raise DegenerateDocumentError(f"document {doc!r} has no tokens")
    bins = min(DECILE_BINS, n)
    base, extra = divmod(n, bins)
    partitions = []
    kw_freqs = []
    start = 0
    for i in range(bins):
        size = base + (1 if i < extra else 0)
        end = start + size - 1
        part = _make_partition(stream, query_terms, doc, start, end)
        partitions.append(part)
        kw_freqs.append(part.keyword_count)
        start = end + 1
    return DecileProfile(
        bins=partitions,
        kw_freqs=kw_freqs,
        f_scoremax=peak_bin_keyword_freq(kw_freqs),
        total_kw_freq=sum(kw_freqs),
    )


def derive_k(total_kw_freq: int, f_scoremax: int) -> int:
    """Equi-frequency bin size: total keyword mass over its per-bin peak.

    The quotient rounds half up and never drops below 1; a document with
    no query-term occurrence has no defined bin size.
    """
    if f_scoremax < 1:
        raise NoKeywordError("document contains no query-term occurrence")
    # round_half_up(a / b) for positive integers, without float arithmetic
    k = (2 * total_kw_freq + f_scoremax) // (2 * f_scoremax)
    return max(1, k)


def equifrequency_partition(stream, query_terms, k: int, doc: str = ""):
    """Split the stream into spans of exactly k query-term occurrences.

    Scanning left to right, a span closes at the position of its k-th
    occurrence and the next span starts on the following token. A trailing
    span with at least one but fewer than k occurrences stays as a short
    final partition; a trailing span with none is folded into the previous
    partition, so the spans always cover the stream without gaps.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(stream)
    if n == 0:
        raise DegenerateDocumentError(f"document {doc!r} has no tokens")
    spans = []
    start = 0
    count = 0
    total = 0
    for pos, token in enumerate(stream):
        if token in query_terms:
            count += 1
            total += 1
            if count == k:
                spans.append((start, pos))
                start = pos + 1
                count = 0
    if total == 0:
        raise NoKeywordError(f"document {doc!r} contains no query-term occurrence")
    if start <= n - 1:
        if count > 0 or not spans:
            spans.append((start, n - 1))
        else:
            spans[-1] = (spans[-1][0], n - 1)
    return [_make_partition(stream, query_terms, doc, s, e) for s, e in spans]


def partition_document(stream, query_terms, doc: str = ""):
    """Full partitioning path for one document: deciles, k, then spans."""
    profile = equiwidth_deciles(stream, query_terms, doc)
    k = derive_k(profile.total_kw_freq, profile.f_scoremax)
    return equifrequency_partition(stream, query_terms, k, doc)
