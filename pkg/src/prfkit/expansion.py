"""Tied-score term groups and the three group-selection methods.

The sorted candidate list decomposes into maximal runs of equal score;
those runs are the unit of selection. "highest" takes the top run,
"average" the run nearest the candidate-weighted mean score, and
"keyword" the run holding the most original query terms.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

SCORE_REL_TOL = 1e-9

METHOD_HIGHEST = "highest"
METHOD_AVERAGE = "average"
METHOD_KEYWORD = "keyword"
METHOD_NONE = "none"
METHODS = (METHOD_HIGHEST, METHOD_AVERAGE, METHOD_KEYWORD)


@dataclass
class TermGroup:
    """A maximal run of candidate terms sharing one score."""

    score: float
    terms: list
    keyword_count: int = 0


@dataclass
class ExpandedQuery:
    """A topic's query after (possible) expansion by one method."""

    topic: int
    original_terms: list
    expansion_terms: list = field(default_factory=list)
    method: str = METHOD_NONE


def form_groups(candidates, query_terms=frozenset()):
    """Group the sorted candidate list into runs of (near-)equal score.

    Scores within a relative tolerance of 1e-9 of the run's first member
    count as equal; true ties are exact in practice and the tolerance only
    absorbs accumulation noise. Every candidate lands in exactly one group.
    """
    groups = []
    for cand in candidates.entries:
        if groups and math.isclose(cand.score, groups[-1].score, rel_tol=SCORE_REL_TOL):
            group = groups[-1]
            group.terms.append(cand.term)
            group.keyword_count += cand.term in query_terms
        else:
            groups.append(
                TermGroup(
                    score=cand.score,
                    terms=[cand.term],
                    keyword_count=int(cand.term in query_terms),
                )
            )
    return groups


def select_highest(groups):
    """The top-scoring group, or None when there are no candidates."""
    return groups[0] if groups else None


def select_average(groups):
    """The group whose score sits nearest the mean candidate score.

    The mean weights every candidate term, not every group, so large
    mid-list runs pull it toward themselves. Equidistant groups resolve
    to the higher score.
    """
    if not groups:
        return None
    total_terms = sum(len(g.terms) for g in groups)
    mean = sum(g.score * len(g.terms) for g in groups) / total_terms
    return min(groups, key=lambda g: (abs(g.score - mean), -g.score))


def select_keyword(groups, query_terms):
    """The group holding the most original query terms.

    Ties on the keyword count, including the common one-keyword-per-group
    case, go to the higher-scoring group. When no group contains a query
    term there is nothing to select and the query stays unexpanded.
    """
    best = None
    best_key = None
    for group in groups:
        count = sum(1 for t in group.terms if t in query_terms)
        if count < 1:
            continue
        key = (count, group.score)
        if best is None or key > best_key:
            best, best_key = group, key
    return best


def reformulate(topic, group, query_terms, method: str) -> ExpandedQuery:
    """Expanded form of a topic: its original terms plus the group's new ones.

    Terms already present in the query are dropped from the expansion,
    order otherwise preserved. A missing group, or a group containing
    nothing new, leaves the query untouched with no method recorded.
    """
    original = list(query_terms)
    if group is None:
        return ExpandedQuery(topic.number, original)
    present = set(original)
    extras = [t for t in group.terms if t not in present]
    if not extras:
        return ExpandedQuery(topic.number, original)
    return ExpandedQuery(topic.number, original, extras, method)


def write_expanded_topics(queries, sink):
    """Write expanded topics in the input topic format, one <top> per query.

    The title carries the original terms followed by the expansion terms,
    space-separated, so the file feeds straight back into the topic parser.
    """
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_expanded_topics(queries, fh)
        return
    for query in queries:
        title = " ".join(list(query.original_terms) + list(query.expansion_terms))
        sink.write(f"<top>\n<num>{query.topic}</num>\n<title>{title}</title>\n</top>\n")
