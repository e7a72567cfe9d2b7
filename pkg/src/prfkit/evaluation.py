"""Average-precision evaluation and cross-run comparison.

Grades above zero count as relevant; unjudged documents count as
non-relevant. Topics with no relevant document in the qrels are skipped
with a warning rather than scored as zero, so mean AP is always a mean
over evaluated topics.
"""

import logging
import math
from dataclasses import dataclass

from .errors import EvaluationError

log = logging.getLogger(__name__)


@dataclass
class TopicEval:
    """Retrieval effectiveness of one run on one topic."""

    topic: int
    ap: float
    retrieved: int
    relevant: int
    relevant_retrieved: int


@dataclass
class RunReport:
    """Per-topic evaluations plus their exact sums and mean AP."""

    per_topic: list
    mean_ap: float
    retrieved: int
    relevant: int
    relevant_retrieved: int

    @property
    def num_topics(self) -> int:
        return len(self.per_topic)

    def topic_ap(self) -> dict:
        return {t.topic: t.ap for t in self.per_topic}


@dataclass
class MethodDelta:
    """Per-topic AP movement of one variant run against the baseline."""

    method: str
    rows: list  # (topic, ap_before, ap_after, delta)
    improved: int
    improved_pct: float
    map_before: float
    map_after: float
    map_delta: float
    map_rel_change_pct: float


def average_precision(entries, qrels, topic: int) -> TopicEval:
    """AP of one topic's ranked entries against graded judgments."""
    relevant = qrels.relevant_docs(topic)
    if not relevant:
        raise EvaluationError(f"topic {topic} has no relevant documents")
    ordered = sorted((e for e in entries if e.topic == topic), key=lambda e: e.rank)
    hits = 0
    precision_sum = 0.0
    for entry in ordered:
        if entry.docno in relevant:
            hits += 1
            precision_sum += hits / entry.rank
    return TopicEval(
        topic=topic,
        ap=precision_sum / len(relevant),
        retrieved=len(ordered),
        relevant=len(relevant),
        relevant_retrieved=hits,
    )


def evaluate_run(entries, qrels) -> RunReport:
    """Per-topic AP and summed counts for every evaluable topic in a run.

    Runs need not be full depth for every topic; whatever rows a topic has
    are evaluated as ranked.
    """
    by_topic = {}
    for entry in entries:
        by_topic.setdefault(entry.topic, []).append(entry)
    per_topic = []
    for topic in sorted(by_topic):
        if not qrels.relevant_docs(topic):
            log.warning("topic %d has no relevant documents in qrels; skipped", topic)
            continue
        per_topic.append(average_precision(by_topic[topic], qrels, topic))
    if not per_topic:
        raise EvaluationError("no topic in the run has relevant documents in the qrels")
    return RunReport(
        per_topic=per_topic,
        mean_ap=sum(t.ap for t in per_topic) / len(per_topic),
        retrieved=sum(t.retrieved for t in per_topic),
        relevant=sum(t.relevant for t in per_topic),
        relevant_retrieved=sum(t.relevant_retrieved for t in per_topic),
    )


def relative_change_pct(before: float, after: float) -> float:
    """Relative mean-AP change in percent, e.g. 0.2453 -> 0.2507 is +2.20."""
    if before == 0.0:
        return 0.0 if after == 0.0 else math.inf
    return 100.0 * (after - before) / before


def compare_runs(baseline: RunReport, variants: dict):
    """Per-topic AP deltas of each variant run against the baseline.

    Counts strict improvements (delta > 0) per method and reports both the
    absolute and the relative mean-AP change. The topic sets of baseline
    and every variant must coincide exactly.
    """
    base_ap = baseline.topic_ap()
    deltas = []
    for method, report in variants.items():
        var_ap = report.topic_ap()
        if set(var_ap) != set(base_ap):
            difference = sorted(set(var_ap) ^ set(base_ap))
            raise EvaluationError(
                f"topic sets differ between baseline and {method!r}: {difference}"
            )
        rows = [
            (topic, base_ap[topic], var_ap[topic], var_ap[topic] - base_ap[topic])
            for topic in sorted(base_ap)
        ]
        improved = sum(1 for _, _, _, delta in rows if delta > 0)
        deltas.append(
            MethodDelta(
                method=method,
                rows=rows,
                improved=improved,
                improved_pct=100.0 * improved / len(rows),
                map_before=baseline.mean_ap,
                map_after=report.mean_ap,
                map_delta=report.mean_ap - baseline.mean_ap,
                map_rel_change_pct=relative_change_pct(baseline.mean_ap, report.mean_ap),
            )
        )
    return deltas
