"""Average precision, run reports, and cross-run comparison."""

import random
from pathlib import Path

import pytest

from oracles import reference_average_precision
from prfkit.errors import EvaluationError
from prfkit.evaluation import (
    RunReport,
    TopicEval,
    average_precision,
    compare_runs,
    evaluate_run,
    relative_change_pct,
)
from prfkit.trec import RunEntry, parse_qrels, read_run

DATA = Path(__file__).parent / "data"


def run_for(topic, docnos, tag="T"):
    return [
        RunEntry(topic, docno, rank, float(len(docnos) - rank + 1), tag)
        for rank, docno in enumerate(docnos, 1)
    ]


def qrels_for(topic, relevant):
    return parse_qrels("\n".join(f"{topic} 0 {d} 1" for d in relevant))


class TestAveragePrecision:
    def test_two_relevant_at_ranks_one_and_three(self):
        qrels = qrels_for(5, ["r1", "r2"])
        result = average_precision(run_for(5, ["r1", "x", "r2", "y"]), qrels, 5)
        assert result.ap == pytest.approx(0.8333, abs=1e-4)
        assert result.relevant_retrieved == 2

    def test_perfect_ranking(self):
        qrels = qrels_for(5, ["r1", "r2", "r3"])
        result = average_precision(run_for(5, ["r1", "r2", "r3", "x"]), qrels, 5)
        assert result.ap == 1.0

    def test_no_relevant_retrieved(self):
        qrels = qrels_for(5, ["r1"])
        result = average_precision(run_for(5, ["x", "y"]), qrels, 5)
        assert result.ap == 0.0

    def test_topic_without_relevant_docs_rejected(self):
        with pytest.raises(EvaluationError):
            average_precision(run_for(5, ["x"]), qrels_for(9, ["r"]), 5)

    def test_matches_reference_formula_on_random_runs(self):
        rng = random.Random(2024)
        for _ in range(100):
            docnos = [f"d{i}" for i in range(rng.randint(1, 40))]
            rng.shuffle(docnos)
            relevant = {d for d in docnos if rng.random() < 0.3}
            relevant |= {"dr"}  # ensure at least one relevant exists
            qrels = qrels_for(1, sorted(relevant))
            result = average_precision(run_for(1, docnos), qrels, 1)
            assert result.ap == pytest.approx(
                reference_average_precision(docnos, relevant), abs=1e-12
            )

    def test_permuting_below_last_relevant_hit_is_neutral(self):
        qrels = qrels_for(1, ["r1", "r2"])
        base = average_precision(run_for(1, ["r1", "r2", "a", "b", "c"]), qrels, 1)
        permuted = average_precision(run_for(1, ["r1", "r2", "c", "a", "b"]), qrels, 1)
        assert base.ap == permuted.ap

    def test_swapping_relevant_upward_never_decreases(self):
        qrels = qrels_for(1, ["r1"])
        worse = average_precision(run_for(1, ["a", "b", "r1"]), qrels, 1)
        better = average_precision(run_for(1, ["a", "r1", "b"]), qrels, 1)
        assert better.ap >= worse.ap


class TestEvaluateRun:
    def test_mean_of_two_topics(self):
        qrels = parse_qrels("1 0 r1 1\n1 0 r2 1\n2 0 s1 1\n")
        entries = run_for(1, ["r1", "x", "y", "z", "r2"]) + run_for(2, ["s1", "x"])
        report = evaluate_run(entries, qrels)
        # topic 1: (1 + 2/5) / 2 = 0.7; topic 2: 1.0
        assert report.mean_ap == pytest.approx(0.85)
        assert report.num_topics == 2

    def test_single_topic(self):
        qrels = qrels_for(1, ["r1"])
        report = evaluate_run(run_for(1, ["r1"]), qrels)
        assert report.mean_ap == report.per_topic[0].ap == 1.0

    def test_golden_fixture_frozen_values(self):
        """Fixture run against fixture qrels, cross-checked two ways.

        The expected numbers were computed by hand and verified with the
        direct AP formula in oracles.py: topic 201 hits at ranks 1 and 3
        of 2 relevant (5/6), topic 202 one hit at rank 2 of 1 relevant
        (1/2), topic 203 hits at ranks 1, 2, 4 of 3 relevant (11/12);
        topics 204 (no relevant) and 205 (unjudged) are skipped.
        """
        entries = read_run(DATA / "golden.run")
        qrels = parse_qrels((DATA / "golden.qrels").read_text())
        report = evaluate_run(entries, qrels)
        assert report.mean_ap == pytest.approx(0.75, abs=1e-4)
        assert report.relevant == 6
        assert report.relevant_retrieved == 6
        assert report.retrieved == 12
        assert [t.topic for t in report.per_topic] == [201, 202, 203]
        by_topic = {}
        for entry in entries:
            by_topic.setdefault(entry.topic, []).append(entry.docno)
        for evaluated in report.per_topic:
            expected = reference_average_precision(
                by_topic[evaluated.topic], qrels.relevant_docs(evaluated.topic)
            )
            assert evaluated.ap == pytest.approx(expected, abs=1e-12)

    def test_underfull_runs_tolerated(self):
        qrels = parse_qrels("1 0 r1 1\n2 0 s1 1\n")
        entries = run_for(1, ["r1", "x", "y"]) + run_for(2, ["s1"])
        report = evaluate_run(entries, qrels)
        assert report.retrieved == 4

    def test_unjudged_topic_skipped_with_warning(self, caplog):
        qrels = qrels_for(1, ["r1"])
        entries = run_for(1, ["r1"]) + run_for(42, ["x"])
        with caplog.at_level("WARNING"):
            report = evaluate_run(entries, qrels)
        assert report.num_topics == 1
        assert "42" in caplog.text

    def test_nothing_evaluable_is_an_error(self):
        with pytest.raises(EvaluationError):
            evaluate_run(run_for(42, ["x"]), qrels_for(1, ["r"]))


def report_with(ap_by_topic):
    per_topic = [
        TopicEval(topic, ap, retrieved=10, relevant=2, relevant_retrieved=1)
        for topic, ap in sorted(ap_by_topic.items())
    ]
    return RunReport(
        per_topic=per_topic,
        mean_ap=sum(ap_by_topic.values()) / len(ap_by_topic),
        retrieved=10 * len(per_topic),
        relevant=2 * len(per_topic),
        relevant_retrieved=len(per_topic),
    )


class TestCompareRuns:
    def test_published_map_arithmetic(self):
        baseline = report_with({1: 0.2453})
        variant = report_with({1: 0.2507})
        deltas = compare_runs(baseline, {"keyword": variant})
        assert deltas[0].map_rel_change_pct == pytest.approx(2.2013, abs=1e-3)
        assert abs(deltas[0].map_rel_change_pct - 2.15) <= 0.1

    def test_identical_runs_show_no_improvement(self):
        baseline = report_with({1: 0.4, 2: 0.6})
        deltas = compare_runs(baseline, {"m": report_with({1: 0.4, 2: 0.6})})
        assert deltas[0].improved == 0
        assert deltas[0].improved_pct == 0.0
        assert all(delta == 0 for _, _, _, delta in deltas[0].rows)

    def test_24_of_50_topics_is_48_percent(self):
        base_aps = {t: 0.5 for t in range(1, 51)}
        var_aps = {t: (0.6 if t <= 24 else 0.4) for t in range(1, 51)}
        deltas = compare_runs(report_with(base_aps), {"m": report_with(var_aps)})
        assert deltas[0].improved == 24
        assert deltas[0].improved_pct == pytest.approx(48.0)

    def test_topic_set_mismatch_lists_difference(self):
        baseline = report_with({1: 0.4, 2: 0.6})
        variant = report_with({1: 0.4, 3: 0.6})
        with pytest.raises(EvaluationError, match=r"\[2, 3\]"):
            compare_runs(baseline, {"m": variant})

    def test_relative_change_guards_zero_baseline(self):
        assert relative_change_pct(0.0, 0.0) == 0.0
        assert relative_change_pct(0.2, 0.3) == pytest.approx(50.0)
