"""End-to-end experiment pipeline: index, retrieve, expand, re-retrieve, report.

One call runs the whole study for a collection: a baseline retrieval pass,
per-topic term mining over the top-ranked feedback documents, one expanded
retrieval pass per selection method, and the evaluation artifacts that
compare everything against the baseline. Topics are independent, so they
may be processed in parallel; artifact files are always written in topic
order, which keeps every output byte-identical across runs and schedules.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import expansion, partition, report, scoring, text, trec
from .errors import DegenerateDocumentError, InputError, NoKeywordError
from .evaluation import compare_runs, evaluate_run
from .index import InvertedIndex, RankingParams, build_index, feedback_set, retrieve

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Everything one experiment run needs, with the conventional defaults."""

    corpus: Path
    topics: Path
    qrels: Path
    stopwords: Path
    tag: str = "RUN"
    outdir: Path = Path("out")
    feedback_depth: int = 10
    candidate_top_n: int = 5
    run_depth: int = 1000
    ranking: RankingParams = field(default_factory=RankingParams)
    methods: tuple = expansion.METHODS
    script_hint: str = "mixed"
    jobs: int = 1
    index_path: Path | None = None
    dump_partitions: bool = False

    def __post_init__(self):
        for name in ("corpus", "topics", "qrels", "stopwords", "outdir"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))
        if self.index_path is not None:
            self.index_path = Path(self.index_path)
        self.methods = tuple(self.methods)

    def validate(self):
        for name in ("corpus", "topics", "qrels", "stopwords"):
            path = getattr(self, name)
            if not path.is_file():
                raise InputError(f"{name} file not found: {path}")
        if self.index_path is not None and not self.index_path.is_file():
            raise InputError(f"index file not found: {self.index_path}")
        for name in ("feedback_depth", "candidate_top_n", "run_depth"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be >= 1")
        if self.jobs < 1:
            raise InputError("jobs must be >= 1")
        unknown = set(self.methods) - set(expansion.METHODS)
        if unknown:
            raise InputError(f"unknown expansion methods: {sorted(unknown)}")
        if not self.methods:
            raise InputError("at least one expansion method is required")

    def provenance(self):
        """Header lines recording the experiment-defining settings."""
        return [
            f"tag={self.tag}",
            f"corpus={self.corpus}",
            f"topics={self.topics}",
            f"qrels={self.qrels}",
            f"stopwords={self.stopwords}",
            f"script_hint={self.script_hint}",
            f"feedback_depth={self.feedback_depth}",
            f"candidate_top_n={self.candidate_top_n}",
            f"run_depth={self.run_depth}",
            f"model={self.ranking.model} k1={self.ranking.k1} b={self.ranking.b}",
            f"methods={','.join(self.methods)}",
        ]


@dataclass
class TopicOutcome:
    """Everything computed for one topic, ready for ordered writing."""

    topic: trec.Topic
    skipped: bool = False
    query_terms: list = field(default_factory=list)
    baseline: object = None
    candidates: object = None
    expanded: dict = field(default_factory=dict)
    variants: dict = field(default_factory=dict)
    partition_lines: list = field(default_factory=list)


@dataclass
class PipelineResult:
    """Paths of the written artifacts plus the computed reports."""

    run_files: dict
    topic_files: dict
    keywords_file: Path
    report_file: Path
    comparison_file: Path
    figure_file: Path
    baseline_report: object
    variant_reports: dict
    deltas: list


def parse_file(path, parser):
    """Run a parser over a file, prefixing any input error with the path."""
    try:
        with open(path, "rb") as fh:
            result = parser(fh)
            if hasattr(result, "__next__"):
                result = list(result)
            return result
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _load_collection(config, profile):
    def tokenize_docs(fh):
        return {
            doc.docno: text.tokenize(doc.body, profile)
            for doc in trec.parse_trec_docs(fh)
        }

    return parse_file(config.corpus, tokenize_docs)


def _process_topic(topic, profile, index, streams, config):
    outcome = TopicOutcome(topic=topic)
    query_stream = text.tokenize(topic.title, profile)
    if len(query_stream) == 0:
        log.warning(
            "topic %d: empty query after stopword removal; topic skipped",
            topic.number,
        )
        outcome.skipped = True
        return outcome
    outcome.query_terms = list(query_stream)
    query_set = frozenset(outcome.query_terms)
    outcome.baseline = retrieve(
        index, outcome.query_terms, config.run_depth, config.ranking, topic=topic.number
    )
    fb_docs = feedback_set(outcome.baseline, config.feedback_depth)
    if not fb_docs:
        log.warning("topic %d: no feedback documents retrieved", topic.number)
    per_doc = []
    for docno in fb_docs:
        stream = streams.get(docno)
        if stream is None:
            log.warning(
                "topic %d: feedback document %s missing from the corpus; skipped",
                topic.number,
                docno,
            )
            continue
        try:
            parts = partition.partition_document(stream, query_set, doc=docno)
        except (NoKeywordError, DegenerateDocumentError) as exc:
            log.warning(
                "topic %d: feedback document %s skipped (%s)", topic.number, docno, exc
            )
            continue
        if config.dump_partitions:
            outcome.partition_lines.extend(
                f"{p.doc} {p.start} {p.end} {p.keyword_count}" for p in parts
            )
        doc_scores = scoring.score_partitions(parts)
        per_doc.append(
            scoring.top_n_terms(doc_scores, config.candidate_top_n, source_doc=docno)
        )
    outcome.candidates = scoring.merge_candidates(per_doc, topic.number)
    groups = expansion.form_groups(outcome.candidates, query_set)
    for method in config.methods:
        if method == expansion.METHOD_HIGHEST:
            group = expansion.select_highest(groups)
        elif method == expansion.METHOD_AVERAGE:
            group = expansion.select_average(groups)
        else:
            group = expansion.select_keyword(groups, query_set)
        expanded = expansion.reformulate(topic, group, outcome.query_terms, method)
        outcome.expanded[method] = expanded
        if expanded.expansion_terms:
            outcome.variants[method] = retrieve(
                index,
                outcome.query_terms + expanded.expansion_terms,
                config.run_depth,
                config.ranking,
                topic=topic.number,
            )
        else:
            log.info("topic %d: method %s left the query unexpanded", topic.number, method)
            outcome.variants[method] = outcome.baseline
    return outcome


def _run_entries(ranked_lists, tag):
    entries = []
    for ranked in ranked_lists:
        for rank, (docno, score) in enumerate(ranked.entries, 1):
            entries.append(
                trec.RunEntry(
                    topic=ranked.topic, docno=docno, rank=rank, score=score, tag=tag
                )
            )
    return entries


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run the full experiment described by `config` and write its artifacts."""
    config.validate()
    profile = text.profile_from_file(config.tag, config.stopwords, config.script_hint)
    streams = _load_collection(config, profile)
    if config.index_path is not None:
        index = InvertedIndex.load(config.index_path)
    else:
        index = build_index(streams.items())
    topics = parse_file(config.topics, trec.parse_topics)
    qrels = parse_file(config.qrels, trec.parse_qrels)

    def process(topic):
        return _process_topic(topic, profile, index, streams, config)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(process, topics))
    else:
        outcomes = [process(topic) for topic in topics]

    active = [o for o in outcomes if not o.skipped]
    config.outdir.mkdir(parents=True, exist_ok=True)

    run_files = {}
    baseline_path = config.outdir / f"{config.tag}_baseline.run"
    trec.write_run(_run_entries((o.baseline for o in active), config.tag), baseline_path)
    run_files["baseline"] = baseline_path
    topic_files = {}
    for method in config.methods:
        run_path = config.outdir / f"{config.tag}_{method}.run"
        trec.write_run(
            _run_entries(
                (o.variants[method] for o in active), f"{config.tag}-{method}"
            ),
            run_path,
        )
        run_files[method] = run_path
        topics_path = config.outdir / f"{config.tag}_{method}_topics.trec"
        expansion.write_expanded_topics(
            (o.expanded[method] for o in active), topics_path
        )
        topic_files[method] = topics_path

    keywords_path = config.outdir / f"{config.tag}_keywords.tsv"
    scoring.write_keywords((o.candidates for o in active), keywords_path)

    if config.dump_partitions:
        dump_path = config.outdir / f"{config.tag}_partitions.txt"
        with open(dump_path, "w", encoding="utf-8", newline="\n") as fh:
            for outcome in active:
                for line in outcome.partition_lines:
                    fh.write(line + "\n")

    baseline_report = evaluate_run(trec.read_run(baseline_path), qrels)
    variant_reports = {
        method: evaluate_run(trec.read_run(run_files[method]), qrels)
        for method in config.methods
    }
    deltas = compare_runs(baseline_report, variant_reports)

    report_path = config.outdir / f"{config.tag}_report.txt"
    summary = report.format_summary_table(
        {"baseline": baseline_report, **variant_reports}, config.provenance()
    )
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(summary)
        fh.write("\n")
        fh.write(report.format_method_summaries(deltas))

    comparison_path = config.outdir / f"{config.tag}_comparison.csv"
    report.write_comparison_csv(deltas, comparison_path)

    figure_path = config.outdir / f"{config.tag}_improvement.png"
    report.render_improvement_figure(deltas, figure_path)

    return PipelineResult(
        run_files=run_files,
        topic_files=topic_files,
        keywords_file=keywords_path,
        report_file=report_path,
        comparison_file=comparison_path,
        figure_file=figure_path,
        baseline_report=baseline_report,
        variant_reports=variant_reports,
        deltas=deltas,
    )


def evaluate_existing(qrels_path, baseline_path, variant_paths, tag, outdir):
    """Build reports from already-written run files (the `eval` subcommand)."""
    for label, path in [("qrels", qrels_path), ("baseline run", baseline_path)] + [
        (f"variant run {name!r}", path) for name, path in variant_paths.items()
    ]:
        if not Path(path).is_file():
            raise InputError(f"{label} file not found: {path}")
    qrels = parse_file(Path(qrels_path), trec.parse_qrels)
    baseline_report = evaluate_run(parse_file(Path(baseline_path), trec.read_run), qrels)
    variant_reports = {
        name: evaluate_run(parse_file(Path(path), trec.read_run), qrels)
        for name, path in variant_paths.items()
    }
    deltas = compare_runs(baseline_report, variant_reports)

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    report_path = outdir / f"{tag}_report.txt"
    header = [f"tag={tag}", f"qrels={qrels_path}", f"baseline={baseline_path}"] + [
        f"variant:{name}={path}" for name, path in variant_paths.items()
    ]
    summary = report.format_summary_table(
        {"baseline": baseline_report, **variant_reports}, header
    )
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(summary)
        if deltas:
            fh.write("\n")
            fh.write(report.format_method_summaries(deltas))
    comparison_path = None
    figure_path = None
    if deltas:
        comparison_path = outdir / f"{tag}_comparison.csv"
        report.write_comparison_csv(deltas, comparison_path)
        figure_path = outdir / f"{tag}_improvement.png"
        report.render_improvement_figure(deltas, figure_path)
    return {
        "report_file": report_path,
        "comparison_file": comparison_path,
        "figure_file": figure_path,
        "baseline_report": baseline_report,
        "variant_reports": variant_reports,
        "deltas": deltas,
    }
