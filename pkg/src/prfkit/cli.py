"""Command-line interface with index-build, run, and eval subcommands."""

import argparse
import json
import logging
import sys
import traceback
from pathlib import Path

from . import expansion, text, trec
from .errors import InputError, ToolkitError
from .index import RankingParams, build_index
from .pipeline import RunConfig, evaluate_existing, parse_file, run_pipeline

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2

log = logging.getLogger("prfkit")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prfkit",
        description="Query expansion by equi-frequency partitioning of feedback documents.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    ib = sub.add_parser("index-build", help="build and persist an inverted index")
    ib.add_argument("--corpus", required=True, type=Path, help="TREC document collection")
    ib.add_argument("--stopwords", required=True, type=Path, help="stopword list, one per line")
    ib.add_argument("--script-hint", default="mixed", choices=text.SCRIPT_HINTS)
    ib.add_argument("--output", required=True, type=Path, help="index file to write")

    run = sub.add_parser("run", help="run the full expansion experiment")
    run.add_argument("--config", type=Path, help="JSON file holding any run option")
    run.add_argument("--corpus", type=Path)
    run.add_argument("--topics", type=Path)
    run.add_argument("--qrels", type=Path)
    run.add_argument("--stopwords", type=Path)
    run.add_argument("--tag", help="run label echoed into every artifact (default RUN)")
    run.add_argument("--outdir", type=Path)
    run.add_argument("--feedback-depth", type=int, help="feedback documents per topic (default 10)")
    run.add_argument("--top-terms", type=int, help="candidates kept per feedback document (default 5)")
    run.add_argument("--run-depth", type=int, help="entries per topic in run files (default 1000)")
    run.add_argument("--model", choices=("bm25", "tfidf"))
    run.add_argument("--k1", type=float)
    run.add_argument("--b", type=float)
    run.add_argument(
        "--methods", help="comma-separated subset of highest,average,keyword (default all)"
    )
    run.add_argument("--script-hint", choices=text.SCRIPT_HINTS)
    run.add_argument("--jobs", type=int, help="topic-level parallelism (default 1)")
    run.add_argument("--index", type=Path, help="previously built index file")
    run.add_argument(
        "--dump-partitions", action="store_true", default=None,
        help="also write per-document partition spans",
    )

    ev = sub.add_parser("eval", help="evaluate existing run files")
    ev.add_argument("--qrels", required=True, type=Path)
    ev.add_argument("--baseline", required=True, type=Path, help="baseline run file")
    ev.add_argument(
        "--variant", action="append", default=[], metavar="NAME=PATH",
        help="variant run file, repeatable",
    )
    ev.add_argument("--tag", default="EVAL")
    ev.add_argument("--outdir", type=Path, default=Path("out"))
    return parser


def _cmd_index_build(args):
    for label, path in (("corpus", args.corpus), ("stopwords", args.stopwords)):
        if not path.is_file():
            raise InputError(f"{label} file not found: {path}")
    profile = text.profile_from_file("index", args.stopwords, args.script_hint)

    def tokenize_docs(fh):
        return [
            (doc.docno, text.tokenize(doc.body, profile))
            for doc in trec.parse_trec_docs(fh)
        ]

    index = build_index(parse_file(args.corpus, tokenize_docs))
    index.save(args.output)
    log.info("indexed %d documents into %s", index.doc_count, args.output)
    return EXIT_OK


def _merge_run_config(args) -> RunConfig:
    settings = {}
    if args.config is not None:
        if not args.config.is_file():
            raise InputError(f"config file not found: {args.config}")
        try:
            with open(args.config, encoding="utf-8") as fh:
                settings = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"config file {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(settings, dict):
            raise InputError(f"config file {args.config} must hold a JSON object")
    overrides = {
        "corpus": args.corpus,
        "topics": args.topics,
        "qrels": args.qrels,
        "stopwords": args.stopwords,
        "tag": args.tag,
        "outdir": args.outdir,
        "feedback_depth": args.feedback_depth,
        "candidate_top_n": args.top_terms,
        "run_depth": args.run_depth,
        "model": args.model,
        "k1": args.k1,
        "b": args.b,
        "methods": args.methods,
        "script_hint": args.script_hint,
        "jobs": args.jobs,
        "index_path": args.index,
        "dump_partitions": args.dump_partitions,
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    for required in ("corpus", "topics", "qrels", "stopwords"):
        if settings.get(required) is None:
            raise InputError(f"missing required option --{required}")
    methods = settings.pop("methods", None)
    if methods is None:
        methods = expansion.METHODS
    elif isinstance(methods, str):
        methods = tuple(m.strip() for m in methods.split(",") if m.strip())
    ranking = RankingParams(
        model=settings.pop("model", "bm25"),
        k1=float(settings.pop("k1", 1.2)),
        b=float(settings.pop("b", 0.75)),
    )
    known = {
        "corpus", "topics", "qrels", "stopwords", "tag", "outdir",
        "feedback_depth", "candidate_top_n", "run_depth", "script_hint",
        "jobs", "index_path", "dump_partitions",
    }
    unknown = set(settings) - known
    if unknown:
        raise InputError(f"unknown run options: {sorted(unknown)}")
    return RunConfig(ranking=ranking, methods=tuple(methods), **settings)


def _cmd_run(args):
    config = _merge_run_config(args)
    result = run_pipeline(config)
    for name, path in result.run_files.items():
        log.info("run file (%s): %s", name, path)
    log.info("keywords file: %s", result.keywords_file)
    log.info("report: %s", result.report_file)
    log.info("comparison: %s", result.comparison_file)
    log.info("figure: %s", result.figure_file)
    return EXIT_OK


def _cmd_eval(args):
    variants = {}
    for pair in args.variant:
        name, sep, path = pair.partition("=")
        if not sep or not name or not path:
            raise InputError(f"--variant must look like NAME=PATH, got {pair!r}")
        variants[name] = Path(path)
    result = evaluate_existing(args.qrels, args.baseline, variants, args.tag, args.outdir)
    log.info("report: %s", result["report_file"])
    if result["comparison_file"] is not None:
        log.info("comparison: %s", result["comparison_file"])
        log.info("figure: %s", result["figure_file"])
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    handlers = {
        "index-build": _cmd_index_build,
        "run": _cmd_run,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ToolkitError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:  # noqa: BLE001 - invariant violations map to exit 2
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
