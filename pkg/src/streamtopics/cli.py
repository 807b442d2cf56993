"""Command-line interface: run, eval, and gen subcommands.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from streamtopics import __version__, evaluation, gen as genmod, topics
from streamtopics.config import PRESET_NAMES, parse_duration, resolve_config
from streamtopics.embedding import get_provider
from streamtopics.ingest import StreamError, open_stream
from streamtopics.pipeline import run_stream
from streamtopics.preprocess import load_stopwords

logger = logging.getLogger(__name__)

_CONFIG_FLAGS = [
    ("--init-agents", int),
    ("--init-agent-cap", int),
    ("--timeslot", parse_duration),
    ("--comm-int", parse_duration),
    ("--slid-win-int", parse_duration),
    ("--assign-radius", float),
    ("--outlier-threshold", float),
    ("--no-topics", int),
    ("--no-keywords", int),
    ("--agent-fading-rate", float),
    ("--del-agent-weight-threshold", float),
    ("--seed", int),
    ("--topic-match-fraction", float),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamtopics",
        description="Streaming topic clustering over timestamped document feeds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="cluster a stream file and emit timeslot snapshots")
    run.add_argument("--input", required=True, help="newline-delimited record file")
    run.add_argument("--output", required=True, help="snapshot output file (jsonl)")
    run.add_argument("--stats", help="keyword frequency totals file (default: <output>.stats.jsonl)")
    run.add_argument("--manifest", help="run manifest file (default: <output>.manifest.json)")
    run.add_argument("--config", help=f"config file path or preset name ({', '.join(PRESET_NAMES)})")
    run.add_argument("--lenient-time", action="store_true", help="drop out-of-order records instead of failing")
    run.add_argument("--stopwords", help="stopword file, one lowercase token per line")
    run.add_argument("--embedder", choices=("hashed", "remote"), default="hashed")
    run.add_argument("--embed-dim", type=int, default=64, help="hashed embedder dimension")
    run.add_argument("--embed-url", help="embedding service URL (remote embedder)")
    run.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    for flag, parse in _CONFIG_FLAGS:
        run.add_argument(flag, type=parse, default=None)

    ev = sub.add_parser("eval", help="score a snapshot file against ground truth")
    ev.add_argument("--snapshots", required=True)
    ev.add_argument("--gt", required=True, help="ground-truth JSON file")
    ev.add_argument("--match-fraction", type=float, default=0.5)
    ev.add_argument("--no-topics", type=int, default=None, help="truncate each snapshot to its top N topics")
    ev.add_argument("--report", help="write the metrics report as JSON")

    g = sub.add_parser("gen", help="generate a synthetic labeled stream")
    g.add_argument("--topics", type=int, required=True)
    g.add_argument("--points-per-topic", type=int, required=True)
    g.add_argument("--vocab-per-topic", type=int, default=8)
    g.add_argument("--slots", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--slot-seconds", type=int, default=60)
    g.add_argument("--stream", required=True, help="output stream file")
    g.add_argument("--gt", required=True, help="output ground-truth file")

    for p in (run, ev, g):
        p.add_argument("--log-level", default="WARNING", help="logging level (DEBUG, INFO, ...)")
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    if not os.path.exists(args.input):
        print(f"streamtopics run: input path {args.input!r} does not exist", file=sys.stderr)
        return 2
    overrides = {name.lstrip("-").replace("-", "_"): getattr(args, name.lstrip("-").replace("-", "_")) for name, _ in _CONFIG_FLAGS}
    config = resolve_config(args.config, overrides)
    if args.embedder == "remote" and not args.embed_url:
        print("streamtopics run: --embed-url is required with --embedder remote", file=sys.stderr)
        return 2
    provider = get_provider(args.embedder, dim=args.embed_dim, url=args.embed_url)
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    stats_path = args.stats or f"{args.output}.stats.jsonl"
    manifest_path = args.manifest or f"{args.output}.manifest.json"
    cli_args = {
        "input": args.input,
        "output": args.output,
        "stats": stats_path,
        "manifest": manifest_path,
        "config": args.config,
        "lenient_time": args.lenient_time,
        "stopwords": args.stopwords,
        "embedder": args.embedder,
        "embed_dim": args.embed_dim,
        "embed_url": args.embed_url,
        "threads": args.threads,
        "log_level": args.log_level,
    }
    cli_args.update({k: str(v) if v is not None else None for k, v in overrides.items()})
    manifest = run_stream(
        config,
        open_stream(args.input, lenient=args.lenient_time),
        provider,
        output_path=args.output,
        stats_path=stats_path,
        manifest_path=manifest_path,
        args=cli_args,
        stopwords=stopwords,
        threads=args.threads,
    )
    logger.info(
        "run complete: %d records, %d snapshots, %d phases",
        manifest.records_processed,
        manifest.snapshots_written,
        len(manifest.phases),
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    for path, flag in ((args.snapshots, "--snapshots"), (args.gt, "--gt")):
        if not os.path.exists(path):
            print(f"streamtopics eval: {flag} path {path!r} does not exist", file=sys.stderr)
            return 2
    snapshots = topics.read_snapshots(args.snapshots)
    gt = evaluation.load_ground_truth(args.gt)
    report = evaluation.score(snapshots, gt, args.match_fraction, no_topics=args.no_topics)
    print(f"topic recall       {report.topic_recall:.4f}  ({report.matched_topics}/{report.gt_topics})")
    print(f"keyword precision  {report.keyword_precision:.4f}  ({report.matched_kws}/{report.extracted_kws})")
    print(f"keyword recall     {report.keyword_recall:.4f}  ({report.matched_kws}/{report.gt_kws})")
    print(f"f-score            {report.f_score:.4f}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    stream = genmod.generate(
        n_topics=args.topics,
        points_per_topic=args.points_per_topic,
        vocab_per_topic=args.vocab_per_topic,
        slots=args.slots,
        seed=args.seed,
        slot_seconds=args.slot_seconds,
    )
    genmod.write_stream(stream, args.stream, args.gt)
    print(f"wrote {len(stream.records)} records to {args.stream} and ground truth to {args.gt}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING))
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_gen(args)
    except (StreamError, ValueError, OSError) as exc:
        print(f"streamtopics {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
