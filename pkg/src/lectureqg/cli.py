"""Command line entry points: ingest, serve, generate, analytics export."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import api as service
from .analytics import keyword_length_histogram, summarize_ratings
from .config import load_config
from .errors import LectureQgError, OverlappingKeywords
from .provider import HttpProvider
from .store import Repository
from .textkit import extract_candidates


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--store", help="store root directory (overrides config)")
    parser.add_argument("--config", help="path to a JSON config file")


def _setup(args) -> tuple:
    cfg = load_config(args.config, store_root=args.store)
    repo = Repository(cfg.store_root)
    provider = None
    if cfg.provider_base_url:
        provider = HttpProvider(
            cfg.provider_base_url,
            name=cfg.provider_name,
            timeout_s=cfg.provider_timeout_s,
            max_concurrency=cfg.provider_max_concurrency,
        )
    return cfg, repo, provider


def _detect_format(path: Path, explicit: str) -> str:
    if explicit != "auto":
        return explicit
    return "timed_json" if path.suffix.lower() == ".json" else "plain_text"


def cmd_ingest(args) -> int:
    cfg, repo, _ = _setup(args)
    failures = 0
    for name in args.paths:
        path = Path(name)
        try:
            raw = path.read_bytes()
            fmt = _detect_format(path, args.format)
            report = service.ingest_document(
                repo, raw, fmt, cfg,
                video_id=None if fmt == "timed_json" else path.stem,
                title=None if fmt == "timed_json" else path.stem,
            )
            print(f"{report['video_id']}: {report['segments']} segments ({path})")
        except (OSError, LectureQgError) as exc:
            failures += 1
            print(f"FAILED {path}: {exc}", file=sys.stderr)
    if failures == len(args.paths):
        return 1
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    cfg, repo, provider = _setup(args)
    host = args.host or cfg.listen_host
    port = args.port or cfg.listen_port
    app = service.create_app(cfg, repo, provider)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def cmd_generate(args) -> int:
    """Batch generation: summary, keywords, and all four question types."""
    cfg, repo, provider = _setup(args)
    exit_code = 0
    for segment_id in repo.list_ids("segments"):
        text = repo.read("segments", segment_id)["text"]["versions"][-1]["text"]
        if not text.strip():
            print(f"{segment_id}: skipped (no words)")
            continue
        try:
            counts = _generate_for_segment(repo, cfg, segment_id, provider, args.seed)
            summary = ", ".join(f"{k}={v}" for k, v in counts.items())
            print(f"{segment_id}: {summary}")
        except LectureQgError as exc:
            exit_code = 1
            print(f"FAILED {segment_id}: {exc}", file=sys.stderr)
    return exit_code


def _generate_for_segment(repo, cfg, segment_id, provider, seed) -> dict:
    counts: dict[str, int] = {}
    if not repo.exists("summaries", segment_id):
        service.build_summary(repo, cfg, segment_id, provider=None)
    keywords_doc = service.refresh_keywords(repo, cfg, segment_id)
    recommended = keywords_doc["recommended"]
    if not recommended:
        return {"skipped": "no keyword candidates"}
    top = recommended[0]["phrase"]

    for qtype in ("SAQ", "MCQ"):
        doc = service.build_question_set(
            repo, cfg, segment_id, qtype, keyword=top, seed=seed, provider=provider
        )
        counts[qtype] = len(doc["questions"])

    doc = service.build_question_set(
        repo, cfg, segment_id, "BLQ", seed=seed, provider=provider
    )
    counts["BLQ"] = len(doc["questions"])

    summary_doc = repo.read("summaries", segment_id)
    summary_text = summary_doc["text"]["versions"][-1]["text"]
    gap_phrases = [c.phrase for c in extract_candidates(summary_text, limit=3)]
    while gap_phrases:
        try:
            doc = service.build_question_set(
                repo, cfg, segment_id, "GFQ", keywords=gap_phrases, seed=seed
            )
            counts["GFQ"] = len(doc["questions"][0]["payload"]["answers"])
            break
        except OverlappingKeywords:
            gap_phrases.pop()
    else:
        counts["GFQ"] = 0
    return counts


def cmd_analytics_export(args) -> int:
    _, repo, _ = _setup(args)
    ratings = repo.read_all("ratings")
    sets = repo.read_all("questions")
    summary = summarize_ratings(ratings)
    histogram = keyword_length_histogram(sets, ratings)

    if args.format == "json":
        print(json.dumps({"ratings": summary, "keyword_lengths": histogram}, indent=2))
        return 0

    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(
        ["qtype", "good", "average", "bad", "total",
         "good_pct", "average_pct", "bad_pct", "acceptable_pct"]
    )
    for qtype, row in summary.items():
        writer.writerow(
            [qtype, row["counts"]["good"], row["counts"]["average"],
             row["counts"]["bad"], row["total"], row["percent"]["good"],
             row["percent"]["average"], row["percent"]["bad"],
             row["acceptable_percent"]]
        )
    writer.writerow([])
    writer.writerow(["origin", "word_length", "count", "good", "average", "bad"])
    for origin in ("recommended", "custom"):
        for length in sorted(histogram.get(origin, {})):
            bin_ = histogram[origin][length]
            writer.writerow(
                [origin, length, bin_["count"], bin_["good"], bin_["average"], bin_["bad"]]
            )
    print(out.getvalue(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lectureqg",
        description="Generate and review assessment questions from lecture transcripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse transcripts into the store")
    p_ingest.add_argument("paths", nargs="+", help="transcript files")
    p_ingest.add_argument(
        "--format", choices=("auto", "timed_json", "plain_text"), default="auto"
    )
    _add_common(p_ingest)
    p_ingest.set_defaults(func=cmd_ingest)

    p_serve = sub.add_parser("serve", help="run the REST service")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    _add_common(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    p_generate = sub.add_parser(
        "generate", help="batch-generate summaries, keywords, and questions"
    )
    p_generate.add_argument("--seed", type=int, default=0)
    _add_common(p_generate)
    p_generate.set_defaults(func=cmd_generate)

    p_analytics = sub.add_parser("analytics", help="reporting commands")
    analytics_sub = p_analytics.add_subparsers(dest="analytics_command", required=True)
    p_export = analytics_sub.add_parser("export", help="dump rating and keyword stats")
    p_export.add_argument("--format", choices=("json", "csv"), default="json")
    _add_common(p_export)
    p_export.set_defaults(func=cmd_analytics_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LectureQgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
