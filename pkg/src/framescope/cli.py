"""Operator and researcher command line.

Subcommands wrap the library without requiring a running service: ingest
(canonicalize + score a document), score / suggest (frame counting), recommend
(local corpus similarity), metrics (engagement report from an event log),
permtest (empathy permutation test), and serve (run the HTTP service).

JSON output is stable-key-ordered so golden-file comparisons are reliable.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, recommend
from .errors import EmptyDocument, FramescopeError, InvalidEncoding
from .lexicon import (
    DEFAULT_SUGGEST_THRESHOLD,
    load_lexicon,
    no_suggestions,
    score,
    stub_lexicon_path,
    suggest_tags,
)
from .model import Store, canonicalize

_CORPUS_SUFFIXES = (".txt", ".html", ".htm", ".md")


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(f"{path} is not valid UTF-8: {exc}") from None


def emit(args, data: dict | list, table: str) -> None:
    if args.format == "table":
        print(table)
    else:
        print(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False))


# --- subcommands ---------------------------------------------------------------

def cmd_ingest(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    raw = read_text(args.file)
    canonical = canonicalize(raw)
    if not canonical:
        raise EmptyDocument(f"{args.file} is empty after canonicalization")
    vector = score(canonical, lexicon)
    suggested = (
        suggest_tags(vector, args.suggest_threshold)
        if vector.token_count
        else no_suggestions()
    )
    data = {
        "title": args.title or Path(args.file).stem,
        "source_url": args.source_url,
        "canonical_text": canonical,
        "frame_vector": vector.as_dict(),
        "suggested_tags": suggested.as_dict(),
    }
    lines = [
        f"title       {data['title']}",
        f"tokens      {vector.token_count}",
        f"suggested   {', '.join(data['suggested_tags']['tags']) or '-'}",
        "",
        canonical,
    ]
    emit(args, data, "\n".join(lines))
    return 0


def cmd_score(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    vector = score(read_text(args.file), lexicon)
    data = vector.as_dict()
    rows = [f"{tag:<12} {count}" for tag, count in data["counts"].items()]
    rows.append(f"{'tokens':<12} {vector.token_count}")
    emit(args, data, "\n".join(rows))
    return 0


def cmd_suggest(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    vector = score(read_text(args.file), lexicon)
    suggested = suggest_tags(vector, args.suggest_threshold)
    data = suggested.as_dict()
    rows = [
        f"{tag:<12} {rate:8.3f}  {'suggested' if tag in data['tags'] else ''}".rstrip()
        for tag, rate in data["rates"].items()
    ]
    emit(args, data, "\n".join(rows))
    return 0


def cmd_recommend(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    store = Store(lexicon, suggest_threshold=args.suggest_threshold)
    corpus_dir = Path(args.corpus)
    files = sorted(
        p for p in corpus_dir.iterdir()
        if p.is_file() and p.suffix.lower() in _CORPUS_SUFFIXES
    )
    for path in files:
        store.ingest_article(path.stem, read_text(path), article_id=path.stem)

    target = args.target
    target_path = Path(target)
    target_id = target_path.stem if target_path.suffix else target
    if target_id not in store.articles and target_path.is_file():
        store.ingest_article(target_id, read_text(target_path), article_id=target_id)

    index = recommend.build_index(store.articles.values())
    results = recommend.recommend(index, target_id, args.k, alpha=args.alpha, tau=args.tau)
    data = [r.as_dict() for r in results]
    rows = [f"{'article':<24} {'topic':>8} {'frame':>8} {'score':>8}  tags"]
    for r in data:
        rows.append(
            f"{r['article_id']:<24} {r['topic_similarity']:8.4f} "
            f"{r['frame_similarity']:8.4f} {r['combined_score']:8.4f}  "
            f"{', '.join(r['frame_tags']['tags']) or '-'}"
        )
    emit(args, data, "\n".join(rows))
    return 0


def cmd_metrics(args) -> int:
    from .eventlog import EventLog

    events = EventLog(args.log).read()
    report = analysis.engagement_report(events, args.article)
    if args.figures:
        from . import figures

        out_dir = Path(args.figures)
        out_dir.mkdir(parents=True, exist_ok=True)
        figures.engagement_figure(report, out_dir / f"engagement_{args.article}.png")
    emit(args, report.as_dict(), analysis.engagement_table(report))
    return 0


def cmd_permtest(args) -> int:
    treatment = analysis.group_deltas(analysis.read_survey_csv(args.treatment))
    control = analysis.group_deltas(analysis.read_survey_csv(args.control))
    result = analysis.permutation_test(
        treatment,
        control,
        mode=args.mode,
        n_samples=args.samples,
        seed=args.seed,
        sidedness="two_sided" if args.sided == "two" else "one_sided",
    )
    if args.figures:
        from . import figures

        out_dir = Path(args.figures)
        out_dir.mkdir(parents=True, exist_ok=True)
        figures.permutation_figure(result, out_dir / "permutation_null.png")
    data = result.as_dict()
    rows = [
        f"observed mean diff  {result.observed_mean_diff:.6f}",
        f"p value             {result.p_value:.6f}",
        f"permutations        {result.n_permutations}",
        f"mode                {result.mode}",
        f"seed                {result.seed if result.seed is not None else '-'}",
    ]
    emit(args, data, "\n".join(rows))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        data_dir=Path(args.data_dir),
        lexicon_path=Path(args.lexicon),
        port=args.port,
        host=args.host,
        suggest_threshold=args.suggest_threshold,
        alpha=args.alpha,
        tau=args.tau,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


# --- parser ----------------------------------------------------------------------

def _env(name: str, default):
    return os.environ.get(f"FRAMESCOPE_{name}", default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framescope",
        description="Moral-framing annotation tools: scoring, recommendations, study statistics, and the HTTP service.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "table"), default="json")

    def add_lexicon(p):
        p.add_argument(
            "--lexicon",
            default=_env("LEXICON", str(stub_lexicon_path())),
            help="dictionary file (default: bundled stub)",
        )

    def add_threshold(p):
        p.add_argument(
            "--suggest-threshold",
            type=float,
            default=float(_env("SUGGEST_THRESHOLD", DEFAULT_SUGGEST_THRESHOLD)),
            help="suggestion rate threshold per 1000 tokens",
        )

    p = sub.add_parser("ingest", help="canonicalize and score a text or HTML document")
    p.add_argument("file")
    p.add_argument("--title")
    p.add_argument("--source-url")
    add_lexicon(p)
    add_threshold(p)
    add_format(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("score", help="frame-category counts for a document")
    p.add_argument("file")
    add_lexicon(p)
    add_format(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("suggest", help="suggested frame tags for a document")
    p.add_argument("file")
    add_lexicon(p)
    add_threshold(p)
    add_format(p)
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("recommend", help="similar articles from a local corpus directory")
    p.add_argument("target", help="article id (file stem) or path")
    p.add_argument("--corpus", required=True, help="directory of .txt/.html articles")
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--alpha", type=float, default=float(_env("ALPHA", recommend.DEFAULT_ALPHA)))
    p.add_argument("--tau", type=float, default=float(_env("TAU", recommend.DEFAULT_TAU)))
    add_lexicon(p)
    add_threshold(p)
    add_format(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("metrics", help="engagement report from an event log")
    p.add_argument("--log", required=True, help="events.jsonl path")
    p.add_argument("--article", required=True, help="article id")
    p.add_argument("--figures", help="directory for rendered figures")
    add_format(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("permtest", help="permutation test on survey CSVs")
    p.add_argument("--treatment", required=True, help="survey CSV for the treatment group")
    p.add_argument("--control", required=True, help="survey CSV for the control group")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=None, help="sample count for sampled mode")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sided", choices=("one", "two"), default="one")
    p.add_argument("--figures", help="directory for rendered figures")
    add_format(p)
    p.set_defaults(func=cmd_permtest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=int(_env("PORT", 8000)))
    p.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    p.add_argument("--data-dir", default=_env("DATA_DIR", "./framescope-data"))
    p.add_argument("--alpha", type=float, default=float(_env("ALPHA", recommend.DEFAULT_ALPHA)))
    p.add_argument("--tau", type=float, default=float(_env("TAU", recommend.DEFAULT_TAU)))
    p.add_argument("--ui-dir", default=_env("UI_DIR", None))
    add_lexicon(p)
    add_threshold(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FramescopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
