"""Operator command line: ingest, cycle, evaluate, sweep, serve, synth.

Exit codes are stable for scripting: 0 success, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from tagrec import evaluate as ev
from tagrec.engine import CycleParams, load_engine
from tagrec.errors import DataError, TagRecError
from tagrec.ingest import assemble, load_books, load_documents, load_enrollments, load_loans, load_stopwords
from tagrec.profile import IDF_NATURAL_LOG, IDF_PAPER_EXAMPLE, WeightingConfig
from tagrec.recommend import GroupingConfig
from tagrec.similarity import CfConfig
from tagrec.store import save_corpus, state_dir, write_rejects_report, write_text
from tagrec.synth import SynthSpec, generate_corpus

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _parse_m(raw: str) -> tuple[int, int, int]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--m expects three comma-separated integers, e.g. 4,5,5")
    try:
        m1, m2, m3 = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("--m expects integers") from None
    return m1, m2, m3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tagrec",
                                     description="Tag-based hybrid recommender for a library catalog")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="load the four datasets plus stopwords into a data dir")
    p_ingest.add_argument("--books", required=True)
    p_ingest.add_argument("--documents", required=True)
    p_ingest.add_argument("--loans", required=True)
    p_ingest.add_argument("--enrollments", required=True)
    p_ingest.add_argument("--stopwords", required=True)
    p_ingest.add_argument("--data-dir", required=True)
    p_ingest.add_argument("--format", choices=["csv", "jsonl"], default="csv")

    p_cycle = sub.add_parser("cycle", help="rebuild profiles, matrix and recommendation lists")
    p_cycle.add_argument("--data-dir", required=True)
    p_cycle.add_argument("--p1", type=float, default=70.0)
    p_cycle.add_argument("--p2", type=float, default=40.0)
    p_cycle.add_argument("--m", type=_parse_m, default=(4, 5, 5), metavar="M1,M2,M3")
    p_cycle.add_argument("--idf-mode", choices=[IDF_NATURAL_LOG, IDF_PAPER_EXAMPLE],
                         default=IDF_NATURAL_LOG)
    p_cycle.add_argument("--window-days", type=int, default=WeightingConfig().window_days)
    p_cycle.add_argument("--list-size", type=int, default=30)
    p_cycle.add_argument("--cf-threshold", type=float, default=0.95)
    p_cycle.add_argument("--as-of", type=date.fromisoformat, default=None,
                         help="cycle date (default: latest loan date)")
    p_cycle.add_argument("--admin-secret", default="change-me")
    p_cycle.add_argument("--base-url", default="http://127.0.0.1:8000")

    p_eval = sub.add_parser("evaluate", help="run the history or feedback evaluation stage")
    p_eval.add_argument("--stage", choices=[ev.STAGE_HISTORY, ev.STAGE_FEEDBACK], required=True)
    p_eval.add_argument("--data-dir", required=True)
    p_eval.add_argument("--out", required=True)

    p_sweep = sub.add_parser("sweep", help="evaluate a grid of grouping configs")
    p_sweep.add_argument("--grid", required=True, help="JSON array of {p1,p2,m1,m2,m3}")
    p_sweep.add_argument("--data-dir", required=True)
    p_sweep.add_argument("--out", required=True)

    p_serve = sub.add_parser("serve", help="run the feedback HTTP API")
    p_serve.add_argument("--data-dir", required=True)
    p_serve.add_argument("--listen", default="127.0.0.1:8000")
    p_serve.add_argument("--config", default=None, help="key=value config file")

    p_synth = sub.add_parser("synth", help="generate the planted synthetic corpus")
    p_synth.add_argument("--users", type=int, default=6)
    p_synth.add_argument("--items", type=int, default=36,
                         help="number of never-borrowed distractor books")
    p_synth.add_argument("--seed", type=int, default=42)
    p_synth.add_argument("--data-dir", required=True)

    return parser


def cmd_ingest(args) -> int:
    for flag in ("books", "documents", "loans", "enrollments", "stopwords"):
        if not Path(getattr(args, flag)).exists():
            print(f"error: --{flag} file not found: {getattr(args, flag)}", file=sys.stderr)
            return EXIT_USAGE
    books = load_books(args.books, args.format)
    documents = load_documents(args.documents, args.format)
    known = {b.collection_code for b in books.records}
    loans = load_loans(args.loans, args.format, known)
    enrollments = load_enrollments(args.enrollments, args.format)
    stopwords = load_stopwords(args.stopwords)
    corpus = assemble(books, documents, loans, enrollments, stopwords)
    save_corpus(corpus, args.data_dir)
    reports = {"books": books, "documents": documents, "loans": loans, "enrollments": enrollments}
    write_rejects_report(args.data_dir, reports)
    for name, report in reports.items():
        print(f"{name}: accepted={report.accepted} rejected={len(report.rejects)} "
              f"duplicates={report.duplicates}")
    print(f"stopwords: {len(stopwords)}")
    return EXIT_OK


def cmd_cycle(args) -> int:
    from tagrec.service import ServiceConfig, run_cycle_and_mint

    engine = load_engine(args.data_dir)
    m1, m2, m3 = args.m
    params = CycleParams(
        as_of=args.as_of or engine.default_as_of(),
        weighting=WeightingConfig(idf_mode=args.idf_mode, window_days=args.window_days),
        grouping=GroupingConfig(p1=args.p1, p2=args.p2, m1=m1, m2=m2, m3=m3,
                                list_size=args.list_size),
        cf=CfConfig(similarity_threshold=args.cf_threshold),
    )
    config = ServiceConfig(data_dir=str(args.data_dir), admin_secret=args.admin_secret,
                           base_url=args.base_url)
    summary, tokens = run_cycle_and_mint(engine, args.data_dir, config, params)
    print(f"cycle {summary['cycle_seq']}: users={summary['users']} lists={summary['lists']} "
          f"mean_list_length={summary['mean_list_length']:.2f} "
          f"skipped={len(summary['skipped_cold_start'])}")
    print(f"outbox: {state_dir(args.data_dir) / 'outbox.txt'} ({len(tokens)} links)")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    engine = load_engine(args.data_dir)
    if engine.last_params is None:
        print("error: no cycle has been run on this data dir", file=sys.stderr)
        return EXIT_DATA
    out = Path(args.out)
    if args.stage == ev.STAGE_HISTORY:
        counts, report = ev.evaluate_history(engine.lists, engine.borrowed_in_window,
                                             engine.last_params.grouping)
        write_text(out, ev.confusion_csv(counts, report))
    else:
        if not engine.ratings:
            print("error: no ratings present; run the feedback flow first", file=sys.stderr)
            return EXIT_DATA
        counts, report, tables = ev.evaluate_feedback(engine.ratings, engine.borrowed_in_window)
        write_text(out, ev.confusion_csv(counts, report))
        write_text(out.parent / "score_histogram.csv", ev.score_histogram_csv(tables))
        write_text(out.parent / "borrowed_by_score.csv", ev.borrowed_by_score_csv(tables))
    print(f"stage={report.stage} nrr={counts.nrr} nir={counts.nir} nrn={counts.nrn} nin=n/a")
    print(f"precision={report.precision:.4f} recall={report.recall:.4f} f_score={report.f_score:.4f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        grid_raw = json.loads(Path(args.grid).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read grid file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not isinstance(grid_raw, list) or not grid_raw:
        print("error: grid must be a non-empty JSON array", file=sys.stderr)
        return EXIT_USAGE
    seen = set()
    configs = []
    duplicates = 0
    for point in grid_raw:
        key = (point["p1"], point["p2"], point["m1"], point["m2"], point["m3"])
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        configs.append(GroupingConfig(p1=point["p1"], p2=point["p2"], m1=point["m1"],
                                      m2=point["m2"], m3=point["m3"],
                                      list_size=point.get("list_size", 30)))
    if duplicates:
        print(f"warning: {duplicates} duplicate grid point(s) ignored", file=sys.stderr)

    engine = load_engine(args.data_dir)
    if engine.last_params is None:
        print("error: no cycle has been run on this data dir", file=sys.stderr)
        return EXIT_DATA

    def run_one(cfg: GroupingConfig):
        lists = engine.generate_for_config(cfg)
        _, report = ev.evaluate_history(lists, engine.borrowed_in_window, cfg)
        return report

    rows = ev.sweep(configs, run_one)
    write_text(Path(args.out), ev.sweep_csv(rows))
    best_cfg, best = max(rows, key=lambda r: r[1].f_score)
    print(f"{len(rows)} configs -> {args.out}")
    print(f"best: p1={best_cfg.p1:g} p2={best_cfg.p2:g} m={best_cfg.m1},{best_cfg.m2},{best_cfg.m3} "
          f"f_score={best.f_score:.4f}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from tagrec.service import create_app, load_service_config

    config = load_service_config(args.config, data_dir=str(args.data_dir), listen=args.listen)
    app = create_app(config)
    host, _, port = config.listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SynthSpec(users=args.users, distractors=args.items, seed=args.seed)
    corpus = generate_corpus(spec)
    save_corpus(corpus, args.data_dir)
    print(f"synthetic corpus: {len(corpus.books)} books, {len(corpus.documents)} documents, "
          f"{len(corpus.loans)} loans, {len(corpus.user_ids())} users -> {args.data_dir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "cycle": cmd_cycle,
        "evaluate": cmd_evaluate,
        "sweep": cmd_sweep,
        "serve": cmd_serve,
        "synth": cmd_synth,
    }
    try:
        return handlers[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TagRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
