#!/usr/bin/env python3
"""Run the full 25-point grouping-parameter sweep on the planted corpus.

Builds the seeded synthetic corpus, runs one recommendation cycle, then
evaluates every (threshold pair x minimum triple) combination against loan
history and prints the grid with the winning row marked.

Usage:
    python scripts/run_grid_sweep.py [--seed 42] [--out sweep.csv]
"""

import argparse
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tagrec.engine import CycleParams, Engine
from tagrec.evaluate import evaluate_history, sweep_csv, default_sweep_grid
from tagrec.synth import PLANTED_CONFIG, SynthSpec, generate_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--users", type=int, default=6)
    parser.add_argument("--out", default=None, help="where to write sweep.csv")
    args = parser.parse_args()

    corpus = generate_corpus(SynthSpec(users=args.users, seed=args.seed))
    engine = Engine(corpus)
    params = CycleParams(as_of=engine.default_as_of())
    engine.apply_event({"type": "cycle", "seq": 1, "params": params.to_json_obj(), "at": "script"})

    rows = []
    for cfg in default_sweep_grid():
        lists = engine.generate_for_config(cfg)
        _, report = evaluate_history(lists, engine.borrowed_in_window, cfg)
        rows.append((cfg, report))

    out = Path(args.out) if args.out else Path(tempfile.gettempdir()) / "tagrec_sweep.csv"
    out.write_text(sweep_csv(rows), encoding="utf-8")

    planted = (PLANTED_CONFIG.p1, PLANTED_CONFIG.p2, PLANTED_CONFIG.m1,
               PLANTED_CONFIG.m2, PLANTED_CONFIG.m3)
    best = max(r.f_score for _, r in rows)
    print(f"{'p1':>5} {'p2':>5} {'m':>7} {'precision':>10} {'recall':>8} {'f_score':>8}")
    for cfg, report in rows:
        key = (cfg.p1, cfg.p2, cfg.m1, cfg.m2, cfg.m3)
        mark = "  <- planted" if key == planted else ("  <- max" if report.f_score == best else "")
        triple = f"{cfg.m1},{cfg.m2},{cfg.m3}"
        print(f"{cfg.p1:5g} {cfg.p2:5g} {triple:>7} "
              f"{report.precision:10.4f} {report.recall:8.4f} {report.f_score:8.4f}{mark}")
    print(f"\nwrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
