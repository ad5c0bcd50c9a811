"""Two-stage evaluation harness plus the grouping-parameter sweep.

History stage: recommended books versus the user's (distinct) borrowed books.
Feedback stage: explicit 0-3 ratings cross-tabulated against borrowed status;
since every rated item was on a list, the borrowed axis stands in for the
recommended/not-recommended split.  The not-recommended/not-relevant cell is
structurally present but reported as n/a: lists are generated from loans, so
that quadrant is unobservable.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from tagrec.recommend import GroupingConfig, RecommendationList

STAGE_HISTORY = "history"
STAGE_FEEDBACK = "feedback"


@dataclass
class ConfusionCounts:
    nrr: int = 0  # recommended and borrowed
    nir: int = 0  # recommended, not borrowed
    nrn: int = 0  # not recommended, borrowed
    nin: int | None = None  # unobservable; always reported n/a


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f_score: float
    config: GroupingConfig | None
    stage: str


@dataclass(frozen=True)
class FeedbackRating:
    user_id: str
    item_id: str
    item_kind: str
    score: int
    rated_at: str = ""

    def __post_init__(self):
        if self.score not in (0, 1, 2, 3):
            raise ValueError(f"score must be 0..3, got {self.score}")


def precision(c: ConfusionCounts) -> float:
    denom = c.nrr + c.nir
    return c.nrr / denom if denom > 0 else 0.0


def recall(c: ConfusionCounts) -> float:
    denom = c.nrr + c.nrn
    return c.nrr / denom if denom > 0 else 0.0


def f_score(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if (p + r) > 0 else 0.0


def metrics_from_counts(c: ConfusionCounts, stage: str,
                        config: GroupingConfig | None = None) -> MetricsReport:
    p = precision(c)
    r = recall(c)
    return MetricsReport(precision=p, recall=r, f_score=f_score(p, r), config=config, stage=stage)


def latest_ratings(ratings: list[FeedbackRating]) -> dict[tuple[str, str, str], FeedbackRating]:
    """One rating per (user, item, kind); later entries overwrite earlier."""
    current: dict[tuple[str, str, str], FeedbackRating] = {}
    for r in ratings:
        current[(r.user_id, r.item_id, r.item_kind)] = r
    return current


def evaluate_history(lists: dict[str, RecommendationList],
                     borrowed_by_user: dict[str, set[str]],
                     config: GroupingConfig | None = None) -> tuple[ConfusionCounts, MetricsReport]:
    """Compare each list's book items against the user's distinct borrowed
    books; documents are excluded (loans cover books only)."""
    counts = ConfusionCounts()
    users = sorted(set(lists) | set(borrowed_by_user))
    for user in users:
        borrowed = set(borrowed_by_user.get(user, set()))
        rec_list = lists.get(user)
        recommended = {it.item_id for it in rec_list.items if it.item_kind == "book"} if rec_list else set()
        counts.nrr += len(recommended & borrowed)
        counts.nir += len(recommended - borrowed)
        counts.nrn += len(borrowed - recommended)
    return counts, metrics_from_counts(counts, STAGE_HISTORY, config)


def evaluate_feedback(ratings: list[FeedbackRating],
                      borrowed_by_user: dict[str, set[str]],
                      relevance_cut: int = 1) -> tuple[ConfusionCounts, MetricsReport, dict]:
    """Cross-tabulate rating relevance (score >= cut) against borrowed status.

    Returns the confusion counts, the metrics, and the raw tabulations:
    a per-score histogram and the borrowed x score cross-tab.
    """
    counts = ConfusionCounts()
    histogram = {0: 0, 1: 0, 2: 0, 3: 0}
    crosstab = {(b, s): 0 for b in (True, False) for s in (0, 1, 2, 3)}
    irrelevant_not_borrowed = 0
    for r in latest_ratings(ratings).values():
        borrowed = r.item_kind == "book" and r.item_id in borrowed_by_user.get(r.user_id, set())
        relevant = r.score >= relevance_cut
        histogram[r.score] += 1
        crosstab[(borrowed, r.score)] += 1
        if relevant and borrowed:
            counts.nrr += 1
        elif not relevant and borrowed:
            counts.nir += 1
        elif relevant and not borrowed:
            counts.nrn += 1
        else:
            irrelevant_not_borrowed += 1
    tables = {
        "score_histogram": histogram,
        "borrowed_by_score": crosstab,
        "irrelevant_not_borrowed": irrelevant_not_borrowed,
    }
    return counts, metrics_from_counts(counts, STAGE_FEEDBACK), tables


def confusion_csv(counts: ConfusionCounts, report: MetricsReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["stage", "nrr", "nir", "nrn", "nin", "precision", "recall", "f_score"])
    writer.writerow([
        report.stage, counts.nrr, counts.nir, counts.nrn,
        "n/a" if counts.nin is None else counts.nin,
        f"{report.precision:.6f}", f"{report.recall:.6f}", f"{report.f_score:.6f}",
    ])
    return buf.getvalue()


def score_histogram_csv(tables: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["score", "count"])
    for score in (0, 1, 2, 3):
        writer.writerow([score, tables["score_histogram"][score]])
    return buf.getvalue()


def borrowed_by_score_csv(tables: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["borrowed", "score", "count"])
    for borrowed in (True, False):
        for score in (0, 1, 2, 3):
            writer.writerow([str(borrowed).lower(), score, tables["borrowed_by_score"][(borrowed, score)]])
    return buf.getvalue()


# canonical 25-point grid: five threshold pairs crossed with five minimum triples
DEFAULT_SWEEP_THRESHOLDS = [(90.0, 60.0), (85.0, 55.0), (80.0, 60.0), (80.0, 50.0), (70.0, 40.0)]
DEFAULT_SWEEP_MIN_TRIPLES = [(1, 2, 3), (2, 3, 4), (3, 4, 4), (4, 5, 5), (2, 4, 6)]


def default_sweep_grid(list_size: int = 30) -> list[GroupingConfig]:
    return [
        GroupingConfig(p1=p1, p2=p2, m1=m1, m2=m2, m3=m3, list_size=list_size)
        for (p1, p2) in DEFAULT_SWEEP_THRESHOLDS
        for (m1, m2, m3) in DEFAULT_SWEEP_MIN_TRIPLES
    ]


def sweep(configs: list[GroupingConfig], run_history_eval) -> list[tuple[GroupingConfig, MetricsReport]]:
    """Run the history evaluation once per grouping config.

    `run_history_eval(config)` regenerates lists under that config and
    returns a MetricsReport; rows come back in input order.
    """
    if not configs:
        raise ValueError("sweep requires at least one config")
    return [(cfg, run_history_eval(cfg)) for cfg in configs]


def sweep_csv(rows: list[tuple[GroupingConfig, MetricsReport]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p1", "p2", "m1", "m2", "m3", "precision", "recall", "f_score"])
    for cfg, report in rows:
        writer.writerow([
            f"{cfg.p1:g}", f"{cfg.p2:g}", cfg.m1, cfg.m2, cfg.m3,
            f"{report.precision:.6f}", f"{report.recall:.6f}", f"{report.f_score:.6f}",
        ])
    return buf.getvalue()
