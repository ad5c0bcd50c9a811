"""Cycle orchestration and event-sourced state.

All mutable state (ratings, irrelevant lists, sessions, generated lists) is a
pure fold over the corpus plus the append-only event log: replaying the log
against the same corpus reproduces the state exactly.  Every nondeterministic
input (timestamps, minted tokens) is recorded inside its event, so the fold
itself is deterministic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import date

from tagrec.errors import ColdStartUnresolvable, DataError
from tagrec.evaluate import FeedbackRating
from tagrec.ingest import Corpus
from tagrec.preprocess import NormalizerConfig
from tagrec.profile import (
    CorpusStats,
    IrrelevantTagList,
    ItemTagSet,
    WeightedTagList,
    WeightingConfig,
    apply_irrelevant,
    build_area_profile,
    enrollment_at,
    item_tag_index,
    reallocate_tag,
    seed_from_area,
    stats_for_loans,
    weights_from_stats,
    window_bounds,
)
from tagrec.recommend import GroupingConfig, RecommendationList, generate
from tagrec.similarity import CfConfig, SimilarityMatrix, build_matrix


@dataclass(frozen=True)
class CycleParams:
    """Everything a cycle needs beyond the corpus; serialized into the event."""

    as_of: date
    weighting: WeightingConfig = WeightingConfig()
    grouping: GroupingConfig = GroupingConfig()
    cf: CfConfig = CfConfig()
    min_token_length: int = 2
    preserved_characters: str = "+#"
    stemming_enabled: bool = False

    def to_json_obj(self) -> dict:
        return {
            "as_of": self.as_of.isoformat(),
            "weighting": {"idf_mode": self.weighting.idf_mode,
                          "window_days": self.weighting.window_days},
            "grouping": {"p1": self.grouping.p1, "p2": self.grouping.p2,
                         "m1": self.grouping.m1, "m2": self.grouping.m2,
                         "m3": self.grouping.m3, "list_size": self.grouping.list_size},
            "cf": {"similarity_threshold": self.cf.similarity_threshold},
            "normalizer": {"min_token_length": self.min_token_length,
                           "preserved_characters": self.preserved_characters,
                           "stemming_enabled": self.stemming_enabled},
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "CycleParams":
        norm = obj.get("normalizer", {})
        return CycleParams(
            as_of=date.fromisoformat(obj["as_of"]),
            weighting=WeightingConfig(**obj["weighting"]),
            grouping=GroupingConfig(**obj["grouping"]),
            cf=CfConfig(**obj["cf"]),
            min_token_length=norm.get("min_token_length", 2),
            preserved_characters=norm.get("preserved_characters", "+#"),
            stemming_enabled=norm.get("stemming_enabled", False),
        )


@dataclass
class FeedbackSession:
    token: str
    user_id: str
    created_at: str
    expires_at: str
    cycle_seq: int


@dataclass
class CycleSummary:
    seq: int
    users: int
    lists: int
    mean_list_length: float
    skipped_cold_start: list[str] = field(default_factory=list)


def mint_token(secret: str, user_id: str, cycle_seq: int) -> str:
    digest = hashlib.sha256(f"{secret}:{user_id}:{cycle_seq}".encode()).hexdigest()
    return digest[:32]


class Engine:
    """In-memory state machine; mutate only through apply_event."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self.ratings: list[FeedbackRating] = []
        self.irrelevant: dict[str, IrrelevantTagList] = {}
        self.sessions: dict[str, FeedbackSession] = {}
        self.profiles: dict[str, WeightedTagList] = {}
        self.area_profiles: dict[tuple[str, int], WeightedTagList] = {}
        self.lists: dict[str, RecommendationList] = {}
        self.matrix: SimilarityMatrix | None = None
        self.item_index: dict[tuple[str, str], ItemTagSet] = {}
        self.weight_stats: dict[str, CorpusStats] = {}
        self.borrowed_in_window: dict[str, set[str]] = {}
        self.cycle_seq = 0
        self.last_params: CycleParams | None = None
        self.last_summary: CycleSummary | None = None
        # pre-cycle item lookups (ratings can arrive only after a cycle, but
        # the default index keeps score-0 folding total)
        self._default_norm = NormalizerConfig(stopwords=corpus.stopwords)
        self.item_index = item_tag_index(corpus, self._default_norm)

    # -- event fold --------------------------------------------------------

    def apply_event(self, event: dict) -> None:
        kind = event.get("type")
        if kind == "rating":
            self._apply_rating(event)
        elif kind == "reallocate":
            self._apply_reallocate(event)
        elif kind == "cycle":
            params = CycleParams.from_json_obj(event["params"])
            self._run_cycle(int(event["seq"]), params)
        elif kind == "session":
            self.sessions[event["token"]] = FeedbackSession(
                token=event["token"],
                user_id=event["user_id"],
                created_at=event["created_at"],
                expires_at=event["expires_at"],
                cycle_seq=int(event["cycle_seq"]),
            )
        else:
            raise DataError(f"unknown event type: {kind!r}")

    def replay(self, events: list[dict]) -> None:
        for event in events:
            self.apply_event(event)

    def _apply_rating(self, event: dict) -> None:
        rating = FeedbackRating(
            user_id=event["user_id"],
            item_id=event["item_id"],
            item_kind=event["item_kind"],
            score=int(event["score"]),
            rated_at=event.get("rated_at", ""),
        )
        self.ratings.append(rating)
        if rating.score == 0:
            item = self.item_index.get((rating.item_id, rating.item_kind))
            if item is not None:
                profile = self.profiles.setdefault(
                    rating.user_id, WeightedTagList(owner=rating.user_id))
                irrelevant = self.irrelevant.setdefault(
                    rating.user_id, IrrelevantTagList(owner=rating.user_id))
                apply_irrelevant(profile, irrelevant, item)

    def _apply_reallocate(self, event: dict) -> None:
        user_id = event["user_id"]
        profile = self.profiles.setdefault(user_id, WeightedTagList(owner=user_id))
        irrelevant = self.irrelevant.setdefault(user_id, IrrelevantTagList(owner=user_id))
        stats = self.weight_stats.get(user_id, CorpusStats())
        weighting = self.last_params.weighting if self.last_params else WeightingConfig()
        reallocate_tag(profile, irrelevant, event["tag"], event["direction"], stats, weighting)

    # -- cycle -------------------------------------------------------------

    def _run_cycle(self, seq: int, params: CycleParams) -> CycleSummary:
        norm = NormalizerConfig(
            stopwords=self.corpus.stopwords,
            min_token_length=params.min_token_length,
            preserved_characters=params.preserved_characters,
            stemming_enabled=params.stemming_enabled,
        )
        self.item_index = item_tag_index(self.corpus, norm)
        book_tags = {item_id: tags.tags for (item_id, kind), tags in self.item_index.items()
                     if kind == "book"}
        window = window_bounds(params.as_of, params.weighting)
        start, end = window
        in_window = [e for e in self.corpus.loans if start <= e.loan_date <= end]

        self.borrowed_in_window = {}
        loans_by_user: dict[str, list] = {}
        for event in in_window:
            loans_by_user.setdefault(event.user_id, []).append(event)
            self.borrowed_in_window.setdefault(event.user_id, set()).add(event.collection_code)

        users = self.corpus.user_ids()
        self.profiles = {}
        self.weight_stats = {}
        for user in users:
            irrelevant = self.irrelevant.setdefault(user, IrrelevantTagList(owner=user))
            stats = stats_for_loans(loans_by_user.get(user, []), book_tags)
            self.weight_stats[user] = stats
            entries = {}
            if stats.total_term_occurrences > 0:
                entries = weights_from_stats(stats, params.weighting, exclude=irrelevant.tags)
            self.profiles[user] = WeightedTagList(owner=user, entries=entries, window=window)

        # area lists per (course, period) seen in enrollments, for cold-start seeding
        pairs = sorted({(e.course_id, e.period_index) for e in self.corpus.enrollments})
        self.area_profiles = {}
        area_stats: dict[tuple[str, int], CorpusStats] = {}
        for course_id, period_index in pairs:
            area_loans = []
            for event in in_window:
                enr = enrollment_at(self.corpus.enrollments, event.user_id, event.loan_date)
                if enr is not None and (enr.course_id, enr.period_index) == (course_id, period_index):
                    area_loans.append(event)
            stats = stats_for_loans(area_loans, book_tags)
            area_stats[(course_id, period_index)] = stats
            entries = {}
            if stats.total_term_occurrences > 0:
                entries = weights_from_stats(stats, params.weighting)
            self.area_profiles[(course_id, period_index)] = WeightedTagList(
                owner=f"{course_id}/{period_index}", entries=entries, window=window)

        for user in users:
            profile = self.profiles[user]
            if not profile.is_empty():
                continue
            enr = enrollment_at(self.corpus.enrollments, user, params.as_of)
            if enr is None:
                continue
            area = self.area_profiles.get((enr.course_id, enr.period_index))
            if area is None:
                continue
            seeded = seed_from_area(profile, area)
            for tag in self.irrelevant[user].tags:
                seeded.entries.pop(tag, None)
            if not seeded.is_empty():
                self.profiles[user] = seeded
                self.weight_stats[user] = area_stats[(enr.course_id, enr.period_index)]

        self.matrix = build_matrix(self.profiles, built_at=params.as_of.isoformat())

        rated_by_user: dict[str, set[tuple[str, str]]] = {}
        for rating in self.ratings:
            rated_by_user.setdefault(rating.user_id, set()).add((rating.item_id, rating.item_kind))

        self.lists = {}
        skipped = []
        for user in users:
            try:
                self.lists[user] = generate(
                    user, self.profiles, self.irrelevant, self.item_index,
                    self.borrowed_in_window, self.matrix, params.grouping, params.cf,
                    rated=rated_by_user.get(user, set()),
                    generated_at=params.as_of.isoformat(),
                )
            except ColdStartUnresolvable:
                skipped.append(user)

        self.cycle_seq = seq
        self.last_params = params
        total_items = sum(len(lst.items) for lst in self.lists.values())
        self.last_summary = CycleSummary(
            seq=seq,
            users=len(users),
            lists=len(self.lists),
            mean_list_length=total_items / len(self.lists) if self.lists else 0.0,
            skipped_cold_start=skipped,
        )
        return self.last_summary

    # -- read views --------------------------------------------------------

    def default_as_of(self) -> date:
        if not self.corpus.loans:
            raise DataError("corpus has no loans; cannot derive a cycle date")
        return max(e.loan_date for e in self.corpus.loans)

    def generate_for_config(self, grouping: GroupingConfig) -> dict[str, RecommendationList]:
        """Regenerate every user's list under an alternate grouping config
        without disturbing the folded state (used by the sweep)."""
        if self.last_params is None:
            raise DataError("no cycle has been run")
        rated_by_user: dict[str, set[tuple[str, str]]] = {}
        for rating in self.ratings:
            rated_by_user.setdefault(rating.user_id, set()).add((rating.item_id, rating.item_kind))
        lists = {}
        for user in self.corpus.user_ids():
            try:
                lists[user] = generate(
                    user, self.profiles, self.irrelevant, self.item_index,
                    self.borrowed_in_window, self.matrix, grouping, self.last_params.cf,
                    rated=rated_by_user.get(user, set()),
                    generated_at=self.last_params.as_of.isoformat(),
                )
            except ColdStartUnresolvable:
                continue
        return lists

    def tag_lists_for(self, user_id: str) -> dict:
        profile = self.profiles.get(user_id)
        irrelevant = self.irrelevant.get(user_id)
        relevant = []
        if profile is not None:
            relevant = [{"tag": t, "weight": w} for t, w in sorted(profile.entries.items())]
        return {
            "relevant_tags": relevant,
            "irrelevant_tags": sorted(irrelevant.tags) if irrelevant else [],
        }

    def profiles_snapshot(self) -> dict:
        return {
            "cycle_seq": self.cycle_seq,
            "users": {
                user: {
                    "entries": {t: w for t, w in sorted(p.entries.items())},
                    "window": [p.window[0].isoformat(), p.window[1].isoformat()] if p.window else None,
                    "irrelevant": sorted(self.irrelevant[user].tags) if user in self.irrelevant else [],
                }
                for user, p in sorted(self.profiles.items())
            },
            "areas": {
                f"{course}/{period}": {t: w for t, w in sorted(p.entries.items())}
                for (course, period), p in sorted(self.area_profiles.items())
            },
        }

    def lists_json_obj(self) -> dict:
        return {user: self.lists[user].to_json_obj() for user in sorted(self.lists)}


def load_engine(data_dir) -> Engine:
    """Rebuild the full engine state from a data directory (corpus + log)."""
    from tagrec.store import load_corpus, read_events

    engine = Engine(load_corpus(data_dir))
    engine.replay(read_events(data_dir))
    return engine
