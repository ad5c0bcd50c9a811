"""Weighted tag profiles: the adapted TF-IDF over loan history.

A user's profile is the TF-IDF-weighted tag list computed over the tag sets
of the books they borrowed inside a sliding date window, minus the tags they
have marked irrelevant.  Area profiles apply the same weighting to the loans
of everyone enrolled in one (course, period).  Item tag sets stay binary and
unweighted throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, timedelta

from tagrec.errors import EmptyWindowError, NotFoundError, UnknownTermError
from tagrec.ingest import Corpus, Enrollment, LoanEvent
from tagrec.preprocess import NormalizerConfig, extract_tags

IDF_NATURAL_LOG = "natural_log"
IDF_PAPER_EXAMPLE = "paper_example"

TO_IRRELEVANT = "to_irrelevant"
TO_RELEVANT = "to_relevant"

# default covers roughly seventeen months of loan history
DEFAULT_WINDOW_DAYS = 518


@dataclass(frozen=True)
class ItemTagSet:
    """Binary tag set of one catalog item; immutable."""

    item_id: str
    item_kind: str  # "book" | "document"
    tags: frozenset[str]


@dataclass(frozen=True)
class WeightingConfig:
    idf_mode: str = IDF_NATURAL_LOG
    window_days: int = DEFAULT_WINDOW_DAYS

    def __post_init__(self):
        if self.idf_mode not in (IDF_NATURAL_LOG, IDF_PAPER_EXAMPLE):
            raise ValueError(f"unknown idf_mode: {self.idf_mode}")
        if self.window_days <= 0:
            raise ValueError("window_days must be positive")


@dataclass
class CorpusStats:
    """Counting state behind the weighting: one instance per profile owner."""

    total_books_in_window: int = 0
    books_containing_term: dict[str, int] = field(default_factory=dict)
    term_occurrences: dict[str, int] = field(default_factory=dict)
    total_term_occurrences: int = 0

    def add_item(self, tags: frozenset[str]) -> None:
        """Count one borrowed-book occurrence (a re-loan counts again)."""
        self.total_books_in_window += 1
        for t in tags:
            self.books_containing_term[t] = self.books_containing_term.get(t, 0) + 1
            self.term_occurrences[t] = self.term_occurrences.get(t, 0) + 1
            self.total_term_occurrences += 1


@dataclass
class WeightedTagList:
    owner: str
    entries: dict[str, float] = field(default_factory=dict)
    window: tuple[date, date] | None = None

    def is_empty(self) -> bool:
        return not self.entries


@dataclass
class IrrelevantTagList:
    owner: str
    tags: set[str] = field(default_factory=set)


def compute_tf(term: str, stats: CorpusStats) -> float:
    """Occurrences of the term across all counted books over total occurrences."""
    if stats.total_term_occurrences <= 0:
        raise EmptyWindowError("no term occurrences in window")
    return stats.term_occurrences.get(term, 0) / stats.total_term_occurrences


def compute_idf(term: str, stats: CorpusStats, config: WeightingConfig) -> float:
    n_t = stats.books_containing_term.get(term, 0)
    if n_t <= 0:
        raise UnknownTermError(term)
    ratio = stats.total_books_in_window / n_t
    if config.idf_mode == IDF_PAPER_EXAMPLE:
        return ratio
    return math.log(ratio)


def compute_tfidf(term: str, stats: CorpusStats, config: WeightingConfig) -> float:
    tf = compute_tf(term, stats)
    if tf == 0.0:
        return 0.0
    return tf * compute_idf(term, stats, config)


def item_tag_index(corpus: Corpus, norm: NormalizerConfig) -> dict[tuple[str, str], ItemTagSet]:
    """Extract every catalog item's binary tag set, keyed by (item_id, kind).

    Books contribute their keyword blob; repository documents contribute
    title, keywords, abstract and authors.
    """
    index: dict[tuple[str, str], ItemTagSet] = {}
    for code, book in corpus.books.items():
        index[(code, "book")] = ItemTagSet(code, "book", extract_tags(book.keywords_raw, norm))
    for doc_id, doc in corpus.documents.items():
        blob = " ".join([doc.title, doc.keywords_raw, doc.abstract_raw, doc.authors_raw])
        index[(doc_id, "document")] = ItemTagSet(doc_id, "document", extract_tags(blob, norm))
    return index


def window_bounds(as_of: date, config: WeightingConfig) -> tuple[date, date]:
    return as_of - timedelta(days=config.window_days), as_of


def _loans_in_window(loans: list[LoanEvent], window: tuple[date, date]) -> list[LoanEvent]:
    start, end = window
    return [e for e in loans if start <= e.loan_date <= end]


def stats_for_loans(loans: list[LoanEvent],
                    book_tags: dict[str, frozenset[str]]) -> CorpusStats:
    stats = CorpusStats()
    for event in loans:
        tags = book_tags.get(event.collection_code)
        if tags is not None:
            stats.add_item(tags)
    return stats


def weights_from_stats(stats: CorpusStats, config: WeightingConfig,
                        exclude: set[str] | frozenset[str] = frozenset()) -> dict[str, float]:
    weights = {}
    for term in sorted(stats.books_containing_term):
        if term in exclude:
            continue
        weights[term] = compute_tfidf(term, stats, config)
    return weights


def build_user_profile(user_id: str, loans: list[LoanEvent],
                       book_tags: dict[str, frozenset[str]],
                       config: WeightingConfig, window: tuple[date, date],
                       irrelevant: set[str] | frozenset[str] = frozenset()) -> WeightedTagList:
    """TF-IDF profile over the user's in-window loans; zero loans -> empty list."""
    own = [e for e in _loans_in_window(loans, window) if e.user_id == user_id]
    stats = stats_for_loans(own, book_tags)
    if stats.total_term_occurrences == 0:
        return WeightedTagList(owner=user_id, window=window)
    return WeightedTagList(
        owner=user_id,
        entries=weights_from_stats(stats, config, exclude=irrelevant),
        window=window,
    )


def enrollment_at(enrollments: list[Enrollment], user_id: str, on: date) -> Enrollment | None:
    """The user's enrollment active on a date: latest as_of_date <= on."""
    active = None
    for e in enrollments:
        if e.user_id == user_id and e.as_of_date <= on:
            if active is None or e.as_of_date > active.as_of_date:
                active = e
    return active


def build_area_profile(course_id: str, period_index: int,
                       loans: list[LoanEvent], enrollments: list[Enrollment],
                       book_tags: dict[str, frozenset[str]],
                       config: WeightingConfig, window: tuple[date, date]) -> WeightedTagList:
    """TF-IDF over books loaned, inside the window, by users enrolled in the
    (course, period) at each loan's date."""
    owner = f"{course_id}/{period_index}"
    in_window = _loans_in_window(loans, window)
    area_loans = []
    for event in in_window:
        enr = enrollment_at(enrollments, event.user_id, event.loan_date)
        if enr is not None and enr.course_id == course_id and enr.period_index == period_index:
            area_loans.append(event)
    stats = stats_for_loans(area_loans, book_tags)
    if stats.total_term_occurrences == 0:
        return WeightedTagList(owner=owner, window=window)
    return WeightedTagList(owner=owner, entries=weights_from_stats(stats, config), window=window)


def seed_from_area(profile: WeightedTagList, area: WeightedTagList) -> WeightedTagList:
    """Copy the area list (weights included) into an empty user profile."""
    if not profile.is_empty():
        return profile
    return WeightedTagList(owner=profile.owner, entries=dict(area.entries), window=profile.window)


def apply_irrelevant(profile: WeightedTagList, irrelevant: IrrelevantTagList,
                     item: ItemTagSet) -> None:
    """Feedback score 0 on an item: all its tags become irrelevant and leave
    the profile.  Idempotent."""
    irrelevant.tags.update(item.tags)
    for tag in item.tags:
        profile.entries.pop(tag, None)


def reallocate_tag(profile: WeightedTagList, irrelevant: IrrelevantTagList,
                   tag: str, direction: str, stats: CorpusStats,
                   config: WeightingConfig) -> None:
    """Move a tag between the relevant and irrelevant lists.

    Moving to_relevant recomputes the weight from the current window stats
    rather than restoring a cached value; a tag absent from the window's
    books comes back with no profile entry (its weight would be zero).
    """
    if direction == TO_IRRELEVANT:
        if tag not in profile.entries:
            raise NotFoundError(f"tag not in relevant list: {tag}")
        del profile.entries[tag]
        irrelevant.tags.add(tag)
    elif direction == TO_RELEVANT:
        if tag not in irrelevant.tags:
            raise NotFoundError(f"tag not in irrelevant list: {tag}")
        irrelevant.tags.discard(tag)
        if stats.books_containing_term.get(tag, 0) > 0:
            profile.entries[tag] = compute_tfidf(tag, stats, config)
    else:
        raise ValueError(f"unknown direction: {direction}")
