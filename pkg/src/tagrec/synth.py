"""Seeded synthetic corpus with planted tag affinities.

Each regular user borrows twelve books drawn from a user-private tag pool
whose co-occurrence counts are engineered so that, under natural-log TF-IDF,
tag weights land at fixed percentages of the profile maximum:

    core tags   (in 4 of 12 books)  -> 100.0% of max weight
    bridge tags (in 8 of 12 books)  ->  73.8%
    mid tag     (in 9 of 12 books)  ->  58.9%
    low tag     (in 10 of 12 books) ->  41.5%

Every borrowed book carries exactly three core tags plus at least one bridge
tag, so it reaches four group-1 tags only when group 1 opens at 70% and the
minimum is four.  Stricter thresholds demote the bridge tags to group 2 and
strand the books at three group-1 matches; looser minimums additionally pick
up the never-borrowed distractors that share exactly three core tags.  The
70/40 split with minimums 4/5/5 is therefore the unique sweep optimum.

Tag pools are disjoint across users, so the only high-cosine pair is the
zero-loan user seeded from the first user's course period (similarity 1.0),
which exercises collaborative injection.  A second zero-loan user sits in a
course period without loans and stays unresolvable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import date, timedelta

from tagrec.ingest import BookRecord, Corpus, DocumentRecord, Enrollment, LoanEvent
from tagrec.recommend import GroupingConfig

BOOKS_PER_USER = 12
DOCS_PER_USER = 2
CORE_TAGS = 9          # three triples, one triple per book, each in 4 books
BRIDGE_SPAN = 8        # each of the two bridge tags covers 8 books

PLANTED_CONFIG = GroupingConfig(p1=70.0, p2=40.0, m1=4, m2=5, m3=5)

STOPWORDS = ["the", "and", "of", "to", "de", "da", "do", "que", "was", "this"]


@dataclass(frozen=True)
class SynthSpec:
    users: int = 6
    distractors: int = 36
    seed: int = 42
    start: date = date(2014, 1, 1)


def _book_tag_layout(book_idx: int) -> tuple[list[int], list[int], bool, bool]:
    """Index layout for one of the twelve borrowed books."""
    triple = book_idx % 3
    core = [3 * triple, 3 * triple + 1, 3 * triple + 2]
    bridges = []
    if book_idx < BRIDGE_SPAN:
        bridges.append(0)
    if book_idx >= BOOKS_PER_USER - BRIDGE_SPAN:
        bridges.append(1)
    has_mid = book_idx < 9
    has_low = book_idx < 10
    return core, bridges, has_mid, has_low


def generate_corpus(spec: SynthSpec) -> Corpus:
    rng = random.Random(spec.seed)
    nonce = f"{rng.randrange(16 ** 6):06x}"

    books: dict[str, BookRecord] = {}
    documents: dict[str, DocumentRecord] = {}
    loans: list[LoanEvent] = []
    enrollments: list[Enrollment] = []

    def add_book(code: str, title: str, tags: list[str]) -> None:
        books[code] = BookRecord(code, title, " ".join(tags), "synth")

    for u in range(spec.users):
        user_id = f"user{u:02d}"
        course_id = f"course{u:02d}"
        core = [f"core{k}u{u}x{nonce}" for k in range(CORE_TAGS)]
        bridge = [f"bridge{k}u{u}x{nonce}" for k in range(2)]
        mid = f"mid0u{u}x{nonce}"
        low = f"low0u{u}x{nonce}"

        enrollments.append(Enrollment(user_id, course_id, 1, spec.start))
        for j in range(BOOKS_PER_USER):
            core_idx, bridge_idx, has_mid, has_low = _book_tag_layout(j)
            tags = [core[k] for k in core_idx] + [bridge[k] for k in bridge_idx]
            if has_mid:
                tags.append(mid)
            if has_low:
                tags.append(low)
            code = f"B{u:02d}{j:02d}"
            add_book(code, f"Borrowed {u}-{j}", tags)
            loans.append(LoanEvent(
                user_id=user_id,
                collection_code=code,
                loan_date=spec.start + timedelta(days=j + 1),
                department_code=f"dep{u:02d}",
                course_id=course_id,
                period_index=1,
            ))

        for d in range(DOCS_PER_USER):
            doc_id = f"D{u:02d}{d:02d}"
            doc_tags = [core[k] for k in (0, 1, 2, 3)] + [f"docjunk{d}u{u}x{nonce}"]
            documents[doc_id] = DocumentRecord(
                document_id=doc_id,
                title=" ".join(doc_tags),
                keywords_raw="",
                abstract_raw="",
                authors_raw="",
                detail_url=f"https://repo.example.org/items/{doc_id}",
            )

    # distractors: never borrowed, share exactly one core triple with one user
    for d in range(spec.distractors):
        u = d % spec.users
        triple = (d // spec.users) % 3
        core = [f"core{k}u{u}x{nonce}" for k in range(3 * triple, 3 * triple + 3)]
        junk = [f"noise{d}k{k}x{nonce}" for k in range(3)]
        add_book(f"X{d:04d}", f"Distractor {d}", core + junk)

    # cold-start user: no loans, enrolled where user00 loans live
    enrollments.append(Enrollment("usercold", "course00", 1, spec.start))
    # unresolvable user: no loans, enrolled in a period with no loans at all
    enrollments.append(Enrollment("userorphan", "coursevoid", 1, spec.start))

    loans.sort(key=lambda e: e.loan_date)
    return Corpus(
        books=books,
        documents=documents,
        loans=loans,
        enrollments=sorted(enrollments, key=lambda e: (e.user_id, e.as_of_date)),
        stopwords=frozenset(STOPWORDS),
    )
