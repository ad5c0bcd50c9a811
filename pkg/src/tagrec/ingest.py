"""Dataset loaders: books, repository documents, loans, enrollments, stopwords.

Inputs are CSV (RFC-4180) or JSON-lines, selected by flag.  Every loader is
deterministic and total: each input row either yields a record or a reject
entry naming the row and reason, so accepted + rejected = input rows.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from urllib.parse import urlparse

from tagrec.errors import DataError
from tagrec.preprocess import fold_accents

BOOK_FIELDS = ["collection_code", "title", "keywords", "classification"]
DOCUMENT_FIELDS = ["document_id", "title", "keywords", "abstract", "authors", "detail_url"]
LOAN_FIELDS = ["user_id", "collection_code", "loan_date", "department_code", "course_id", "period_index"]
ENROLLMENT_FIELDS = ["user_id", "course_id", "period_index", "as_of_date"]


@dataclass(frozen=True)
class BookRecord:
    collection_code: str
    title: str
    keywords_raw: str
    classification: str


@dataclass(frozen=True)
class DocumentRecord:
    document_id: str
    title: str
    keywords_raw: str
    abstract_raw: str
    authors_raw: str
    detail_url: str


@dataclass(frozen=True)
class LoanEvent:
    user_id: str
    collection_code: str
    loan_date: date
    department_code: str
    course_id: str
    period_index: int


@dataclass(frozen=True)
class Enrollment:
    user_id: str
    course_id: str
    period_index: int
    as_of_date: date


@dataclass(frozen=True)
class Reject:
    row: int
    reason: str


@dataclass
class LoadReport:
    """Outcome of one loader run: records plus the rejects/duplicates audit."""

    records: list
    rejects: list[Reject] = field(default_factory=list)
    duplicates: int = 0

    @property
    def accepted(self) -> int:
        return len(self.records) + self.duplicates


def _iter_rows(path: Path, fmt: str, fields: list[str]):
    """Yield (row_number, dict) pairs; row numbers are 1-based data rows."""
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != fields:
                raise DataError(f"{path}: malformed header, expected {','.join(fields)}")
            for i, row in enumerate(reader, start=1):
                yield i, {k: (v if v is not None else "") for k, v in row.items() if k is not None}
    elif fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for i, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    yield i, None
                    continue
                yield i, {k: ("" if obj.get(k) is None else str(obj.get(k))) for k in fields}
    else:
        raise DataError(f"unknown input format: {fmt}")


def _parse_date(value: str) -> date | None:
    try:
        return date.fromisoformat(value.strip())
    except (ValueError, AttributeError):
        return None


def _url_ok(value: str) -> bool:
    if not value:
        return True
    parsed = urlparse(value)
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


def load_books(path: str | Path, fmt: str = "csv") -> LoadReport:
    """Load book records; duplicate collection codes are last-write-wins."""
    by_code: dict[str, BookRecord] = {}
    rejects: list[Reject] = []
    duplicates = 0
    for row_no, row in _iter_rows(Path(path), fmt, BOOK_FIELDS):
        if row is None:
            rejects.append(Reject(row_no, "unparseable_row"))
            continue
        code = row.get("collection_code", "").strip()
        title = row.get("title", "").strip()
        if not code:
            rejects.append(Reject(row_no, "missing_collection_code"))
            continue
        if not title:
            rejects.append(Reject(row_no, "empty_title"))
            continue
        if code in by_code:
            duplicates += 1
        by_code[code] = BookRecord(
            collection_code=code,
            title=title,
            keywords_raw=row.get("keywords", ""),
            classification=row.get("classification", ""),
        )
    return LoadReport(records=list(by_code.values()), rejects=rejects, duplicates=duplicates)


def load_documents(path: str | Path, fmt: str = "csv") -> LoadReport:
    by_id: dict[str, DocumentRecord] = {}
    rejects: list[Reject] = []
    duplicates = 0
    for row_no, row in _iter_rows(Path(path), fmt, DOCUMENT_FIELDS):
        if row is None:
            rejects.append(Reject(row_no, "unparseable_row"))
            continue
        doc_id = row.get("document_id", "").strip()
        title = row.get("title", "").strip()
        url = row.get("detail_url", "").strip()
        if not doc_id:
            rejects.append(Reject(row_no, "missing_document_id"))
            continue
        if not title:
            rejects.append(Reject(row_no, "empty_title"))
            continue
        if not _url_ok(url):
            rejects.append(Reject(row_no, "malformed_detail_url"))
            continue
        if doc_id in by_id:
            duplicates += 1
        by_id[doc_id] = DocumentRecord(
            document_id=doc_id,
            title=title,
            keywords_raw=row.get("keywords", ""),
            abstract_raw=row.get("abstract", ""),
            authors_raw=row.get("authors", ""),
            detail_url=url,
        )
    return LoadReport(records=list(by_id.values()), rejects=rejects, duplicates=duplicates)


def load_loans(path: str | Path, fmt: str, known_books: set[str]) -> LoadReport:
    """Load loan events; collection codes must resolve to an ingested book."""
    records: list[LoanEvent] = []
    rejects: list[Reject] = []
    for row_no, row in _iter_rows(Path(path), fmt, LOAN_FIELDS):
        if row is None:
            rejects.append(Reject(row_no, "unparseable_row"))
            continue
        user = row.get("user_id", "").strip()
        code = row.get("collection_code", "").strip()
        when = _parse_date(row.get("loan_date", ""))
        if not user:
            rejects.append(Reject(row_no, "missing_user_id"))
            continue
        if when is None:
            rejects.append(Reject(row_no, "bad_loan_date"))
            continue
        if code not in known_books:
            rejects.append(Reject(row_no, "unknown_collection_code"))
            continue
        try:
            period = int(row.get("period_index", "").strip() or "0")
        except ValueError:
            period = 0
        if period < 1:
            rejects.append(Reject(row_no, "bad_period_index"))
            continue
        records.append(LoanEvent(
            user_id=user,
            collection_code=code,
            loan_date=when,
            department_code=row.get("department_code", "").strip(),
            course_id=row.get("course_id", "").strip(),
            period_index=period,
        ))
    records.sort(key=lambda e: e.loan_date)  # stable: ties keep input order
    return LoadReport(records=records, rejects=rejects)


def load_enrollments(path: str | Path, fmt: str = "csv") -> LoadReport:
    by_key: dict[tuple[str, date], Enrollment] = {}
    rejects: list[Reject] = []
    duplicates = 0
    for row_no, row in _iter_rows(Path(path), fmt, ENROLLMENT_FIELDS):
        if row is None:
            rejects.append(Reject(row_no, "unparseable_row"))
            continue
        user = row.get("user_id", "").strip()
        course = row.get("course_id", "").strip()
        when = _parse_date(row.get("as_of_date", ""))
        if not user or not course:
            rejects.append(Reject(row_no, "missing_user_or_course"))
            continue
        if when is None:
            rejects.append(Reject(row_no, "bad_as_of_date"))
            continue
        try:
            period = int(row.get("period_index", "").strip() or "0")
        except ValueError:
            period = 0
        if period < 1:
            rejects.append(Reject(row_no, "bad_period_index"))
            continue
        key = (user, when)
        if key in by_key:
            duplicates += 1
        by_key[key] = Enrollment(user_id=user, course_id=course, period_index=period, as_of_date=when)
    return LoadReport(records=list(by_key.values()), rejects=rejects, duplicates=duplicates)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line, UTF-8, '#' comments; entries are folded + lowercased."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            token = line.split("#", 1)[0].strip()
            if token:
                words.add(fold_accents(token).lower())
    return frozenset(words)


@dataclass
class Corpus:
    """The canonical in-memory dataset; immutable once assembled."""

    books: dict[str, BookRecord]
    documents: dict[str, DocumentRecord]
    loans: list[LoanEvent]
    enrollments: list[Enrollment]
    stopwords: frozenset[str]

    def user_ids(self) -> list[str]:
        users = {e.user_id for e in self.loans} | {e.user_id for e in self.enrollments}
        return sorted(users)


def assemble(books: LoadReport, documents: LoadReport, loans: LoadReport,
             enrollments: LoadReport, stopwords: frozenset[str]) -> Corpus:
    return Corpus(
        books={b.collection_code: b for b in books.records},
        documents={d.document_id: d for d in documents.records},
        loans=list(loans.records),
        enrollments=sorted(enrollments.records, key=lambda e: (e.user_id, e.as_of_date)),
        stopwords=stopwords,
    )
