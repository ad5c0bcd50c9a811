"""Data-directory persistence: canonical corpus files, the append-only event
log, and per-cycle state snapshots.

Layout under a data dir:

    corpus/   books.jsonl documents.jsonl loans.jsonl enrollments.jsonl
              stopwords.txt rejects.txt
    events.jsonl
    state/    profiles.json lists.json matrix.csv outbox.txt

The corpus files round-trip through the ingest loaders, so exporting and
re-ingesting yields an equal corpus.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from tagrec.errors import DataError
from tagrec.ingest import (
    Corpus,
    LoadReport,
    assemble,
    load_books,
    load_documents,
    load_enrollments,
    load_loans,
)

CORPUS_DIR = "corpus"
STATE_DIR = "state"
EVENTS_FILE = "events.jsonl"


def _jsonl_dump(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def save_corpus(corpus: Corpus, data_dir: str | Path) -> None:
    root = Path(data_dir) / CORPUS_DIR
    root.mkdir(parents=True, exist_ok=True)
    _jsonl_dump(root / "books.jsonl", [
        {"collection_code": b.collection_code, "title": b.title,
         "keywords": b.keywords_raw, "classification": b.classification}
        for b in sorted(corpus.books.values(), key=lambda b: b.collection_code)
    ])
    _jsonl_dump(root / "documents.jsonl", [
        {"document_id": d.document_id, "title": d.title, "keywords": d.keywords_raw,
         "abstract": d.abstract_raw, "authors": d.authors_raw, "detail_url": d.detail_url}
        for d in sorted(corpus.documents.values(), key=lambda d: d.document_id)
    ])
    _jsonl_dump(root / "loans.jsonl", [
        {"user_id": e.user_id, "collection_code": e.collection_code,
         "loan_date": e.loan_date.isoformat(), "department_code": e.department_code,
         "course_id": e.course_id, "period_index": str(e.period_index)}
        for e in corpus.loans
    ])
    _jsonl_dump(root / "enrollments.jsonl", [
        {"user_id": e.user_id, "course_id": e.course_id,
         "period_index": str(e.period_index), "as_of_date": e.as_of_date.isoformat()}
        for e in corpus.enrollments
    ])
    with open(root / "stopwords.txt", "w", encoding="utf-8") as fh:
        for word in sorted(corpus.stopwords):
            fh.write(word + "\n")


def load_corpus(data_dir: str | Path) -> Corpus:
    root = Path(data_dir) / CORPUS_DIR
    if not root.is_dir():
        raise DataError(f"no ingested corpus under {data_dir} (run ingest first)")
    books = load_books(root / "books.jsonl", "jsonl")
    documents = load_documents(root / "documents.jsonl", "jsonl")
    known = {b.collection_code for b in books.records}
    loans = load_loans(root / "loans.jsonl", "jsonl", known)
    enrollments = load_enrollments(root / "enrollments.jsonl", "jsonl")
    stopwords_path = root / "stopwords.txt"
    stopwords = frozenset()
    if stopwords_path.exists():
        from tagrec.ingest import load_stopwords
        stopwords = load_stopwords(stopwords_path)
    return assemble(books, documents, loans, enrollments, stopwords)


def write_rejects_report(data_dir: str | Path, reports: dict[str, LoadReport]) -> Path:
    """One deterministic text report covering every loader run."""
    path = Path(data_dir) / CORPUS_DIR / "rejects.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for name in sorted(reports):
            report = reports[name]
            fh.write(f"[{name}] accepted={report.accepted} rejected={len(report.rejects)} "
                     f"duplicates={report.duplicates}\n")
            for reject in report.rejects:
                fh.write(f"{name} row {reject.row}: {reject.reason}\n")
    return path


def events_path(data_dir: str | Path) -> Path:
    return Path(data_dir) / EVENTS_FILE


def append_event(data_dir: str | Path, event: dict) -> None:
    path = events_path(data_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(event, ensure_ascii=False, sort_keys=True) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def read_events(data_dir: str | Path) -> list[dict]:
    path = events_path(data_dir)
    if not path.exists():
        return []
    events = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    return events


def state_dir(data_dir: str | Path) -> Path:
    path = Path(data_dir) / STATE_DIR
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_text(path: Path, content: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(content)


def write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, sort_keys=True, indent=1)
        fh.write("\n")
