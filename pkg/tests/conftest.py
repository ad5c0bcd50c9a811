import pytest

from tagrec.ingest import BookRecord, Corpus, DocumentRecord, Enrollment, LoanEvent
from tagrec.preprocess import NormalizerConfig

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(name: str, outcome: str) -> None:
    _ACCEPTANCE_RESULTS.append((name, outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
    lines = []
    for report in reports:
        if "test_acceptance" in report.nodeid:
            name = report.nodeid.split("::")[-1]
            lines.append((name, "PASS" if report.passed else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in lines:
            terminalreporter.write_line(f"{outcome}  {name}")


@pytest.fixture
def norm_config():
    return NormalizerConfig(stopwords=frozenset({"the", "and", "of", "to", "de", "da"}))


def make_corpus(books=(), documents=(), loans=(), enrollments=(), stopwords=()):
    return Corpus(
        books={b.collection_code: b for b in books},
        documents={d.document_id: d for d in documents},
        loans=sorted(loans, key=lambda e: e.loan_date),
        enrollments=sorted(enrollments, key=lambda e: (e.user_id, e.as_of_date)),
        stopwords=frozenset(stopwords),
    )


def book(code, keywords, title=None, classification=""):
    return BookRecord(str(code), title or f"Book {code}", keywords, classification)


def document(doc_id, title="", keywords="", abstract="", authors="", url=""):
    return DocumentRecord(str(doc_id), title or f"Doc {doc_id}", keywords, abstract, authors, url)


def loan(user, code, when, course="c1", period=1, dept="d1"):
    return LoanEvent(user, str(code), when, dept, course, period)


def enrollment(user, course, period, when):
    return Enrollment(user, course, period, when)
