import json
from datetime import date

import pytest
from hypothesis import given, strategies as st

from tagrec.errors import DataError
from tagrec.ingest import (
    assemble,
    load_books,
    load_documents,
    load_enrollments,
    load_loans,
    load_stopwords,
)
from tagrec.store import load_corpus, save_corpus

BOOKS_CSV = """collection_code,title,keywords,classification
101,Java Programming,programming oriented objects,004
102,Introduction to C++,programming objects C++,004
103,Computer Network,tcpip layers security,004
"""


def write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


def test_load_books_basic(tmp_path):
    report = load_books(write(tmp_path, "books.csv", BOOKS_CSV))
    assert len(report.records) == 3
    assert not report.rejects
    first = report.records[0]
    assert first.collection_code == "101"
    assert len(first.keywords_raw.split()) == 3


def test_load_books_empty_file(tmp_path):
    report = load_books(write(tmp_path, "books.csv", "collection_code,title,keywords,classification\n"))
    assert report.records == []
    assert report.rejects == []


def test_load_books_missing_code_rejected(tmp_path):
    csv_text = "collection_code,title,keywords,classification\n,NoCode,kw,c\n"
    report = load_books(write(tmp_path, "books.csv", csv_text))
    assert report.records == []
    assert report.rejects[0].row == 1
    assert report.rejects[0].reason == "missing_collection_code"


def test_load_books_duplicate_last_write_wins(tmp_path):
    csv_text = ("collection_code,title,keywords,classification\n"
                "101,First,kw one,c\n101,Second,kw two,c\n")
    report = load_books(write(tmp_path, "books.csv", csv_text))
    assert report.duplicates == 1
    assert len(report.records) == 1
    assert report.records[0].title == "Second"


def test_load_books_malformed_header(tmp_path):
    with pytest.raises(DataError):
        load_books(write(tmp_path, "books.csv", "code,name\n1,x\n"))


def test_load_books_jsonl(tmp_path):
    lines = "\n".join(json.dumps({"collection_code": c, "title": t, "keywords": k, "classification": ""})
                      for c, t, k in [("101", "Java Programming", "programming oriented objects")])
    report = load_books(write(tmp_path, "books.jsonl", lines + "\n"), "jsonl")
    assert len(report.records) == 1


def test_load_documents_fields(tmp_path):
    csv_text = ("document_id,title,keywords,abstract,authors,detail_url\n"
                "d1,Network Security,tcpip layers security,,Someone,https://repo.example.org/d1\n"
                "d2,No Abstract,kw only,,A B,\n")
    report = load_documents(write(tmp_path, "docs.csv", csv_text))
    assert len(report.records) == 2
    assert report.records[0].keywords_raw == "tcpip layers security"
    assert report.records[1].abstract_raw == ""


def test_load_documents_bad_url_rejected(tmp_path):
    csv_text = ("document_id,title,keywords,abstract,authors,detail_url\n"
                "d1,T,k,,a,notaurl\n")
    report = load_documents(write(tmp_path, "docs.csv", csv_text))
    assert report.records == []
    assert report.rejects[0].reason == "malformed_detail_url"


def test_load_documents_count_preserved(tmp_path):
    rows = "\n".join(f"d{i},Title {i},kw{i},,auth," for i in range(50))
    csv_text = "document_id,title,keywords,abstract,authors,detail_url\n" + rows + "\n"
    report = load_documents(write(tmp_path, "docs.csv", csv_text))
    assert len(report.records) == 50


LOANS_HEADER = "user_id,collection_code,loan_date,department_code,course_id,period_index\n"


def test_load_loans_referential_check(tmp_path):
    csv_text = LOANS_HEADER + "u1,101,2014-03-01,d,c,1\nu1,999,2014-03-02,d,c,1\n"
    report = load_loans(write(tmp_path, "loans.csv", csv_text), "csv", {"101"})
    assert len(report.records) == 1
    assert report.rejects[0].reason == "unknown_collection_code"


def test_load_loans_bad_date_rejected(tmp_path):
    csv_text = LOANS_HEADER + "u1,101,03/01/2014,d,c,1\n"
    report = load_loans(write(tmp_path, "loans.csv", csv_text), "csv", {"101"})
    assert report.records == []
    assert report.rejects[0].reason == "bad_loan_date"


def test_load_loans_sorted_by_date(tmp_path):
    csv_text = LOANS_HEADER + "u1,101,2014-05-01,d,c,1\nu2,101,2014-03-01,d,c,1\n"
    report = load_loans(write(tmp_path, "loans.csv", csv_text), "csv", {"101"})
    assert [e.loan_date for e in report.records] == [date(2014, 3, 1), date(2014, 5, 1)]


def test_load_enrollments(tmp_path):
    csv_text = ("user_id,course_id,period_index,as_of_date\n"
                "u1,cs,3,2014-01-01\nu1,cs,4,2014-08-01\nu2,adm,1,bad-date\n")
    report = load_enrollments(write(tmp_path, "enr.csv", csv_text))
    assert len(report.records) == 2
    assert report.rejects[0].reason == "bad_as_of_date"


def test_load_stopwords(tmp_path):
    path = write(tmp_path, "stop.txt", "the\nand  # common\n# full comment line\nDe\nthe\nProgramação\n")
    words = load_stopwords(path)
    assert words == {"the", "and", "de", "programacao"}


def test_count_conservation(tmp_path):
    csv_text = LOANS_HEADER + "u1,101,2014-03-01,d,c,1\nu1,999,2014-03-02,d,c,1\nu1,101,x,d,c,1\n"
    report = load_loans(write(tmp_path, "loans.csv", csv_text), "csv", {"101"})
    assert len(report.records) + len(report.rejects) == 3


@given(st.lists(st.tuples(st.sampled_from(["101", "999", ""]),
                          st.sampled_from(["2014-03-01", "not-a-date"]),
                          st.integers(min_value=-1, max_value=3)), max_size=30))
def test_count_conservation_property(tmp_path_factory, rows):
    tmp = tmp_path_factory.mktemp("loans")
    body = "".join(f"u1,{code},{when},d,c,{period}\n" for code, when, period in rows)
    path = tmp / "loans.csv"
    path.write_text(LOANS_HEADER + body, encoding="utf-8")
    report = load_loans(path, "csv", {"101"})
    assert len(report.records) + len(report.rejects) == len(rows)


def test_ingest_deterministic(tmp_path):
    path = write(tmp_path, "books.csv", BOOKS_CSV)
    first = load_books(path)
    second = load_books(path)
    assert first.records == second.records
    assert first.rejects == second.rejects


def test_rejects_report_byte_identical(tmp_path):
    from tagrec.store import write_rejects_report

    csv_text = "collection_code,title,keywords,classification\n,NoCode,kw,c\n101,Ok,kw,c\n"
    report = load_books(write(tmp_path, "books.csv", csv_text))
    first = write_rejects_report(tmp_path / "a", {"books": report}).read_bytes()
    second = write_rejects_report(tmp_path / "b", {"books": report}).read_bytes()
    assert first == second
    assert b"row 1: missing_collection_code" in first


def test_corpus_round_trip(tmp_path):
    books = load_books(write(tmp_path, "books.csv", BOOKS_CSV))
    docs_csv = ("document_id,title,keywords,abstract,authors,detail_url\n"
                "d1,T,tcpip layers,abs text,auth,https://x.example/1\n")
    documents = load_documents(write(tmp_path, "docs.csv", docs_csv))
    loans = load_loans(write(tmp_path, "loans.csv", LOANS_HEADER + "u1,101,2014-03-01,d,c,1\n"),
                       "csv", {"101", "102", "103"})
    enrollments = load_enrollments(write(tmp_path, "enr.csv",
                                         "user_id,course_id,period_index,as_of_date\nu1,cs,1,2014-01-01\n"))
    stopwords = load_stopwords(write(tmp_path, "stop.txt", "the\nde\n"))
    corpus = assemble(books, documents, loans, enrollments, stopwords)

    save_corpus(corpus, tmp_path / "data")
    loaded = load_corpus(tmp_path / "data")
    assert loaded == corpus

    # exporting the reloaded corpus again is byte-identical
    save_corpus(loaded, tmp_path / "data2")
    for name in ("books.jsonl", "documents.jsonl", "loans.jsonl", "enrollments.jsonl", "stopwords.txt"):
        assert (tmp_path / "data" / "corpus" / name).read_bytes() == \
               (tmp_path / "data2" / "corpus" / name).read_bytes()
