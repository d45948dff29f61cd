import json

import pytest

from policy_index.corpus import Document


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write((rec if isinstance(rec, str) else json.dumps(rec, ensure_ascii=False)) + "\n")
    return path


@pytest.fixture
def three_docs():
    return [
        Document("2020-01-02", "Hubei", "t1", "疫情防控"),
        Document("2020-01-01", "Hainan", "t2", "贷款"),
        Document("2020-01-03", "Hubei", "t3", "贷款贷款"),
    ]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
