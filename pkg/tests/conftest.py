import sys

import pytest

from hardcoref.docmodel import data_path, load_corpus
from hardcoref.fixtures import POLARITY, WEB_CACHE
from hardcoref.kb import KnowledgeBase, PolarityLexicon, WebCache, build_kb


@pytest.fixture(scope="session")
def winograd_docs():
    return load_corpus(data_path("winograd_fixture.jsonl"))


@pytest.fixture(scope="session")
def fixture_kb():
    kb, _ = build_kb(load_corpus(data_path("kb_corpus.jsonl")))
    kb.polarity = PolarityLexicon(POLARITY)
    kb.web = WebCache(WEB_CACHE)
    return kb


@pytest.fixture
def empty_kb():
    return KnowledgeBase()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda s: int(s.split("]")[1].split(".")[0])):
        terminalreporter.write_line(line)
