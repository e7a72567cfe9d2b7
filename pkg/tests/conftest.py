from pathlib import Path

import pytest
from hypothesis import settings

# Deterministic, deadline-free property testing so the suite never flakes
# on slow machines or fresh example seeds.
settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")

TESTS_DIR = Path(__file__).parent
REPO_DIR = TESTS_DIR.parent
DATA_DIR = REPO_DIR / "data"


@pytest.fixture(scope="session")
def mini_paths():
    return {
        "corpus": DATA_DIR / "mini" / "corpus.trec",
        "topics": DATA_DIR / "mini" / "topics.trec",
        "qrels": DATA_DIR / "mini" / "qrels.txt",
        "stopwords": DATA_DIR / "stopwords" / "english.txt",
    }


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
    print(f"  [{status}] {name}")
