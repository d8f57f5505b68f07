from __future__ import annotations

import json
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exceptional_primes.curves import WeierstrassModel  # noqa: E402
from exceptional_primes.pipeline import parse_curves  # noqa: E402

DATA = resources.files("exceptional_primes") / "data"


def load_corpus(name: str = "corpus.txt"):
    return parse_curves((DATA / name).read_text(encoding="utf-8").splitlines())


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_models(corpus):
    return [(c.label, WeierstrassModel(*c.ainvs)) for c in corpus]


@pytest.fixture(scope="session")
def s0_inputs():
    return load_corpus("s0.txt")


@pytest.fixture(scope="session")
def expected_reports():
    with open(Path(__file__).parent / "data" / "expected_reports.json") as fh:
        return {e["label"]: e for e in json.load(fh)}


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[n]
        terminalreporter.write_line(f"[{status}] criterion {n:2d}: {title}")
