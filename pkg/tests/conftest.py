import pytest
from hypothesis import settings

from relseq.lexicon import LexiconBundle
from relseq.synthetic import toy_lexicon

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def lex():
    return toy_lexicon()


@pytest.fixture(scope="session")
def empty_lex():
    return LexiconBundle()


_criteria: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when != "call":
        return
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _criteria.append(("PASS" if report.passed else "FAIL", mark.kwargs.get("name", item.name), detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in _criteria:
        terminalreporter.write_line(f"{status} {name}" + (f" ({detail})" if detail else ""))
