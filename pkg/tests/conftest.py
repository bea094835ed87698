import pytest

from percolor.corpus import builtin_corpus

_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "_criterion", None)
    if marks is None:
        return
    for n in marks:
        _criteria.setdefault(n, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    nums = [m.args[0] for m in item.iter_markers("criterion")]
    if nums:
        rep._criterion = nums


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        failed = [nid.split("::")[-1] for nid, out in results if out != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n:>2}: {status}  ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
