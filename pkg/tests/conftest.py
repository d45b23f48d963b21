import re

_RESULTS: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    k = int(m[1])
    if report.when == "call" or report.failed:
        if report.failed or _RESULTS.get(k) == "FAIL":
            _RESULTS[k] = "FAIL"
        elif report.passed:
            _RESULTS[k] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for k, name in CRITERIA.items():
        terminalreporter.write_line(f"criterion {k} ({name}): {_RESULTS.get(k, 'NOT RUN')}")
