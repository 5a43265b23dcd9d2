import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = marker.args
    status = "PASS" if report.passed else "FAIL"
    _RESULTS.append((number, status, title, [v for k, v in item.user_properties if k == "detail"]))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, details in sorted(_RESULTS, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
        for d in details:
            terminalreporter.write_line(f"    {d}")
