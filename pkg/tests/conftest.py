import pytest

_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.fspath.basename == "test_acceptance.py":
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append((item.name, doc, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for _, doc, passed, duration in sorted(_acceptance):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {doc} [{duration:.1f}s]")
