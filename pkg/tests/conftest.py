import pytest

from mmthz import _tables


@pytest.fixture
def table_dir(tmp_path, monkeypatch):
    """Point the default-table lookup at an empty temporary directory."""
    monkeypatch.setenv("MMTHZ_TABLE_DIR", str(tmp_path))
    _tables._cached_table.cache_clear()
    yield tmp_path
    _tables._cached_table.cache_clear()


_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        detail = dict(item.user_properties).get("detail", "")
        _RESULTS.append((mark.args[0], mark.args[1], rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
