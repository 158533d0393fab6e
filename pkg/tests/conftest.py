import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n = mark.args[0]
    entry = _RESULTS.setdefault(n, {"passed": True, "seconds": 0.0, "notes": []})
    entry["seconds"] += rep.duration
    xfailed = hasattr(rep, "wasxfail")
    if rep.failed or xfailed:
        entry["passed"] = False
        entry["notes"].append(item.name + (" (known failure)" if xfailed else ""))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        e = _RESULTS[n]
        status = "PASS" if e["passed"] else "FAIL"
        extra = f"  [{', '.join(e['notes'])}]" if e["notes"] else ""
        terminalreporter.write_line(f"criterion {n:2d}: {status}  ({e['seconds']:.1f} s){extra}")
