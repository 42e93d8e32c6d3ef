import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", help="run opt-in expensive computations")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def _cache(tmp_path_factory, monkeypatch):
    # keep computed witnesses out of the user's cache
    monkeypatch.setenv("JSCHEME_CACHE", str(tmp_path_factory.getbasetemp() / "cache"))


def pytest_configure(config):
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num = mark.args[0]
    res = item.config._criteria.setdefault(num, {"passed": 0, "failed": [], "skipped": 0})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if rep.passed:
            res["passed"] += 1
        elif rep.skipped:
            res["skipped"] += 1
        else:
            res["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    crit = getattr(config, "_criteria", {})
    if not crit:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(crit):
        r = crit[num]
        status = "FAIL" if r["failed"] else ("PASS" if r["passed"] else "SKIP")
        line = f"criterion {num:>2}: {status}  ({r['passed']} passed, {len(r['failed'])} failed, {r['skipped']} skipped)"
        if r["failed"]:
            line += "  failing: " + ", ".join(r["failed"])
        terminalreporter.write_line(line)
