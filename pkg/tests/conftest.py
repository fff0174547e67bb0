import pytest

from vee.families import instantiate


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="also run the expensive cross-checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: expensive; runs only with --slow")
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    results = item.config._criteria.setdefault(number, {"title": title, "outcomes": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        results["outcomes"].append(rep.outcome)


def pytest_terminal_summary(terminalreporter, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        info = criteria[number]
        outs = info["outcomes"]
        if "failed" in outs:
            verdict = "FAIL"
        elif "passed" in outs:
            verdict = "PASS"
        else:
            verdict = "SKIPPED"
        extra = " [slow checks skipped; use --slow]" if "skipped" in outs and verdict != "FAIL" else ""
        terminalreporter.write_line(f"criterion {number:>2}: {verdict:<5} {info['title']}{extra}")


@pytest.fixture(scope="session")
def a3():
    return instantiate("an", c=[1, 1, 1, 1])


@pytest.fixture(scope="session")
def b3_restricted():
    return instantiate("bn", c=[-1, 1, 1, 3])
