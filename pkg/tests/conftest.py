import re

_AC = re.compile(r"test_(ac\d+)_")
_outcomes: dict[str, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome == "failed":
        _outcomes.setdefault(m.group(1).upper(), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for ac in sorted(_outcomes, key=lambda k: int(k[2:])):
        results = _outcomes[ac]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{ac} {status} ({sum(results)}/{len(results)} tests)")
