"""Shared pytest hooks.

The acceptance checks in test_acceptance.py each represent one release
criterion, so the terminal summary repeats them as one labelled PASS or
FAIL line apiece, with any measured figure the test printed.
"""

_LABELS = {
    "test_c01": "C01 quadrant sums reassemble the whole-field sum",
    "test_c02": "C02 potential bounds and share identity",
    "test_c03": "C03 inhibition matches the loop-convolution oracle",
    "test_c04": "C04 static scenes stay silent",
    "test_c05": "C05 direction discrimination battery",
    "test_c06": "C06 matching potential leads at confirmation",
    "test_c07": "C07 escape selection semantics",
    "test_c08": "C08 closed-loop avoidance battery",
    "test_c09": "C09 spike confirmation window rule",
    "test_c10": "C10 detection throughput",
}

_RESULTS: dict[str, tuple[str, str]] = {}


def _detail_from(report) -> str:
    for title, content in report.sections:
        if "stdout" in title and content.strip():
            return content.strip().splitlines()[-1]
    return ""


def pytest_runtest_logreport(report):
    testname = report.nodeid.rsplit("::", 1)[-1].split("[")[0]
    name = "_".join(testname.split("_")[:2])
    if name not in _LABELS:
        return
    if report.when == "call":
        outcome = "PASS" if report.passed else "FAIL"
        if report.skipped:
            outcome = "SKIP"
        _RESULTS[name] = (outcome, _detail_from(report))
    elif report.failed:
        _RESULTS[name] = ("FAIL", _detail_from(report))
    elif report.skipped and name not in _RESULTS:
        _RESULTS[name] = ("SKIP", "")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance summary", sep="-")
    for name in sorted(_RESULTS):
        outcome, detail = _RESULTS[name]
        line = f"{_LABELS[name]}: {outcome}"
        if detail:
            line = f"{line} ({detail})"
        terminalreporter.write_line(line)
