import re


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, after the test run."""
    status = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", rep.nodeid)
            if m:
                status[int(m.group(1))] = "PASS" if outcome == "passed" else "FAIL"
    if status:
        terminalreporter.write_sep("-", "acceptance criteria")
        for k in sorted(status):
            terminalreporter.write_line(f"ACCEPTANCE {k}: {status[k]}")
