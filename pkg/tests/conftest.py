"""Shared pytest wiring: acceptance-criterion verdict lines are collected
here and echoed in a summary section after the run, so the one-line-per-
criterion report survives output capture."""

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
