"""Shared test plumbing.

Collects the one-line verdicts emitted by the acceptance suite and replays
them in the terminal summary so they are visible on both passing and failing
runs.
"""

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
