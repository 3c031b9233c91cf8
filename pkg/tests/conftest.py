"""Prints the acceptance scoreboard after the run, outside pytest's capture."""

SCOREBOARD = []


def pytest_terminal_summary(terminalreporter):
    if SCOREBOARD:
        terminalreporter.write_sep("-", "acceptance scoreboard")
        for line in sorted(SCOREBOARD):
            terminalreporter.write_line(line)
