"""Shared pytest wiring: the acceptance suite registers one line per
criterion and this hook prints them in the terminal summary, where they
survive output capture."""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
