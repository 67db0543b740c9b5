"""Shared pytest plumbing: the acceptance suite's per-criterion summary."""

acceptance_lines = []


def record_criterion(line: str) -> None:
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines:
        terminalreporter.write_line(line)
