_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
