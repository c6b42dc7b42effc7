from helpers import ACCEPTANCE_RESULTS, format_results


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in format_results():
        terminalreporter.write_line(line)
