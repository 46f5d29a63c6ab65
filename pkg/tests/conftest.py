def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, 'acceptance_lines', [])
    if lines:
        terminalreporter.section('acceptance criteria')
        for line in sorted(lines):
            terminalreporter.write_line(line)
