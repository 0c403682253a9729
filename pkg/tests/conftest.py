import os

# acceptance verdicts, filled in by test_acceptance and echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_report_header(config):
    from revisop import kernels

    return f"revisop kernels backend: {kernels.BACKEND} (REVISOP_PURE_PYTHON={os.environ.get('REVISOP_PURE_PYTHON', '')})"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
