import os

from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


ACCEPTANCE_LINES = {}


def record_acceptance(number, summary, passed, detail=""):
    ACCEPTANCE_LINES[number] = (summary, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        summary, passed, detail = ACCEPTANCE_LINES[n]
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {summary}{extra}")
