import sys
from pathlib import Path

# Allow running the suite from a fresh checkout without installing.
SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

# Scoreboard lines recorded by the acceptance tests, printed at session end
# (outside pytest's output capture) by the hook below.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    failed = [
        report
        for report in terminalreporter.stats.get("failed", [])
        if "test_criterion" in report.nodeid
    ]
    if not ACCEPTANCE_LINES and not failed:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    for report in failed:
        name = report.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{name}: FAIL")
