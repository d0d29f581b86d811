from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# acceptance verdicts, echoed in the terminal summary so they show without -s
VERDICTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
