from __future__ import annotations

import contextlib
import time

import pytest

_KEY = pytest.StashKey[dict]()


class _Outcome:
    def __init__(self):
        self.ok = False
        self.detail = ""


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance line: PASS/FAIL, detail, runtime."""
    log = request.config.stash.setdefault(_KEY, {})

    @contextlib.contextmanager
    def run(number: int, title: str):
        out = _Outcome()
        start = time.perf_counter()
        try:
            yield out
        except Exception as exc:
            out.ok, out.detail = False, f"{type(exc).__name__}: {exc}"
            raise
        finally:
            secs = time.perf_counter() - start
            line = (f"ACCEPTANCE {number}: {'PASS' if out.ok else 'FAIL'}  {title}  "
                    f"[{out.detail}] ({secs:.2f}s)")
            log[number] = line
            print(line)
    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_KEY, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        terminalreporter.write_line(log[n])
