import contextlib
import time

import pytest

_CRITERIA: dict[int, str] = {}


class _Outcome:
    def __init__(self):
        self.ok = None
        self.detail = ""


@pytest.fixture
def criterion():
    """Record one acceptance line; an exception inside the block counts as FAIL."""

    @contextlib.contextmanager
    def block(number: int, title: str):
        out = _Outcome()
        start = time.perf_counter()
        try:
            yield out
        except BaseException as exc:
            out.ok = False
            out.detail = out.detail or f"{type(exc).__name__}: {exc}"
            raise
        finally:
            took = time.perf_counter() - start
            status = "PASS" if out.ok else "FAIL"
            line = f"[{status}] criterion {number}: {title} - {out.detail} ({took:.1f} s)"
            _CRITERIA[number] = line
            print(line)

    return block


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
