import contextlib

# criterion number -> [title, passed]
ACCEPTANCE: dict = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    entry = ACCEPTANCE.setdefault(number, [title, True])
    try:
        yield
    except BaseException:
        entry[1] = False
        raise


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
