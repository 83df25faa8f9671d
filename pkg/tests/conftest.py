import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        title, ok = module.RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:>2}  {title}")
