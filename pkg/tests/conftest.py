import pytest

# criterion id -> list of (case label, passed, detail)
_ACCEPTANCE: dict[str, list] = {}
_TITLES: dict[str, str] = {}


class AcceptanceLog:
    def record(self, criterion: str, title: str, case: str, passed: bool, detail: str = ""):
        _TITLES[criterion] = title
        _ACCEPTANCE.setdefault(criterion, []).append((case, passed, detail))
        line = f"[criterion {criterion}] {case}: {'PASS' if passed else 'FAIL'}"
        print(line + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def _order(key: str):
    num = "".join(ch for ch in key if ch.isdigit())
    return (int(num) if num else 0, key)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE, key=_order):
        cases = _ACCEPTANCE[criterion]
        failed = [c for c in cases if not c[1]]
        verdict = "PASS" if not failed else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:>3} {verdict}  {_TITLES[criterion]}")
        for case, _, detail in failed:
            terminalreporter.write_line(f"      failing case {case}: {detail}")
