import pytest

from stdt.tree import parse_bp

# a; children b, c, d; c has children e, f.  Preorder a b c e f d = 1..6.
T1_BP = "(()(()())())"
A, B, C, E, F, D = 1, 2, 3, 4, 5, 6


@pytest.fixture
def t1():
    return parse_bp(T1_BP)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.summary_lines():
            terminalreporter.write_line(line)
