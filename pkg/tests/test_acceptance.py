"""The twelve acceptance criteria, one test each.

Every test prints its ``criterion NN PASS|FAIL`` line to the terminal.
Criterion 5 (the factorization identity taken literally) is false for
H11 at several degrees; its test is a strict xfail, so the line prints
FAIL while the suite stays green, and a future pass would turn it red.
The weighted identity that does hold is checked by a separate test.
"""

import io

import pytest

from teichcount.acceptance import CRITERIA, CriterionResult, factorization_table, format_line
from teichcount.cli import run


@pytest.fixture
def report_line(capsys):
    def emit(result):
        with capsys.disabled():
            print("\n" + format_line(result))
        return result

    return emit


LITERAL_FACTORIZATION = pytest.mark.xfail(
    strict=True, reason="literal factorization identity fails for H11 at d = 4, 6, 8, 9, 10")


@pytest.mark.parametrize("number", [pytest.param(n, marks=LITERAL_FACTORIZATION) if n == 5 else n
                                    for n in range(1, 12)])
def test_criterion(number, report_line):
    r = report_line(CRITERIA[number]())
    assert r.passed, r.detail


def test_criterion_05_weighted_identity_holds():
    literal = factorization_table(weighted=False)
    weighted = factorization_table(weighted=True)
    assert all(lhs == rhs for (st, _), (lhs, rhs) in literal.items() if st == "H2")
    assert [d for (st, d), (lhs, rhs) in literal.items() if st == "H11" and lhs != rhs] == [4, 6, 8, 9, 10]
    assert all(lhs == rhs for lhs, rhs in weighted.values())


def _report():
    out, err = io.StringIO(), io.StringIO()
    code = run(["report"], stdout=out, stderr=err)
    return code, out.getvalue()


def test_criterion_12(report_line):
    (code1, text1), (code2, text2) = _report(), _report()
    same = text1 == text2
    r = report_line(CriterionResult(12, "determinism", same,
                                    f"two `report` runs byte-identical: {same} ({len(text1)} bytes)"))
    assert r.passed
    lines = text1.splitlines()
    assert len(lines) == 12
    assert [line.split()[2] for line in lines] == ["PASS"] * 4 + ["FAIL"] + ["PASS"] * 7
    # the failing criterion makes `report` exit with the invariant code
    assert code1 == code2 == 3
