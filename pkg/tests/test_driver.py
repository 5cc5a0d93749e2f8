import io
import itertools
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ursa.driver import BANNER, Session, SessionConfig, decode_model, run_session, run_text
from ursa.frontend import ast
from ursa.frontend.printer import format_expr
from ursa.sat import Model
from oracles import corpus_source, queens_count, reexecute
from test_interpreter import num_expr, reference


def solutions(source, width=8):
    session, _ = run_text(source, width)
    return session.reports


def test_increment_example():
    (report,) = solutions("nv = nu + 1; assert(nv == 2);", 2)
    assert [s.as_dict() for s in report.solutions] == [{"nu": 1}]
    (report,) = solutions("nv = nu + 1; assert(nv == 2);", 8)
    assert [s.as_dict() for s in report.solutions] == [{"nu": 1}]


def test_queens_five():
    (report,) = solutions(corpus_source("queens1", nDim=5), 5)
    assert report.count == 10
    for sol in report.solutions:
        assert reexecute(corpus_source("queens1", nDim=5), 5, sol.values) == [True]


def test_decode_model():
    model = Model(np.array([False, True, True]))
    imap = [(("nu",), 0, 1), (("nu",), 1, 2), (("b",), 0, 3)]
    assert decode_model(model, imap).values == [(("nu",), 1), (("b",), True)]


def test_ground_false_assert_skips_the_solver():
    (report,) = solutions("nx = 3; assert(nx == 4 && ny == 1);")
    assert report.count == 0 and not report.solver_called


def test_ground_true_conjuncts_are_dropped():
    (report,) = solutions("nx = 3; assert(nx == 3; ny < 2);", 2)
    assert report.solver_called and report.count == 1
    (report,) = solutions("nx = 3; assert_all(nx == 3; ny < 2);", 2)
    assert sorted(s.as_dict()["ny"] for s in report.solutions) == [0, 1]


def optimum(source, width=8):
    (report,) = solutions(source, width)
    return report.optimum, report


def test_maximize_square_below_fifty():
    value, report = optimum("maximize(n,0,10); assert(n*n<=50 && n==n);")
    want = max(n for n in range(11) if (n * n) % 256 <= 50)
    assert value == want == 7
    assert report.solutions[0].as_dict()["n"] == 7


def test_minimize_simple():
    value, _ = optimum("minimize(n,0,5); assert(n>2);")
    assert value == 3


def test_maximize_without_solution():
    value, report = optimum("maximize(n,0,10); assert(n>20);")
    assert value is None and report.count == 0


def test_candidates_beyond_width_are_skipped():
    value, _ = optimum("maximize(n,0,20); assert(n>1);", 3)
    assert value == 7


def test_optimize_a_dependent_target():
    value, report = optimum("minimize(nz,0,100); nz = nx + ny; assert(nx > 3 && ny > 4);", 4)
    want = min((x + y) % 16 for x in range(4, 16) for y in range(5, 16))
    assert value == want
    sol = report.solutions[0].as_dict()
    assert (sol["nx"] + sol["ny"]) % 16 == want


def test_optimize_with_assert_all_lists_every_solution_at_the_optimum():
    value, report = optimum("minimize(n,0,10); assert_all(n>=2 && nx<n);", 4)
    assert value == 2
    assert sorted(s.as_dict()["nx"] for s in report.solutions) == [0, 1]
    assert {s.as_dict()["n"] for s in report.solutions} == {2}


def test_each_assert_is_solved_on_its_own():
    reports = solutions("assert(nx == 1); assert_all(nx < 3 && by);", 4)
    assert reports[0].count == 1
    assert sorted(s.as_dict()["nx"] for s in reports[1].solutions) == [0, 1, 2]


@pytest.mark.parametrize("width", range(5, 13))
def test_queens_count_does_not_depend_on_width(width):
    (report,) = solutions(corpus_source("queens1", nDim=6), width)
    assert report.count == 4 == queens_count(6)


def test_identical_runs_give_identical_output():
    src = corpus_source("queens1", nDim=6)
    a = [s.values for s in solutions(src, 5)[0].solutions]
    b = [s.values for s in solutions(src, 5)[0].solutions]
    assert a == b


@settings(max_examples=60, deadline=None)
@given(left=num_expr(2), right=num_expr(2),
       rel=st.sampled_from(sorted(ast.REL_OPS)))
def test_all_solutions_match_brute_force(left, right, rel):
    width = 4
    cond = format_expr(ast.Binary(rel, left, right))
    session, _ = run_text(f"n0 = n0; n1 = n1; n2 = n2; assert_all({cond});", width)
    (report,) = session.reports
    got = {tuple(v for _, v in s.values) for s in report.solutions}
    ops = {"<": int.__lt__, ">": int.__gt__, "<=": int.__le__, ">=": int.__ge__,
           "==": int.__eq__, "!=": int.__ne__}
    want = set()
    for vals in itertools.product(range(16), repeat=3):
        env = dict(zip(["n0", "n1", "n2"], vals))
        if ops[rel](reference(left, env, width), reference(right, env, width)):
            want.add(vals)
    assert got == want


# -- sessions and output --------------------------------------------------------

def session_output(source, **config):
    buf = io.StringIO()
    session = Session(SessionConfig(**config), buf)
    session.run_source(source)
    return buf.getvalue()


def test_report_format():
    text = session_output("nv = nu + 1; assert(nv == 2); b1 = bx; assert(b1);")
    assert "\n--> Solution 1\nnu=1\n" in text
    assert "\nbx=true\n" in text  # nu stays an independent
    assert re.search(r"\[Formula generation: \d+\.\d\ds; conversion to CNF: \d+\.\d\ds; "
                     r"total: \d+\.\d\ds\]", text)
    assert re.search(r"\[Solving time: \d+\.\d\ds\]", text)
    assert re.search(r"\[Formula size: \d+ variables, \d+ clauses\]", text)
    assert "[Number of solutions: 1]" in text


def test_quiet_mode_keeps_counts():
    text = session_output(corpus_source("queens1", nDim=6), bit_width=5, quiet=True)
    assert "--> Solution" not in text
    assert "[Number of solutions: 4]" in text


def test_no_solution_message():
    text = session_output("assert(nx < 0);")
    assert "There are no solutions." in text


def test_optimum_message():
    assert "Maximal value of n: 7" in session_output("maximize(n,0,10); assert(n*n<=50);")
    assert "No value of n in [0, 3]" in session_output("minimize(n,0,3); assert(n>5);")


def test_export_mode_writes_dimacs(tmp_path):
    out = tmp_path / "out.cnf"
    text = session_output("nx = nseed * 3 + 1; assert(nx == 10); assert_all(ny < 2);",
                          mode="export", dimacs_out=str(out))
    assert "--> Solution" not in text
    first = out.read_text()
    assert "c ursa independent nseed 0 1" in first
    assert "all-solutions" not in first
    second = (tmp_path / "out.2.cnf").read_text()
    assert "all-solutions" in second
    assert re.search(r"^p cnf \d+ \d+$", first, re.M)


def test_run_session_file_mode(tmp_path):
    path = tmp_path / "prog.ursa"
    path.write_text("nv = nu + 1;\nassert(nv == 2);\n")
    out, err = io.StringIO(), io.StringIO()
    assert run_session(SessionConfig(input=str(path)), out, err) == 0
    assert out.getvalue().startswith(BANNER + "\n--> Solution 1\nnu=1\n")
    assert err.getvalue() == ""


@pytest.mark.parametrize("source,fragment", [
    ("nv = nu + 1\n", "line 2"),
    ("nx = 1;\nif (by) nx = 2;\n", "line 2, column 5: condition of 'if' has to be ground"),
    ("nx = 5 / 2;", "illegal character"),
])
def test_run_session_reports_errors(tmp_path, source, fragment):
    path = tmp_path / "bad.ursa"
    path.write_text(source)
    out, err = io.StringIO(), io.StringIO()
    assert run_session(SessionConfig(input=str(path)), out, err) == 1
    assert fragment in err.getvalue()


def test_missing_file(tmp_path):
    err = io.StringIO()
    assert run_session(SessionConfig(input=str(tmp_path / "none.ursa")), io.StringIO(), err) == 2


def interactive(text):
    out, err = io.StringIO(), io.StringIO()
    status = run_session(SessionConfig(), out, err, stdin=io.StringIO(text))
    return status, out.getvalue(), err.getvalue()


def test_interactive_session():
    status, out, err = interactive("nv=nu+1;\nassert(nv==2);\nhalt;\nassert(nx==1);\n")
    assert status == 0 and err == ""
    assert out.count("--> Solution 1") == 1 and "nu=1" in out


def test_interactive_multiline_statements_and_procedures():
    text = ("procedure sq(na) {\n  na = na *\n na;\n}\n"
            "nx = 3; call sq(nx);\n"
            "print nx;\n")
    status, out, err = interactive(text)
    assert status == 0, err
    assert "9\n" in out


def test_interactive_errors_do_not_end_the_session():
    status, out, err = interactive("if (bx) nx = 1;\nnz = 1 +;\nprint 5;\n")
    assert status == 1
    assert "has to be ground" in err and "expected" in err
    assert out.endswith("5\n")


def test_interactive_rejects_late_procedures():
    status, _, err = interactive("nx = 1;\nprocedure p(na) { na = 1; }\n")
    assert status == 1 and "precede" in err


def test_interactive_incomplete_input_at_end():
    status, _, err = interactive("nx = (1 +\n")
    assert status == 1 and "unexpected end" in err


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(bit_width=0)
    with pytest.raises(ValueError):
        SessionConfig(bit_width=65)
    with pytest.raises(ValueError):
        SessionConfig(mode="export")
