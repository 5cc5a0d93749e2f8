import io
import logging

import pytest
from hypothesis import given, settings, strategies as st

from ursa import bitvec as bv
from ursa.errors import UrsaRuntimeError
from ursa.formula import Kind
from ursa.frontend import ast, parse_expression, parse_program
from ursa.interpreter import Halt, Interpreter, Status


def run(source, width=8, **kw):
    interp = Interpreter(width, **kw)
    interp.run(parse_program(source))
    return interp


def value_under(interp, v, env):
    """Concrete value of a symbolic Value under an assignment of base variables."""
    f = interp.factory
    if v.is_ground:
        return v.ground
    if v.kind == ast.BOOL:
        return f.evaluate(v.formula, env)
    out = 0
    memo = {}
    for bit in v.formula:
        out = (out << 1) | f.evaluate(bit, env, memo)
    return out


def test_unbound_read_introduces_independent_unknown():
    interp = Interpreter(2)
    nu = interp.read_variable("nu")
    assert nu.status is Status.INDEPENDENT
    assert len(nu.formula) == 2 and len(set(nu.formula)) == 2
    assert all(interp.factory.kind[b] == Kind.VAR for b in nu.formula)
    size = len(interp.factory)
    again = interp.read_variable("nu")
    assert again.formula == nu.formula and len(interp.factory) == size


def test_symbolic_index_is_an_error():
    with pytest.raises(UrsaRuntimeError, match="ground number"):
        run("nx = nT[ni][nj];")


def test_increment_of_unknown_two_bit_number():
    interp = run("nv = nu + 1;", width=2)
    f = interp.factory
    p, q = interp.lookup(("nu",)).formula
    nv = interp.lookup(("nv",))
    assert nv.status is Status.DEPENDENT
    assert nv.formula == (f.mk_xor(p, q), f.mk_not(q))


def test_multiplying_by_zero_gives_ground_zero():
    interp = run("nA = nB * 0;")
    assert interp.lookup(("nA",)).ground == 0
    assert interp.lookup(("nA",)).status is Status.GROUND


def test_ground_plus_symbolic_becomes_dependent():
    interp = run("nMarks = 2; nMarks += (nRuler >> 3) & 1;")
    marks = interp.lookup(("nMarks",))
    assert marks.status is Status.DEPENDENT
    ruler = interp.lookup(("nRuler",)).formula
    for r in (0, 8, 15, 255):
        env = {interp.factory.lhs[b]: bool((r >> (7 - i)) & 1) for i, b in enumerate(ruler)}
        assert value_under(interp, marks, env) == 2 + ((r >> 3) & 1)


def test_ground_arithmetic_creates_no_nodes():
    interp = run("nx = 2 + 3; bx = nx < 9;")
    assert interp.lookup(("nx",)).ground == 5
    assert interp.lookup(("bx",)).ground is True
    assert len(interp.factory) == 2


def test_ite_on_unknown_condition():
    interp = run("nx = ite(b, 1, 2);", width=2)
    b = interp.lookup(("b",)).formula
    nx = interp.lookup(("nx",))
    var = interp.factory.lhs[b]
    assert value_under(interp, nx, {var: True}) == 1
    assert value_under(interp, nx, {var: False}) == 2


def test_lcg_loop_builds_one_chain():
    interp = run("nx=nseed; for(ni=1;ni<=100;ni++) nx=nx*1664525+1013904223;", width=32)
    assert interp.lookup(("ni",)).ground == 101
    nx = interp.lookup(("nx",))
    assert nx.status is Status.DEPENDENT and len(nx.formula) == 32
    seed = interp.lookup(("nseed",)).formula
    x = 12345
    env = {interp.factory.lhs[b]: bool((x >> (31 - i)) & 1) for i, b in enumerate(seed)}
    for _ in range(100):
        x = (x * 1664525 + 1013904223) & 0xFFFFFFFF
    assert value_under(interp, nx, env) == x


@pytest.mark.parametrize("source,construct", [
    ("if (b) nx = 1;", "if"),
    ("while (nx < 3) nx++;", "while"),
    ("for (ni = 0; ni < nk; ni++) nx++;", "for"),
])
def test_symbolic_control_condition_is_an_error(source, construct):
    with pytest.raises(UrsaRuntimeError, match=construct) as exc:
        run(source)
    assert exc.value.line == 1


def test_clear_then_listvars_is_empty():
    out = io.StringIO()
    run("nx = 1; ny = nz + 1; clear; listvars;", out=out)
    assert out.getvalue() == ""


def test_listvars_and_print_report_status():
    out = io.StringIO()
    run("nx = 3; ny = nz + 1; print nx; print ny; print bq; listvars;", out=out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "3"
    assert lines[1] == "symbolic (dependent), 8 bits"
    assert lines[2] == "symbolic (independent), 1 bit"
    # nz is read (and so introduced) before ny is written
    assert lines[3:] == ["nx = 3", "nz: symbolic (independent), 8 bits",
                         "ny: symbolic (dependent), 8 bits",
                         "bq: symbolic (independent), 1 bit"]


def test_halt_stops_execution():
    interp = Interpreter()
    with pytest.raises(Halt):
        interp.run(parse_program("nx = 1; halt; nx = 2;"))
    assert interp.lookup(("nx",)).ground == 1


POWER = """
procedure power(na,nk) {
  np=na;
  for(ni=1;ni<nk;ni=ni+1)
     na = na*np;
}
"""


def test_procedure_arguments_are_passed_by_name():
    interp = run(POWER + "nk=3; nx=5; call power(nx, nk);")
    assert interp.lookup(("nx",)).ground == 125


def test_array_elements_are_passed_by_name():
    interp = run(POWER + "nk=2; nA[3]=7; call power(nA[3], nk);")
    assert interp.lookup(("nA", 3)).ground == 49


def test_expression_arguments_are_passed_by_value():
    interp = run(POWER + "nk=2; nx=5; call power(nx+1, nk);")
    assert interp.lookup(("nx",)).ground == 5
    assert interp.lookup(("na",)) is None
    assert interp.lookup(("np",)).ground == 6  # body globals live in the shared store


def test_symbolic_power():
    interp = run(POWER + "nk=2; ny=nx; call power(ny, nk);", width=4)
    bits = interp.lookup(("nx",)).formula
    ny = interp.lookup(("ny",))
    for x in range(16):
        env = {interp.factory.lhs[b]: bool((x >> (3 - i)) & 1) for i, b in enumerate(bits)}
        assert value_under(interp, ny, env) == (x * x) % 16


@pytest.mark.parametrize("source,message", [
    ("procedure p(na) { call p(na); } call p(nx);", "recursive"),
    ("call q(nx);", "undefined"),
    (POWER + "call power(nx);", "argument"),
    ("procedure p(na) { na = 1; } call p(bx);", "wrong kind"),
])
def test_procedure_errors(source, message):
    with pytest.raises(UrsaRuntimeError, match=message):
        run(source)


def test_optimize_directive_and_empty_range():
    interp = run("maximize(n, 1, 36); assert(n > 3);")
    (conds, all_, directive), = interp.assert_log
    assert directive.key == ("n",) and (directive.lo, directive.hi) == (1, 36)
    with pytest.raises(UrsaRuntimeError, match="empty range"):
        run("minimize(n, 5, 1);")


def test_clear_resets_directive():
    interp = run("minimize(n, 0, 3); clear; assert(nx == 1);")
    assert interp.assert_log[0][2] is None


def test_asserts_leave_store_untouched():
    interp = run("nv = nu + 1; assert(nv == 2); nw = nv;")
    assert interp.lookup(("nw",)).formula == interp.lookup(("nv",)).formula
    assert len(interp.assert_log) == 1


def test_wide_literal_is_truncated_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        interp = run("nx = 300;")
    assert interp.lookup(("nx",)).ground == 300 % 256
    assert "does not fit" in caplog.text


def test_independents_survive_reassignment():
    interp = run("nv = nv >> 1; assert(nv == 0);", width=4)
    (key, value), = interp.independents
    assert key == ("nv",) and value.status is Status.INDEPENDENT
    assert interp.lookup(("nv",)).status is Status.DEPENDENT


# -- ground and symbolic evaluation agree --------------------------------------

NAMES = ["n0", "n1", "n2"]


def num_expr(depth):
    leaf = st.one_of(st.integers(0, 40).map(ast.Num), st.sampled_from(NAMES).map(ast.Var))
    if depth == 0:
        return leaf
    sub = num_expr(depth - 1)
    return st.one_of(
        leaf,
        st.builds(ast.Binary, st.sampled_from(sorted(ast.NUM_OPS)), sub, sub),
        st.builds(ast.Unary, st.sampled_from(["-", "~"]), sub),
        st.builds(ast.Ite, st.builds(ast.Binary, st.sampled_from(sorted(ast.REL_OPS)), sub, sub),
                  sub, sub),
        st.builds(ast.Convert, st.just("sgn"), sub),
    )


def reference(e, env, n):
    m = (1 << n) - 1
    if isinstance(e, ast.Num):
        return e.value & m
    if isinstance(e, ast.Var):
        return env[e.name]
    if isinstance(e, ast.Unary):
        x = reference(e.operand, env, n)
        return (-x) & m if e.op == "-" else (~x) & m
    if isinstance(e, ast.Convert):
        return int(reference(e.arg, env, n) != 0)
    if isinstance(e, ast.Ite):
        c = e.cond
        x, y = reference(c.left, env, n), reference(c.right, env, n)
        ok = {"<": x < y, ">": x > y, "<=": x <= y, ">=": x >= y, "==": x == y, "!=": x != y}[c.op]
        return reference(e.then if ok else e.other, env, n)
    x, y = reference(e.left, env, n), reference(e.right, env, n)
    return {
        "+": (x + y) & m, "-": (x - y) & m, "*": (x * y) & m, "&": x & y, "|": x | y,
        "^": x ^ y, "<<": (x << y) & m if y < n else 0, ">>": x >> y if y < n else 0,
    }[e.op]


@settings(max_examples=200, deadline=None)
@given(expr=num_expr(3), width=st.integers(1, 8),
       values=st.lists(st.integers(0, 255), min_size=3, max_size=3))
def test_ground_and_symbolic_evaluation_agree(expr, width, values):
    m = (1 << width) - 1
    env = {name: v & m for name, v in zip(NAMES, values)}
    want = reference(expr, env, width)

    ground = Interpreter(width)
    for name, v in env.items():
        ground.write(ground.store, (name,), ground.num_result(bv.from_const(v, width)))
    assert ground.evaluate(expr).ground == want

    sym = Interpreter(width)
    got = sym.evaluate(expr)
    assignment = {}
    for key, value in sym.independents:
        for i, bit in enumerate(value.formula):
            assignment[sym.factory.lhs[bit]] = bool((env[key[0]] >> (width - 1 - i)) & 1)
    assert value_under(sym, got, assignment) == want


def test_interpreter_accepts_parsed_expressions():
    interp = Interpreter(8)
    assert interp.evaluate(parse_expression("(3 << 2) + 1")).ground == 13
    assert interp.evaluate(parse_expression("num2bool(0) || 1 < 2")).ground is True
