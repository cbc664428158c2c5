import random
from fractions import Fraction

import pytest
from gen import random_sstl, random_stl_instance
from hypothesis import given, settings
from hypothesis import strategies as st

from sstl.discretize import check_sih, discretize_formula, discretize_time, quantize
from sstl.errors import DialectError, FormulaSyntaxError, TraceFormatError
from sstl.formula import (
    INF,
    TRUE,
    Always,
    Atom,
    Eventually,
    GuardAtom,
    Implies,
    LinearPredicate,
    Not,
    RealInterval,
    TickInterval,
    Until,
)
from sstl.parser import parse_formula
from sstl.trace import DiscreteTrace, load_trace, parse_trace_csv

# -- parser -----------------------------------------------------------------------


def test_parse_av_property_shape():
    phi = parse_formula("G (A_EGM > 80 -> F[0.180,0.240] (V_EGM > 80))", "STL")
    match phi:
        case Always(arg=Implies(left=Atom(), right=Eventually(arg=Atom(), interval=iv)), interval=None):
            assert iv == RealInterval(Fraction(180, 1000), Fraction(240, 1000))
        case _:
            pytest.fail(f"unexpected shape {phi!r}")


def test_parse_true():
    assert parse_formula("true") == TRUE


def test_parse_bounded_until_ticks():
    phi = parse_formula("(x1 >= 0) U[5,10] (x2 >= 0)", "SSTL")
    assert isinstance(phi, Until)
    assert phi.interval == TickInterval(5, 10)


def test_linear_predicate_scaling():
    phi = parse_formula("2*y1 - 0.5*y2 + z = -10.25", "SSTL")
    p = phi.pred
    assert dict(p.terms) == {"y1": 2000, "y2": -500, "z": 1000}
    assert p.relation == "=" and p.offset == -10250


def test_until_is_right_associative():
    phi = parse_formula("a > 0 U b > 0 U c > 0")
    assert isinstance(phi.right, Until) and isinstance(phi.left, Atom)


def test_precedence_and_binds_tighter_than_or_and_implies():
    phi = parse_formula("a > 0 || b > 0 && c > 0 -> d > 0")
    assert isinstance(phi, Implies)
    assert str(phi) == "a > 0 || b > 0 && c > 0 -> d > 0"


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("G (x > 1 &&\n  )")
    assert info.value.line == 2
    assert info.value.column == 3


@pytest.mark.parametrize(
    "text",
    ["F[5,2] x > 0", "F[0.5,1] x > 0", "x > 0 U", "G (x > 0", "x >> 1", "X x > 0", "F[1,2] x >"],
)
def test_sstl_rejects(text):
    with pytest.raises((FormulaSyntaxError, DialectError)):
        parse_formula(text, "SSTL")


def test_unknown_signal_rejected_when_declared():
    with pytest.raises(FormulaSyntaxError, match="unknown signal"):
        parse_formula("G speed > 3", signals=["x"])


def test_ltlp_guards_and_binders():
    psi = parse_formula("(x >= 0 && j<=j0@1+9) U@1 (y >= 0 && j>=j0@1+5)", "LTLP")
    assert psi.obligation == 1
    assert psi.right.right.pred == GuardAtom("lower", 1, 5)
    assert psi.left.right.pred == GuardAtom("upper", 1, 0, 9)
    assert parse_formula("F@2 (p > 0 && within[3,inf]@2)", "LTLP").arg.right.pred.hi == INF


def test_ltlp_rejects_intervals():
    with pytest.raises((FormulaSyntaxError, DialectError)):
        parse_formula("F[1,2] x > 0", "LTLP")


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_print_parse_roundtrip_sstl(seed):
    phi = random_sstl(random.Random(seed))
    assert parse_formula(str(phi), "SSTL") == phi


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_print_parse_roundtrip_stl(seed):
    phi, _, _ = random_stl_instance(random.Random(seed))
    assert parse_formula(str(phi), "STL") == phi


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["conceptual", "impl"]))
def test_print_parse_roundtrip_ltlp(seed, encoding):
    from sstl.translate import translate_with

    psi = translate_with(random_sstl(random.Random(seed)), encoding)
    assert parse_formula(str(psi), "LTLP") == psi


# -- discretization ---------------------------------------------------------------


def test_discretize_time_examples():
    assert discretize_time(0.625, 0.001) == 625
    assert discretize_time(0, Fraction(1, 7)) == 0
    assert discretize_time(1.25, 0.5) == 2


@pytest.mark.parametrize("dt", [0, -0.5])
def test_discretize_time_rejects_bad_dt(dt):
    with pytest.raises(ValueError):
        discretize_time(1, dt)


@given(
    st.fractions(min_value=0, max_value=10**6),
    st.fractions(min_value=0, max_value=10**6),
    st.fractions(min_value=Fraction(1, 10**4), max_value=100),
)
def test_discretize_time_monotone(t1, t2, dt):
    lo, hi = sorted((t1, t2))
    assert discretize_time(lo, dt) <= discretize_time(hi, dt)


@given(st.integers(0, 10**9), st.fractions(min_value=Fraction(1, 10**4), max_value=100))
def test_discretize_time_exact_at_boundaries(k, dt):
    assert discretize_time(k * dt, dt) == k


@given(st.sampled_from(["0.001", "0.1", "0.3", "0.007"]), st.integers(0, 10**6))
def test_decimal_boundaries_do_not_suffer_float_error(dt, k):
    # 0.3 / 0.1 is 2.9999999999999996 in binary floating point
    assert discretize_time(k * Fraction(dt), float(dt)) == k


def test_discretize_formula_examples():
    phi = parse_formula("F[0.180,0.240] (V > 80)", "STL")
    assert discretize_formula(phi, 0.001).interval == TickInterval(180, 240)
    assert discretize_formula(parse_formula("F[0.5,1.25] (V > 80)", "STL"), 0.5).interval == TickInterval(1, 2)
    g = discretize_formula(parse_formula("G (V > 80)", "STL"), 0.001)
    assert isinstance(g, Always) and g.interval is None


def test_discretize_keeps_unbounded_marker():
    phi = discretize_formula(parse_formula("F[0.5,inf] (V > 80)", "STL"), Fraction(1, 4))
    assert phi.interval == TickInterval(2, INF)


def test_discretize_formula_rejects_sstl():
    with pytest.raises(DialectError):
        discretize_formula(parse_formula("F[1,2] x > 0", "SSTL"), 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_discretize_preserves_shape(seed):
    phi, dt, _ = random_stl_instance(random.Random(seed), depth=4)
    out = discretize_formula(phi, dt)
    assert out.size() == phi.size()
    assert [type(n) for n in out.walk()] == [type(n) for n in phi.walk()]


# -- quantization -----------------------------------------------------------------


def test_quantize_examples():
    assert quantize(0.0805, 1000) == 81
    assert quantize(0.0, 1000) == 0
    assert quantize(80.0, 1000) == 80000
    assert quantize(-0.0805, 1000) == -81


def test_quantize_against_rational_oracle():
    # round half away from zero, computed with integer arithmetic only
    for num in range(-2000, 2001):
        x = Fraction(num, 2000)
        scaled = x * 1000
        expect = int(abs(scaled) + Fraction(1, 2)) * (1 if scaled >= 0 else -1)
        assert quantize(x, 1000) == expect


def test_quantize_overflow():
    with pytest.raises(OverflowError):
        quantize(10.0**18, 1000)


@given(st.fractions(min_value=-(10**9), max_value=10**9), st.fractions(min_value=-(10**9), max_value=10**9))
def test_quantize_monotone(a, b):
    lo, hi = sorted((a, b))
    assert quantize(lo) <= quantize(hi)


@given(st.integers(1, 10**6))
def test_quantize_zero(f):
    assert quantize(0, f) == 0


# -- SIH --------------------------------------------------------------------------


def test_sih_examples():
    assert check_sih(1000, 400, 2).satisfied
    assert check_sih(1000, 0, 2).satisfied
    assert not check_sih(1000, 600, 2).satisfied


def test_sih_rejects_small_kappa():
    with pytest.raises(ValueError):
        check_sih(1000, 10, 1)


@given(st.integers(1, 10**6), st.integers(0, 10**6), st.integers(2, 10))
def test_sih_report_invariant(fs, fm, kappa):
    r = check_sih(fs, fm, kappa)
    assert r.satisfied == (fs >= kappa * fm)


# -- traces -----------------------------------------------------------------------


def test_trace_csv_roundtrip(tmp_path):
    w = DiscreteTrace.from_reals(("a", "b"), [(0.5, -1), (80, 0.0805)], dt=Fraction(1, 1000))
    path = tmp_path / "w.csv"
    path.write_text(w.to_csv())
    back = load_trace(path, dt=Fraction(1, 1000))
    assert back.values == ((500, -1000), (80000, 81))
    assert back == w


@pytest.mark.parametrize(
    "text, msg",
    [
        ("tick,a\n0,1\n2,1\n", "tick"),
        ("tick,a,b\n0,1,2\n1,1\n", "fields"),
        ("tick,a\n0,abc\n", "unparseable"),
        ("tick,a\n", "no rows"),
    ],
)
def test_trace_csv_errors(text, msg):
    with pytest.raises(TraceFormatError, match=msg):
        parse_trace_csv(text)


def test_linear_predicate_needs_a_term():
    with pytest.raises(ValueError):
        LinearPredicate((), ">=", 0)


def test_false_is_negated_true():
    assert parse_formula("false") == Not(TRUE)
    assert parse_formula(str(Not(TRUE))) == Not(TRUE)
