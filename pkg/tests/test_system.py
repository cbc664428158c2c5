import random

import pytest
from gen import random_trace
from hypothesis import given, settings
from hypothesis import strategies as st

from sstl.casestudies import HEART
from sstl.discretize import discretize_formula
from sstl.errors import ModelError
from sstl.models import MODELS, heart_abstract, load_model, pedestrian_crossing, traffic_light
from sstl.monitor import eval_all
from sstl.parser import parse_formula
from sstl.system import from_trace, parse_model, reachable_states, simulate
from sstl.verdict import Verdict

COUNTER = """
var x in [0..3] init 0;
trans inc: guard x < 3 -> updates { x := x + 1 };
"""


def test_parse_and_step():
    sys = parse_model(COUNTER)
    assert sys.var_names == ("x",)
    assert sys.successors((0,)) == [(1,)]


def test_idle_when_nothing_enabled():
    assert parse_model(COUNTER).successors((3,)) == [(3,)]


def test_choose_and_processes_interleave_synchronously():
    sys = parse_model(
        """
        var a in [0..1] init 0;
        var b in [0..2] init 0;
        process p { trans t: guard true -> choose { updates { a := 1 } | updates { } }; }
        process q { trans t: guard a == 0 -> updates { b := b + 1 }; }
        """
    )
    assert sys.successors((0, 0)) == [(1, 1), (0, 1)]
    assert sys.successors((1, 1)) == [(1, 1)]


def test_limit_freezes_the_model():
    sys = parse_model("limit 2;\n" + COUNTER)
    states = [sys.initial_states()[0]]
    for _ in range(4):
        states.append(sys.successors(states[-1])[0])
    assert [s[0] for s in states] == [0, 1, 2, 2, 2]
    assert sys.var_names == ("x",)


def test_constants_and_operators():
    sys = parse_model(
        """
        const K = 7;
        var x in [-10..10] init 3;
        trans t: guard x % 2 == 1 && !(x > K) -> updates { x := max(-x, x / 2) - 1 };
        """
    )
    assert sys.successors((3,)) == [(0,)]
    assert sys.successors((-3,)) == [(2,)]  # floor division: -3 / 2 == -2


@pytest.mark.parametrize(
    "text, msg",
    [
        ("var x in [0..3] init 5;", "outside"),
        ("var x in [3..0] init 0;", "empty domain"),
        ("var x in [0..3] init 0;\ntrans t: guard true -> updates { y := 1 };", "undeclared"),
        ("var x in [0..3] init 0;\ntrans t: guard true -> updates { x := 1, x := 2 };", "twice"),
        ("var x in [0..3] init 0;\ntrans t: guard x < -> updates { };", "line 2"),
        ("", "no variables"),
    ],
)
def test_model_errors(text, msg):
    with pytest.raises(ModelError, match=msg):
        parse_model(text)


def test_runtime_domain_violation():
    sys = parse_model("var x in [0..3] init 3;\ntrans t: guard true -> updates { x := x + 1 };")
    with pytest.raises(ModelError, match="outside"):
        sys.successors((3,))


def test_conflicting_writes():
    sys = parse_model(
        """
        var x in [0..3] init 0;
        process a { trans t: guard true -> updates { x := 1 }; }
        process b { trans t: guard true -> updates { x := 2 }; }
        """
    )
    with pytest.raises(ModelError, match="conflicting"):
        sys.successors((0,))


def test_load_model_by_name_and_path(tmp_path):
    assert load_model("traffic_light").name == "traffic_light"
    path = tmp_path / "counter.model"
    path.write_text(COUNTER)
    assert load_model(str(path)).name == "counter"
    with pytest.raises(ValueError):
        load_model("no_such_model")


@pytest.mark.parametrize("name", ["traffic_light", "pedestrian_crossing", "heart_healthy", "heart_av_block"])
def test_reachable_states_stay_in_domain(name):
    sys = MODELS[name]()
    for s in reachable_states(sys):
        assert all(v.lo <= x <= v.hi for v, x in zip(sys.variables, s))


# -- simulation -------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 200))
def test_simulate_is_deterministic(seed, ticks):
    assert simulate(pedestrian_crossing(), ticks, seed) == simulate(pedestrian_crossing(), ticks, seed)


def test_one_tick_is_the_initial_valuation():
    sys = traffic_light()
    w = simulate(sys, 1, seed=5)
    assert len(w) == 1 and w.values[0] == sys.init


def test_traffic_mutex_on_simulated_run():
    w = simulate(traffic_light(), 100, seed=1)
    body = parse_formula("!(NS_green = 1 && EW_green = 1)")
    assert set(eval_all(body, w)) == {Verdict.TRUE}


def _av_body():
    text = dict(HEART)["AV"]
    return discretize_formula(parse_formula(text, "STL").arg, heart_abstract().dt)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_healthy_heart_conducts_in_window(seed):
    w = simulate(heart_abstract("healthy"), 5000, seed)
    a, v = w.column("A_EGM"), w.column("V_EGM")
    onsets_a = [k for k in range(1, len(w)) if a[k] > 80000 and a[k - 1] <= 80000]
    onsets_v = [k for k in range(1, len(w)) if v[k] > 80000 and v[k - 1] <= 80000]
    assert len(onsets_a) >= 5
    for k in onsets_a:
        if k + 240 < len(w):
            assert any(180 <= m - k <= 240 for m in onsets_v)
    row = eval_all(_av_body(), w)
    assert all(r is Verdict.TRUE for r in row if r.conclusive)


@pytest.mark.parametrize("seed", [0, 1])
def test_healthy_heart_other_properties(seed):
    w = simulate(heart_abstract("healthy"), 5000, seed)
    dt = w.dt
    vv = discretize_formula(parse_formula(dict(HEART)["VV"], "STL").arg, dt)
    assert all(r is Verdict.TRUE for r in eval_all(vv, w) if r.conclusive)
    for prop in ("liveness_A", "liveness_V"):
        phi = discretize_formula(parse_formula(dict(HEART)[prop], "STL"), dt)
        assert eval_all(phi, w)[0] is Verdict.TRUE


def test_av_block_heart_violates_av_on_a_run():
    w = simulate(heart_abstract("av_block"), 3000, 0)
    assert Verdict.FALSE in eval_all(_av_body(), w)


def test_unknown_heart_configuration():
    with pytest.raises(ValueError, match="unknown heart"):
        heart_abstract("tachycardia")


def test_from_trace_replays_then_holds_last_state():
    w = random_trace(random.Random(4), length=6)
    sys = from_trace(w)
    s = sys.initial_states()[0]
    seen = []
    for _ in range(8):
        seen.append(s[: len(w.signals)])
        (s,) = sys.successors(s)
    assert seen == list(w.values) + [w.values[-1]] * 2
