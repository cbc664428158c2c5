"""Built-in case-study models.

The models are reconstructions built to exhibit the verdict pattern of the
three case studies; each docstring names the branch that causes every
violation.
"""

from __future__ import annotations

from .system import TransitionSystem, parse_model

TRAFFIC_LIGHT = """\
# Two-way junction.  Each phase lasts three ticks (timer 0, 1, 2).
# phase 0: NS green, 1: NS yellow, 2: EW green, 3: EW yellow
var NS_green  in [0..1] init 1;
var NS_yellow in [0..1] init 0;
var NS_red    in [0..1] init 0;
var EW_green  in [0..1] init 0;
var EW_yellow in [0..1] init 0;
var EW_red    in [0..1] init 1;
var phase     in [0..3] init 0;
var timer     in [0..2] init 0;

process controller {
  trans hold: guard timer < 2 -> updates { timer := timer + 1 };
  trans ns_yellow: guard phase == 0 && timer == 2 ->
      updates { phase := 1, timer := 0, NS_green := 0, NS_yellow := 1 };
  trans ns_red: guard phase == 1 && timer == 2 ->
      updates { phase := 2, timer := 0, NS_yellow := 0, NS_red := 1, EW_red := 0, EW_green := 1 };
  trans ew_yellow: guard phase == 2 && timer == 2 ->
      updates { phase := 3, timer := 0, EW_green := 0, EW_yellow := 1 };
  # EW priority request: the EW green phase may be extended indefinitely
  trans ew_priority: guard phase == 2 && timer == 2 -> updates { timer := 2 };
  trans ns_green: guard phase == 3 && timer == 2 ->
      updates { phase := 0, timer := 0, EW_yellow := 0, EW_red := 1, NS_red := 0, NS_green := 1 };
}
"""

PEDESTRIAN_CROSSING = """\
var cars_green   in [0..1] init 1;
var walk_signal  in [0..1] init 0;
var waiting_peds in [0..5] init 0;
var timer        in [0..3] init 0;

# at most one pedestrian arrives per tick; the queue empties while walking
process arrivals {
  trans arrive: guard walk_signal == 0 && waiting_peds < 5 ->
      choose { updates { waiting_peds := waiting_peds + 1 } | updates { } };
  trans cross: guard walk_signal == 1 -> updates { waiting_peds := 0 };
}

# walk is granted only once three pedestrians wait, and lasts four ticks
process controller {
  trans grant: guard cars_green == 1 && waiting_peds >= 3 ->
      updates { cars_green := 0, walk_signal := 1, timer := 0 };
  trans walking: guard walk_signal == 1 && timer < 3 -> updates { timer := timer + 1 };
  trans end_walk: guard walk_signal == 1 && timer == 3 ->
      updates { walk_signal := 0, cars_green := 1, timer := 0 };
}
"""

_HEART_HEAD = """\
dt 0.001;
factor 1000;
const PULSE = 120000;      # 120 mV electrogram peak
const PERIOD = 800;        # sinus period in ticks
var A_EGM in [0..120000] init 0;
var V_EGM in [0..120000] init 0;
var sa    in [0..799] init 100;
var a_len in [0..2] init 0;
var v_len in [0..2] init 0;

# sinus node: fires every PERIOD ticks, the atrial pulse lasts three ticks
process sa_node {
  trans fire: guard sa == 0 -> updates { sa := PERIOD - 1, A_EGM := PULSE, a_len := 2 };
  trans count: guard sa > 0 -> updates { sa := sa - 1 };
}
process atrium {
  trans hold: guard a_len > 0 -> updates { a_len := a_len - 1 };
  trans relax: guard a_len == 0 && A_EGM > 0 -> updates { A_EGM := 0 };
}
process ventricle {
  trans hold: guard v_len > 0 -> updates { v_len := v_len - 1 };
  trans relax: guard v_len == 0 && V_EGM > 0 -> updates { V_EGM := 0 };
}
"""

# The A->V delay is counted from the first tick of the atrial pulse to the
# first tick of the ventricular pulse.
_CONDUCTION = """\
var av in [0..300] init 0;
process av_node {
  trans start: guard sa == 0 -> choose { @DELAYS@ };
  trans wait: guard av > 1 -> updates { av := av - 1 };
  trans conduct: guard av == 1 -> updates { av := 0, V_EGM := PULSE, v_len := 2 };
}
"""

_ESCAPE = """\
# no A->V conduction: the ventricle only beats from its own escape rhythm
var esc in [0..899] init 450;
process escape {
  trans fire: guard esc == 0 -> updates { esc := 899, V_EGM := PULSE, v_len := 2 };
  trans count: guard esc > 0 -> updates { esc := esc - 1 };
}
"""

HEART_DELAYS = {
    "healthy": (190, 200, 210),
    "lbb_block": (250, 260, 270),
    "rbb_block": (245, 255),
}
HEART_CONFIGS = ("healthy", "av_block", "lbb_block", "rbb_block")


def heart_text(config: str = "healthy") -> str:
    if config == "av_block":
        return _HEART_HEAD + _ESCAPE
    try:
        delays = HEART_DELAYS[config]
    except KeyError:
        raise ValueError(f"unknown heart configuration {config!r}; expected one of {HEART_CONFIGS}") from None
    alts = " | ".join(f"updates {{ av := {d} }}" for d in delays)
    return _HEART_HEAD + _CONDUCTION.replace("@DELAYS@", alts)


def traffic_light() -> TransitionSystem:
    """NS/EW phased controller.

    Violates ``G F NS_green`` through the ``ew_priority`` branch, which can
    keep EW green forever.  Every other table property holds.
    """
    return parse_model(TRAFFIC_LIGHT, "traffic_light")


def pedestrian_crossing() -> TransitionSystem:
    """Crossing that serves pedestrians only in batches of three.

    With two pedestrians waiting and no further arrivals, walk is never
    granted; that run violates both response properties.
    """
    return parse_model(PEDESTRIAN_CROSSING, "pedestrian_crossing")


def heart_abstract(config: str = "healthy") -> TransitionSystem:
    """Timed abstraction of the heart's electrogram behaviour.

    ``healthy`` conducts A to V after 190, 200 or 210 ticks.  The bundle
    branch blocks slow conduction past the 240-tick bound (``lbb_block``
    250 to 270, ``rbb_block`` 245 or 255), and ``av_block`` never conducts,
    leaving a 900-tick ventricular escape rhythm.  Each of these violates the
    A to V property while the ventricle keeps beating every 600 to 1000 ticks.
    """
    return parse_model(heart_text(config), f"heart_{config}")


MODELS = {
    "traffic_light": traffic_light,
    "pedestrian_crossing": pedestrian_crossing,
    "heart": heart_abstract,
    **{f"heart_{c}": (lambda c=c: heart_abstract(c)) for c in HEART_CONFIGS},
}


def load_model(name_or_path: str) -> TransitionSystem:
    """A built-in model by name, or a model file."""
    if name_or_path in MODELS:
        return MODELS[name_or_path]()
    from pathlib import Path

    path = Path(name_or_path)
    if not path.exists():
        raise ValueError(f"no built-in model or file named {name_or_path!r}; built-ins: {', '.join(MODELS)}")
    return parse_model(path.read_text(encoding="utf-8"), path.stem)
