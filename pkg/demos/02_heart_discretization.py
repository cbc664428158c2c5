"""Dense-time STL versus its tick-level counterpart on an electrogram trace.

Run:  python3 demos/02_heart_discretization.py
"""

from fractions import Fraction

from sstl import DiscreteTrace, check_sih, discretize_formula, eval_at, parse_formula, stl_oracle
from sstl.discretize import discretize_time

dt = Fraction(1, 1000)  # 1 kHz sampling

# Atrial pulse at 625 ms, ventricular pulse at 835 ms, 120 mV each for 3 ms.
rows = [(120 if 625 <= k < 628 else 0, 120 if 835 <= k < 838 else 0) for k in range(1500)]
w = DiscreteTrace.from_reals(("A_EGM", "V_EGM"), rows, dt=dt)

# Piecewise-constant sampling is only faithful if the signal is band-limited.
print(check_sih(fs=1000, fm=400))
print(check_sih(fs=1000, fm=600))

prop = parse_formula("A_EGM > 80 -> F[0.180,0.240] (V_EGM > 80)", "STL")
ticked = discretize_formula(prop, dt)
print("\nSTL :", prop)
print("SSTL:", ticked)

t = Fraction(625, 1000)
k = discretize_time(t, dt)
print(f"\ndense semantics at t = {float(t)} s :", stl_oracle(prop, w, t).value)
print(f"tick semantics  at k = {k}      :", eval_at(ticked, w, k).value)

# Delay the ventricle past the window and both verdicts flip.
late = DiscreteTrace.from_reals(("A_EGM", "V_EGM"), [(a, v and 0) for a, v in rows[:870]] + [(0, 120)] * 3, dt=dt)
print("\nwith a 245 ms delay:", stl_oracle(prop, late, t).value, eval_at(ticked, late, k).value)

# Wrapped in an unbounded G the property is never settled by a finite trace.
print("G (...) on the finite trace:", stl_oracle(parse_formula(f"G ({prop})", "STL"), w, t).value)
