"""Model-check the case-study properties and replay a counterexample.

Run:  python3 demos/03_model_checking.py
"""

from sstl import eval_ltlp, parse_formula, traffic_light, verify
from sstl.casestudies import all_cases, build_model

light = traffic_light()

safe = verify(light, parse_formula("G !(NS_green = 1 && EW_green = 1)"))
print("mutex:", safe.status, f"({safe.states_explored} product states)")

# The EW priority branch can hold EW green forever, so NS green is not
# guaranteed to come back.
fair = verify(light, parse_formula("G F (NS_green = 1)"))
print("fairness:", fair.status)
print(fair.counterexample.to_text())

# The lasso is an infinite run; evaluating the property on it confirms the violation.
w, loop = fair.counterexample.to_trace()
print("replayed verdict:", eval_ltlp(fair.ltlp, w, 0, loop=loop).value)

print("\nall case studies:")
for case in all_cases():
    sys = build_model(case)
    r = verify(sys, case.formula(sys.dt))
    mark = "" if r.status == case.expected else "   <-- unexpected"
    print(f"  {case.system:20} {case.prop:20} {r.status:10}{mark}")
