"""Monitor and translate a bounded Until on an eleven-tick trace.

Run:  python3 demos/01_worked_example.py
"""

from sstl import DiscreteTrace, eval_all, eval_ltlp_all, parse_formula, translate, translate_impl

# x1 is non-negative at ticks 0..8, x2 from tick 7 on
x1 = [1, 1, 1, 1, 1, 1, 1, 1, 1, -1, -1]
x2 = [-1, -1, -1, -1, -1, -1, -1, 1, 1, 1, 1]
w = DiscreteTrace.from_reals(("x1", "x2"), list(zip(x1, x2)))


def row(verdicts):
    return " ".join({"True": "1", "False": "0", "Inconclusive": "?"}[v.value] for v in verdicts)


print(f"{'j':28}", " ".join(str(j % 10) for j in range(len(w))))
for text in ["x1 >= 0", "x2 >= 0", "(x1 >= 0) U (x2 >= 0)", "(x1 >= 0) U[5,10] (x2 >= 0)"]:
    print(f"{text:28}", row(eval_all(parse_formula(text), w)))

# The bounded Until asks for a witness in [t+5, t+10] with x1 >= 0 until then.
# At t = 4 the witness is tick 9; at t = 5 the window starts at 10 but x1
# already failed at 9.
bounded = parse_formula("(x1 >= 0) U[5,10] (x2 >= 0)")
for tr in (translate, translate_impl):
    psi = tr(bounded)
    print(f"\n{tr.__name__}: {psi}")
    print(f"{'':28}", row(eval_ltlp_all(psi, w)))
