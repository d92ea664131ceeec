"""Kripke models: the frame class, strong persistence, and model checking.

Run:  python demos/02_kripke_models.py
"""

from glpstar import (
    adjoin_root,
    check_jstar_frame,
    check_strong_persistence,
    export_dot,
    find_roots,
    model_check,
    parse_formula,
    parse_model,
    render_model,
    valid_in_model,
)

GOOD = """
worlds a b c
rel 1: a b
rel 0: a c
rel 0: b c
val p:1 = {a, b}
val q:w = {c}
root a
"""

model = parse_model(GOOD)
print("== validating a model ==")
print("frame violations:      ", check_jstar_frame(model))
print("persistence violations:", check_strong_persistence(model))

print("\n== model checking ==")
for text in ["<1>p:1", "[1]p:1", "<0>q", "<1>p:1 -> p:1"]:
    f = parse_formula(text)
    print(f"  a |= {text:15s} : {model_check(model, 'a', f)}")
    print(f"  valid everywhere    : {valid_in_model(model, f)}")

print("\n== roots ==")
print("one-step roots:", set(find_roots(model)))

# A bad frame: a reflexive point breaks converse well-foundedness, and a
# level-1 edge whose endpoints disagree at level 0 breaks the inter-level
# condition.
BAD = """
worlds a b
rel 0: a a
rel 1: a b
val p:0 = {b}
"""
bad = parse_model(BAD)
print("\n== violations, itemized ==")
for violation in check_jstar_frame(bad):
    print("  frame:", violation)
for violation in check_strong_persistence(bad):
    print("  persistence:", violation)

print("\n== adjoining a root ==")
rooted = adjoin_root(model)
print(render_model(rooted))
print("still valid:", not check_jstar_frame(rooted) and not check_strong_persistence(rooted))

print("== DOT export (root highlighted) ==")
print(export_dot(model, highlight="a"))
