"""Commensurability classes and the decision rule.

A free product of abelian groups falls into one of four classes: finite,
two-ended (virtually Z), one-ended (virtually Z^n, n >= 2), or infinitely
ended.  Infinitely ended groups are commensurable exactly when the sets of
free ranks >= 2 among their factors agree.
"""

from freeprod import chi, classify, decide, parse_group

GROUPS = ["Z/6", "Z/2 * Z/2", "(Z x Z/4)", "Z^3", "Z^2 * Z^2 * Z/6", "Z^2 * Z * Z/5", "Z^3 * Z^3", "Z * Z"]

for text in GROUPS:
    G = parse_group(text)
    print(f"{text:18} class {classify(G)!s:14} chi {chi(G)}")

print()
for a, b in [("Z^2*Z^2*Z/6", "Z^2*Z*Z/5"), ("Z^2", "Z^3*Z^3"), ("Z/2*Z/2", "(Z x Z/4)"), ("Z", "Z/2")]:
    d = decide(parse_group(a), parse_group(b))
    print(f"{a} vs {b}: {'commensurable' if d.commensurable else 'not commensurable'}")
