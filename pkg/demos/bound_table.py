"""
Lower and upper density bounds
==============================

The hypercube construction gives a lower bound 2^(-l-2) for every pair
2 <= s <= r.  Upper bounds are known for s <= min(5, r) and for two
sporadic pairs that go through the weighted cluster-graph calculus.
"""

from ramsey_turan import configs

# the rows where both sides are known
pairs = [(4, 2), (4, 3), (3, 2), (3, 3), (4, 4), (10, 6), (12, 7), (10, 7)]
for r, s, lo, up, equal in configs.bounds_table(pairs):
    print(f"r={r:2d} s={s}  lower={str(lo):>5}  upper={str(up):>5}  {'sharp' if equal else ''}")

# the derivation behind (12, 7), with the axioms it leans on
print()
for line in configs.upper_bound_derivation(12, 7).lines():
    print(line)

# a configuration check on its own
cfg = configs.Configuration(3, ("3/10", 0.375, 0.375))
print()
print(cfg, "->", configs.classify_configuration(cfg, 10, 6))
