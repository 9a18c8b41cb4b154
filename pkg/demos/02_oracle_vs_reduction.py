# The same fixed points two ways: quadrature iteration and the exact reduction.
import numpy as np

from treegibbs import (
    ModelParams,
    build_rule,
    classify,
    fixed_point_grid,
    multi_start_fixed_points,
    residual_norm,
)
from treegibbs.quadrature import endpoint_values

p = ModelParams(k=3, n=2, theta=1.2)
rule = build_rule(p.n, 48)  # 48 Gauss points on each side of t = 1/2

# Oracle: iterate H from a family of starting functions and keep the positive limits
found = multi_start_fixed_points(p, rule)
print("oracle finds", len(found), "positive fixed points")
for f in found:
    print("  f(0), f(1) =", endpoint_values(p, rule, f), " residual", residual_norm(p, rule, f))

# Reduction: f = c (1 + lam phi) with lam a root of one polynomial
res = classify(p)
print("classify says", res.classification)
for fp in res.fixed_points:
    g = fixed_point_grid(rule, fp.c, fp.lam)
    gap = min(g.sup_distance(f) for f in found)
    print(f"  c={fp.c:.12f} lam={fp.lam:+.12f}  distance to oracle {gap:.2e}")

# The nonconstant pair are mirror images under t -> 1 - t
a, b = res.fixed_points[1], res.fixed_points[2]
t = np.linspace(0, 1, 5)
print(np.allclose(a(t), b(1 - t)))
