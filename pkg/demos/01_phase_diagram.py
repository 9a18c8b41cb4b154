# Phase diagram of the tree model: where do nonconstant fixed points appear?
import numpy as np

from treegibbs import ModelParams, classify, phase_regions, sweep

# For k = 2 and n = 1 the coupling lives in (-4^(1/3), 4^(1/3)).
p = ModelParams(k=2, n=1, theta=0.0)
print("domain bound", p.theta_domain_bound)

# The phase regions split that interval at theta_1.  The upper cut, where a
# nonconstant branch would touch zero, lies outside the domain.
for r in phase_regions(p):
    print(f"  ({r.lo:+.4f}, {r.hi:+.4f})  {r.classification}")

# One point from each side of theta_1
for theta in (0.5, 1.45):
    res = classify(p.with_theta(theta))
    print(theta, res.classification, "lambda* =", res.lambda_star)

# A sweep gives the bifurcation curve lambda*(theta), growing from 0 at theta_1
rows = sweep(p, np.linspace(1.0, 1.58, 30))
for row in rows[::5]:
    print(f"  theta={row.theta:.3f}  {row.classification.value:14s} lambda*={row.lambda_star}")

# Larger trees: the threshold theta_1 moves down as k grows
for k in range(2, 8):
    res = classify(ModelParams(k, 1, 0.0))
    print(f"k={k}  theta_1={res.theta1:.6f}  windows: {[str(r.classification) for r in phase_regions(ModelParams(k, 1, 0.0))]}")
