# Checking the closed-form threshold tables against the elimination.
from treegibbs import ModelParams, reduced_coefficients
from treegibbs.diagnostics import formula_report

# Even k: every table agrees except the two-dimensional map, which is off by
# an overall factor 2^(1/(2n+1)) * theta * y.
for c in formula_report(ModelParams(4, 2, 0.5)):
    print(f"{'ok ' if c.matches else 'BAD'} {c.name}")

# Odd k: the threshold formula only works with (2n+2i+3) in the numerator,
# and the printed beta table uses the wrong binomial.
print()
for c in formula_report(ModelParams(5, 1, 0.5)):
    print(f"{'ok ' if c.matches else 'BAD'} {c.name}")
    if not c.matches and c.name.startswith("coefficients"):
        print("    printed", [round(float(x), 6) for x in c.printed])
        print("    derived", [round(float(x), 6) for x in c.derived])

# The two kernel normalizations differ only by a rescaling of theta.
for literal in (False, True):
    c = reduced_coefficients(ModelParams(2, 1, 0.0, literal_kernel=literal))
    print("literal" if literal else "default", "theta_1 =", c.theta1)
