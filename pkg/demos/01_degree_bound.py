"""
How far do the inputs have to be multiplied up?
================================================

Five quadrics vanishing on a 3-plane in 6 variables.  The difference series
tells us the degree N where their multiples should fill the degree-N part of
the ideal, and the count-crossing degree is the cheaper diagnostic where the
number of multiples first exceeds the dimension to be filled.
"""
from idealreg import degree_bound_report, linear_ideal_dim

report = degree_bound_report([2] * 5, 6, 3)
print("series coefficients up to N:", list(report.series.coeffs[: report.N + 1]))
print("first non-positive coefficient at N =", report.N)
print("count crossing at degree", report.count_crossing)
print("identifiable (more inputs than variables):", report.identifiable)

# one more quadric puts us in the regime where the bound is a theorem
for m in (7, 8, 10):
    r = degree_bound_report([2] * m, 6, 3)
    print(f"m={m:2d}: N={r.N}, dim s_N={linear_ideal_dim(r.N, 6, 3)}, conjectural={r.conjectural}")
