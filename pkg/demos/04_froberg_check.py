"""
Checking the predicted Macaulay ranks exactly
=============================================

For integer inputs the rank of each Macaulay matrix is computed modulo large
primes, so the comparison with the truncated series is exact.  Below the
threshold D+1 inputs the prediction can fail: five quadrics in six variables
cut out extra points besides the plane, and the rank stalls 16 short.
"""
from idealreg import check_froberg, froberg_table

for D, d in [(4, 1), (5, 2), (6, 3)]:
    table = froberg_table([2] * (D + 1), D, d, seed=0)
    print(f"D={D} d={d}:", " ".join(f"k={c.k}:{c.rank}/{c.expected}" for c in table),
          "verified" if all(c.verified for c in table) else "FAILED")

for k in (6, 7):
    c = check_froberg([2] * 5, 6, 3, k, seed=0, retries=1)
    print(f"5 quadrics, D=6, d=3, k={k}: rank {c.rank}, predicted {c.expected}, dim s_k {c.dim_s_k}")
