"""
Error against noise level
=========================

Stationary-subspace estimation on synthetic covariances: 26 epochs in 10
dimensions whose covariances agree on a random subspace, each perturbed by
symmetric noise of size sigma.  The median angle grows roughly linearly with
sigma until it saturates near pi/2.
"""
from idealreg import run_sweep, summarize

sigmas = [0.0, 1e-6, 1e-4, 1e-2, 1e-1]
rows = run_sweep(sigmas, trials=20, D=10, epochs=26, jobs=2)
for s in summarize(rows)["per_sigma"]:
    print(f"sigma={s['sigma']:7.0e}  median={s['median']:.2e}  IQR=[{s['q25']:.2e}, {s['q75']:.2e}]")
