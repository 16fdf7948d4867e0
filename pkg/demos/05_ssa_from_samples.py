"""
Stationary subspace from raw samples
====================================

Each epoch shares the same sources along a hidden d-dimensional direction
set, while the remaining directions change their mixing from epoch to epoch.
Covariance differences are quadrics vanishing on the stationary subspace.
"""
import numpy as np

from idealreg import EpochData, estimate_projection, subspace_angle

rng = np.random.default_rng(1)
D, d, n = 6, 2, 500
B, _ = np.linalg.qr(rng.standard_normal((D, D)))  # generic orientation
stationary = rng.standard_normal((n, d))

epochs = []
for _ in range(D + 3):
    moving = rng.standard_normal((n, D - d)) @ rng.standard_normal((D - d, D - d))
    epochs.append(EpochData.from_samples(np.hstack([stationary, moving]) @ B.T))

est = estimate_projection(epochs, d)
print("estimated basis:\n", np.round(est.subspace_basis, 3))
print("angle to truth:", subspace_angle(est.subspace_basis, B[:, :d].T))
