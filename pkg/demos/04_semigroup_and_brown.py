"""Ornstein-Uhlenbeck kernel bounds and Brown-measure norm ratios."""

import numpy as np

from freehaag import annulus, brown_ratio, uniform_disc, verify_ultracontractivity
from freehaag.spectral import LevelDecomposition, scaled_kernel, semigroup_level_bound, sqrt_fit

ts = np.geomspace(1e-6, 10, 7)
print([round(scaled_kernel(t), 6) for t in ts])
print(verify_ultracontractivity(2.0).to_json())

h = LevelDecomposition.from_mapping({1: 1.0, 2: 0.5, 5: 2.0})
for t in (0.1, 1.0, 5.0):
    b = semigroup_level_bound(h, t, 1.0)
    print(t, b.level_sum, b.closed_form)

# Uniform disc: ratio is exactly sqrt(n+1)
print([round(brown_ratio(uniform_disc(), n) ** 2, 8) for n in (1, 2, 3, 10)])

# Annulus: ratio / sqrt(n) settles down
fit = sqrt_fit(annulus(0.5, 1.0), range(5, 41, 5))
print([round(c, 4) for c in fit.constants], "spread", round(fit.spread, 4))
