"""Exact free-probability combinatorics for Haagerup-type inequalities on
R-diagonal n-particle spaces."""

from .bijection import connectedness, phi_map, q_map
from .cumulants import (DeterminingSequence, GaussianRational, ParticleTensor, abs_cumulant_sum,
                        cumulants_from_moments, kappa_block, kappa_pi, mixed_moment,
                        moment_from_cumulants, particle_moment, two_norm)
from .errors import CapabilityError, SizeError, TruncationError
from .haagerup import (InequalityReport, circular_power_norm, haagerup_constant,
                       larsen_power_bound, main_lemma_bound, sharpness_haar,
                       verify_main_lemma, verify_strong_haagerup)
from .models import (RDiagonalModel, b_model, chebyshev_moment_oracle, circular,
                     cumulant_growth_bound, dominating_model, free_group_moment_oracle,
                     haar_unitary)
from .partitions import (Multichain, Partition, catalan, enumerate_multichains, enumerate_nc,
                         fuss_catalan, interval, is_noncrossing, leq, mobius)
from .patterns import (PatternWord, StarPairing, enumerate_alternating_partitions,
                       enumerate_no_intrablock_pairings, enumerate_star_pairings, pattern)
from .spectral import (LevelDecomposition, RadialDensity, annulus, brown_ratio, ou_kernel_bound,
                       semigroup_level_bound, uniform_disc, verify_ultracontractivity)

__version__ = "0.1.0"
