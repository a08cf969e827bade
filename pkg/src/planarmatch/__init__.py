"""Rainbow and dependent planar matchings of random bipartite graphs."""

from .graph_core import (RNG_ALGORITHM, ColourAssignment, Injection, PlanarMatching,
                         Segmentation, make_rng, sample_colouring, sample_injection,
                         segment, validate_planar)
from .rainbow import (RainbowSolution, ResourceGuardError, alpha0, binary_entropy,
                      is_rainbow, lower_tail_bound, max_rainbow_exact, max_rainbow_greedy,
                      rainbow_prob, rainbow_prob_upper, upper_tail_bound)
from .dependent import (BoundsReport, SegStats, bounds_report, chernoff_bound,
                        falling_ratio, joint_bound_A1A2, lis_length, lis_length_oracle,
                        mean_bounds_Tn, mean_bounds_Xt, mu_t, prob_A1c_bounds,
                        prob_A1c_exact, prob_joint_A1A2_exact, segmented_count,
                        tail_bound_general, var_bound_Xt)
from .montecarlo import (ExperimentConfig, ExperimentReport, brute_force_event_probs,
                         brute_force_Rn, empirical_tail, run_dependent, run_rainbow)

__version__ = "0.1.0"
