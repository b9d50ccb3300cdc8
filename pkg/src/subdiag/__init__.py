"""Diagonals of direct-product substitution tilings and their coincidence densities."""
from .core import (FixedPoint, Substitution, SubstitutionError, SubstitutionSyntaxError, apply,
                   detect_periodicity, fixed_point_prefix, is_continuous, is_primitive, mirror,
                   parikh, parse_substitution)
from .exact import QuadVal, WeightVector, classify, eigenvalues, letter_frequencies, pf_weight_vector, substitution_matrix
from .product import diagonal_sequence, diagonal_substitution, product_patch
from .balance import Block, Caps, decompose, induced_substitution, sync_points, verify_slope_law
from .density import (coincidence_density_via_induced, coincidence_prefix_density, density_series,
                      generic_overlap, survey, theorem_main_check)
from .selfsim import diagonal_frequencies, dot_substitution, is_isomorphic, refine, selfsim_diagonal
from .geometry import abelian_path, curve_approximant, no_balanced_evidence

__version__ = "0.1.0"
