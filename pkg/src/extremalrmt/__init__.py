"""Extremal moment bounds, exact Wick oracles, Wishart recursions, tail
bounds, and a Monte Carlo harness for nonhomogeneous Gaussian random
matrices with independent entries."""

__version__ = "0.1.0"

from .errors import (CapExceeded, DegenerateProfile, DimensionError,
                     ExactnessError, ExtremalRMTError, InvalidProfile,
                     NoConvergence, NotACrossing, OutOfWindow,
                     TransposeRequired)
from .profile import (Kind, MatrixParams, VarianceProfile, band_profile,
                      block_diagonal_profile, compute_params, iid_profile,
                      load_profile, loads_profile, make_profile, save_profile,
                      spiked_profile)
from .pairing import (Crossing, CrossingClass, Pairing, Taxonomy, catalan_chi,
                      catalan_number, classify_crossing, double_factorial,
                      enumerate_pairings)
from .wick import (PairingContribution, moment_hermitian, moment_rect_complex,
                   moment_rect_real, moment_symmetric,
                   rectangular_contributions, symmetric_contributions)
from .extremum import (ExtremalBound, MomentPolynomial, extremal_bound,
                       genus_exponent, genus_histogram, hermitian_polynomial,
                       kappa_table_rectangular, kappa_table_symmetric)
from .wishart import (BoundCheckReport, WishartProofParams, WishartTable,
                      build_table, mp_moment, proof_params, verify_bounds)
from .tails import (Flavor, TailBound, large_dev_bound, mgf_bound, prop_bound,
                    small_dev_bound)
from .montecarlo import (SimulationConfig, SimulationResult, estimate,
                         sample_matrix, sample_rng, spectral_norm,
                         wilson_halfwidth)
