"""Vilenkin-Fourier analysis on bounded groups: kernels, means, maximal operators and H1."""
from .errors import (CheckFailedError, ConfigError, IncompatibleOperandsError, InvalidAtomError,
                     InvalidBasisError, InvalidExponentError, OracleSizeError, OutOfRangeError,
                     ResolutionTooLargeError, UndefinedMeanError, VilenkinError)
from .group import (DigitExpansion, VilenkinBasis, build_basis, digit_add, expand, harmonic,
                    harmonic_exact, harmonic_numbers, q_index, walsh)
from .signal import (GridFunction, constant, cylinder_indicator, integrate, norm_p, restrict_mean,
                     zeros)
from .transform import (Multiplier, Spectrum, apply_multiplier, character, character_table, forward,
                        inverse, naive_forward, naive_inverse)
from .kernels import (KernelSpec, ThetaSplit, dirichlet, fejer, log_kernel, shift_identity_check,
                      theta, theta_at_zero, theta_at_zero_closed, theta_split)
from .means import (MaximalPair, NorlundWeights, WeightFunction, fejer_mean, log_mean, maximal_pair,
                    maximal_pairs, maximal_ratio, maximal_ratio_naive, norlund_mean, partial_sum,
                    partial_sum_maximals)
from .hardy import (Atom, CounterexampleSpec, Cylinder, block_atom, build_alpha, decomposition_bound,
                    divergence_split, divergent_function, greedy_alpha, h1_norm, maximal_function,
                    sharpness_function, sharpness_identity, validate_atom)

__version__ = "0.1.0"
