"""Hecke eigenvalues of the discriminant form, twisted L-functions and
empirical moments of character twists."""

from .arith import PrimeSieve, euler_weight_A, get_sieve, kronecker, mertens_sum, odd_squarefree
from .dirichlet import CharacterGroup, DirichletCharacter, enumerate_group, gauss_sum, quadratic_character
from .eigenform import EigenformTable, SatakePair, build_table, satake, shared_table
from .lfunc import (
    EnvelopeValue,
    LValue,
    ShiftConfig,
    envelope_fixed_mod,
    envelope_quadratic,
    g1,
    g2,
    l_sym_square,
    l_twisted,
    log_l_majorant,
    log_lambda0,
    shift_weight_h,
    zeta,
)
from .moments import (
    MomentReport,
    SmoothingKernel,
    fit_exponent,
    make_kernel,
    moment_fixed_mod,
    moment_quadratic,
    verify_lemma_prsum,
    verify_prime_cancellation,
)

__version__ = "0.1.0"
