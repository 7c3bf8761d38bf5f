from .sums import (
    AdditiveCharLevel,
    LocalMultChar,
    artin_conductor_from_filtration,
    conductor_exponent,
    cyclotomic_automorphism,
    epsilon_abelian,
    gauss_sum,
    gauss_sum_cosets,
    quadratic_character,
)
from .resolvents import (
    ResolventData,
    auxiliary_ring,
    compute_E,
    compute_W_theta2,
    discriminant_of_normal_basis,
    norm_resolvent,
    normal_basis_trace_one,
    resolvent,
)
