"""Euler-characteristic matrices and the assembly of the final representative."""

from .assembly import (
    VERIFIED,
    VERDICT_NOT_UNIT,
    VERDICT_PRECISION,
    PipelineResult,
    check_factorization,
    prefactor,
    rtilde,
    rtildetilde,
    run_pipeline,
    tamper,
    theta_epsilon_ratio,
)
from .matrices import (
    StarFillPolicy,
    build_M_Cn,
    build_script_M,
    det_M_Cn,
    det_script_M,
    euler_char_rep,
    main_group_ring,
    main_ring,
)
from .ucris import check_inertia_matrices, det_frobenius_circulant, ucris_rep
