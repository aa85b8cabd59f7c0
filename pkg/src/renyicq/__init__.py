"""Quantum alpha-z Renyi divergences, weighted divergence centers of
classical-quantum channels, and coding exponent curves."""

from .backend import active_backend, available_backends
from .centers import (
    CenterResult,
    closed_form_center_z1,
    divergence_radius,
    fixed_point_map_D,
    fixed_point_map_Qbar,
    fixed_point_map_tsallis,
    holevo_quantity,
    mutual_information,
    mutual_information_direct,
    oracle_grid_center,
    solve_center_D,
    solve_center_Qbar,
    solve_center_direct,
    solve_center_tsallis,
    stationarity_residual,
    weighted_divergence,
    weighted_radius_beta,
)
from .channels import (
    GcqChannel,
    InputDistribution,
    TypeClass,
    average_output,
    lifted_state,
    load_channel,
    noiseless_channel,
    product_channel,
    product_distribution,
    random_cq_channel,
    save_channel,
    type_class_size,
    type_mixing_check,
    type_of,
)
from .divergences import (
    INF_Z,
    SUPPORT_INF,
    RegionReport,
    RenyiParams,
    SupportViolationInfinity,
    classify_region,
    d_alpha_z,
    d_hat,
    d_max,
    q_alpha_z,
    q_alpha_z_regularized,
    tsallis,
    umegaki,
)
from .exponents import (
    ExponentCurve,
    RadiusCache,
    clipped_trace,
    convexity_probe,
    cutoff_rate,
    finite_n_converse_bound,
    finite_n_random_coding_bound,
    psi_curve,
    random_coding_exponent,
    sc_curve,
    sc_exponent,
    sphere_packing_bound,
)
from .operators import (
    DensityOperator,
    HermitianOperator,
    exp_log_trace,
    partial_trace,
    pinch,
    support_power,
    support_projection,
    tensor,
    trace_distance,
    trace_norm,
)

__version__ = "0.1.0"
