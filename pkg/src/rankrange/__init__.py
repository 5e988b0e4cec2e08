"""Higher rank numerical ranges of J_n(alpha) + beta*I_m, closed form and sampled."""

from rankrange.closed_form import (
    AngleData,
    AngleSet,
    RegionDescriptor,
    angle_data,
    boundary_points,
    classify,
    discretize,
    in_cone,
    lambda_k_closed,
    lambda_k_world,
    region_contains,
    set_Ckm,
    set_Dk,
)
from rankrange.core_linalg import (
    JordanScalarModel,
    direct_sum,
    hermitian_part,
    jordan_block,
    materialize,
)
from rankrange.eigen import (
    EigenConvergenceError,
    eigenvalues_hermitian,
    jordan_spectrum_fast,
    kth_eigenvalue,
)
from rankrange.geometry import (
    ConvexRegion,
    HalfPlane,
    contains,
    hausdorff_distance,
    intersect_arrays,
    intersect_halfplanes,
    support_value,
)
from rankrange.oracles import (
    ProjectionWitness,
    normal_range_oracle,
    odd_jordan_witness,
    verify_witness,
)
from rankrange.sampler import (
    SupportProfile,
    estimate_all_k,
    estimate_range,
    member,
    member_many,
    outer_region,
    sample_support,
)

__version__ = "0.1.0"

__all__ = [
    "AngleData",
    "AngleSet",
    "ConvexRegion",
    "EigenConvergenceError",
    "HalfPlane",
    "JordanScalarModel",
    "ProjectionWitness",
    "RegionDescriptor",
    "SupportProfile",
    "angle_data",
    "boundary_points",
    "classify",
    "contains",
    "direct_sum",
    "discretize",
    "eigenvalues_hermitian",
    "estimate_all_k",
    "estimate_range",
    "hausdorff_distance",
    "hermitian_part",
    "in_cone",
    "intersect_arrays",
    "intersect_halfplanes",
    "jordan_block",
    "jordan_spectrum_fast",
    "kth_eigenvalue",
    "lambda_k_closed",
    "lambda_k_world",
    "materialize",
    "member",
    "member_many",
    "normal_range_oracle",
    "odd_jordan_witness",
    "outer_region",
    "region_contains",
    "sample_support",
    "set_Ckm",
    "set_Dk",
    "support_value",
    "verify_witness",
]
