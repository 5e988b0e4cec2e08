"""Cross-validation of the closed-form and sampled engines."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from rankrange.closed_form import RegionDescriptor, classify, discretize, lambda_k_world
from rankrange.core_linalg import JordanScalarModel, materialize
from rankrange.geometry import ConvexRegion, hausdorff_distance
from rankrange.sampler import DEFAULT_RESOLUTION, SupportProfile, estimate_range

REGION_TOL = 2e-3
ENDPOINT_TOL = 1e-6
ARC_STEPS = 4096


@dataclass(frozen=True)
class EngineReport:
    k: int
    case: int
    closed_kind: str
    sampler_kind: str
    emptiness_agree: bool
    hausdorff: float | None
    endpoint_error: float | None
    max_lambda_discrepancy: float
    agree: bool

    def to_dict(self) -> dict:
        return asdict(self)


def endpoint_error(a: ConvexRegion, b: ConvexRegion) -> float:
    """Largest endpoint mismatch between two points or two segments (best pairing)."""
    pa, pb = a.points, b.points
    if len(pa) != len(pb):
        raise ValueError("endpoint comparison needs regions of the same kind")
    if len(pa) == 1:
        return float(abs(pa[0] - pb[0]))
    straight = max(abs(pa[0] - pb[0]), abs(pa[1] - pb[1]))
    swapped = max(abs(pa[0] - pb[1]), abs(pa[1] - pb[0]))
    return float(min(straight, swapped))


def compare_descriptor(
    model: JordanScalarModel,
    desc: RegionDescriptor,
    profile: SupportProfile,
    region: ConvexRegion,
    region_tol: float = REGION_TOL,
    endpoint_tol: float = ENDPOINT_TOL,
    arc_steps: int = ARC_STEPS,
) -> EngineReport:
    """Compare a closed-form descriptor with a sampled profile and its outer region."""
    k = profile.k
    closed_kind = desc.kind
    disc = float(np.max(np.abs(lambda_k_world(model, k, profile.thetas) - profile.lambdas)))
    emptiness = desc.is_empty == region.is_empty
    haus = None
    end_err = None
    agree = closed_kind == region.kind
    if not desc.is_empty and not region.is_empty:
        exact = discretize(desc, arc_steps)
        haus = hausdorff_distance(exact, region)
        if agree and closed_kind in ("segment", "point"):
            end_err = endpoint_error(exact, region)
            agree = end_err <= endpoint_tol
        elif agree:
            agree = haus <= region_tol
    return EngineReport(
        k=k,
        case=desc.case_id,
        closed_kind=closed_kind,
        sampler_kind=region.kind,
        emptiness_agree=emptiness,
        hausdorff=haus,
        endpoint_error=end_err,
        max_lambda_discrepancy=disc,
        agree=bool(agree and emptiness),
    )


def compare_engines(
    model: JordanScalarModel,
    k: int,
    resolution: int = DEFAULT_RESOLUTION,
    region_tol: float = REGION_TOL,
    endpoint_tol: float = ENDPOINT_TOL,
) -> EngineReport:
    profile, region = estimate_range(materialize(model), k, resolution)
    return compare_descriptor(model, classify(model, k), profile, region, region_tol, endpoint_tol)
