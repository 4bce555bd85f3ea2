"""
Predict Module: Closed-Form Branches and Criticality

Leading-order orbit radii, criticality from a coefficient report, scalar
canonical models and fold loci.
"""

from .branches import (
    Order,
    Prediction,
    PredictionKind,
    bautin_fold,
    classify,
    fold_from_gammas,
    fold_radius,
    r0_first,
    r0_second,
    r0_smooth,
    scalar_branch,
    second_order_kind,
)

__all__ = [
    "Order",
    "Prediction",
    "PredictionKind",
    "bautin_fold",
    "classify",
    "fold_from_gammas",
    "fold_radius",
    "r0_first",
    "r0_second",
    "r0_smooth",
    "scalar_branch",
    "second_order_kind",
]
