"""Ricci flow on locally homogeneous closed 4-manifolds.

Simulates the diagonal flow of the geometry classes A1-A9ii, checks closed
forms, conserved quantities and long-time profiles, and decides
quasi-convergence equivalence of metric pairs.
"""

from ._core import (
    __version__,
    analytic_membership,
    asymptotic_profile,
    class_dimension,
    class_ids,
    closed_form,
    congruence_transport,
    conserved,
    conserved_drift,
    dimension_probe,
    evaluate_at,
    frame_quotient,
    integrate,
    norm_sq,
    norm_timeseries,
    numeric_membership,
    reduced_params,
    rhs,
    run_acceptance,
    validate_asymptotics,
    validate_closed_form,
)

__all__ = [
    "__version__",
    "analytic_membership",
    "asymptotic_profile",
    "class_dimension",
    "class_ids",
    "closed_form",
    "congruence_transport",
    "conserved",
    "conserved_drift",
    "dimension_probe",
    "evaluate_at",
    "frame_quotient",
    "integrate",
    "norm_sq",
    "norm_timeseries",
    "numeric_membership",
    "reduced_params",
    "rhs",
    "run_acceptance",
    "validate_asymptotics",
    "validate_closed_form",
]
