"""Constantly curved holomorphic 2-spheres in the complex Grassmannian G(2, n+2)."""

from ._grasscurve import (
    Curve,
    DomainError,
    Error,
    InputError,
    apply_mobius,
    apply_unitary,
    canonicalize,
    curvature_at,
    det_a1_sq,
    family_d2n,
    family_dn,
    fullness_rank,
    gauss_slack,
    gram_max_residual,
    ramification,
    search,
    tail_probe,
    verify,
    veronese,
)

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "DomainError",
    "Error",
    "InputError",
    "apply_mobius",
    "apply_unitary",
    "canonicalize",
    "curvature_at",
    "det_a1_sq",
    "family_d2n",
    "family_dn",
    "fullness_rank",
    "gauss_slack",
    "gram_max_residual",
    "ramification",
    "search",
    "tail_probe",
    "verify",
    "veronese",
]
