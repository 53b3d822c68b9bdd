"""Numerical certificates for the quantitative bounds on Z_{m+1}^N."""
from .certificates import (
    verify_bigkchoice,
    verify_blbound,
    verify_decay,
    verify_dominant,
    verify_ns,
    verify_reparam,
    verify_sphere_transfer,
    verify_square_sum,
    verify_weak11,
)
from .norms import norm_search
from .oracle import default_grid, verify_oracle
from .report import CertificateReport, lower_plateau_stat, plateau_stat

__all__ = [
    "CertificateReport",
    "default_grid",
    "lower_plateau_stat",
    "norm_search",
    "plateau_stat",
    "verify_bigkchoice",
    "verify_blbound",
    "verify_decay",
    "verify_dominant",
    "verify_ns",
    "verify_oracle",
    "verify_reparam",
    "verify_sphere_transfer",
    "verify_square_sum",
    "verify_weak11",
]
