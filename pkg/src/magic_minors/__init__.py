"""Stabilizer and Shannon-Rényi entropies of free-fermion Gaussian states via sums over minors."""

from .entropy import EntropyResult, normalization, shannon_limit, shannon_renyi, stabilizer_renyi
from .exceptions import (
    CapacityError,
    DimensionError,
    DomainError,
    FitError,
    MagicMinorsError,
    ModelError,
    SingularSymbolError,
    SpecError,
)
from .matrix import conjugate, determinant, pfaffian, submatrix
from .minors import PowerSums, minor_gf, spm, spm_fast2, spp
from .models import ModelSpec, build_matrix, symbol_g, tfi_g, xx_r
from .scaling import CFTScalingRegressor, cft_prediction, entropy_series, fit_scaling

__version__ = "0.1.0"

__all__ = [
    "CFTScalingRegressor",
    "CapacityError",
    "DimensionError",
    "DomainError",
    "EntropyResult",
    "FitError",
    "MagicMinorsError",
    "ModelError",
    "ModelSpec",
    "PowerSums",
    "SingularSymbolError",
    "SpecError",
    "build_matrix",
    "cft_prediction",
    "conjugate",
    "determinant",
    "entropy_series",
    "fit_scaling",
    "minor_gf",
    "normalization",
    "pfaffian",
    "shannon_limit",
    "shannon_renyi",
    "spm",
    "spm_fast2",
    "spp",
    "stabilizer_renyi",
    "submatrix",
    "symbol_g",
    "tfi_g",
    "xx_r",
]
