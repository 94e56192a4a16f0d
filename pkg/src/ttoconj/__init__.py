"""Truncated Toeplitz operators on model spaces of Blaschke products, and
their characterization through families of conjugations."""

from .blaschke import (
    FiniteBlaschke,
    InfiniteBlaschkeSpec,
    derivative,
    divisor,
    evaluate,
    partial_product,
    separation_delta,
)
from .model_space import (
    FunctionSamples,
    KernelBasis,
    OrthonormalBasis,
    conj_apply,
    example3_basis,
    monomial_basis,
    orthonormal_basis,
    quadrature_inner,
)
from .operators import (
    OperatorMatrix,
    SymbolSpec,
    adjoint,
    brown_halmos_residuals,
    compress,
    compress_from_tail,
    crespo_transform,
    is_c_symmetric,
    is_tto,
    recover_symbol,
    tto_matrix,
)

__version__ = "0.1.0"
