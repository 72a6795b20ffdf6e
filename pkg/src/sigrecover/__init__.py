"""Exact recovery of piecewise linear paths from third level signature tensors."""

from .exact import ExactScalar, exact_cbrt, format_scalar, parse_scalar
from .gauss import Diag, General, Lower, Perm, Upper, apply, to_matrix
from .matrix import Matrix, identity, random_invertible
from .recovery import NotInOrbit, RecoveryConfig, RecoveryTrace, recover
from .tensor import Tensor3, congruence_act, core_tensor, fold_mode1

__all__ = [
    "Diag", "ExactScalar", "General", "Lower", "Matrix", "NotInOrbit", "Perm",
    "RecoveryConfig", "RecoveryTrace", "Tensor3", "Upper", "apply", "congruence_act",
    "core_tensor", "exact_cbrt", "fold_mode1", "format_scalar", "identity",
    "parse_scalar", "random_invertible", "recover", "to_matrix",
]
