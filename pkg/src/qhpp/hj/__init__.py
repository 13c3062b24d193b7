"""Hirzebruch-Jung chain arithmetic."""

from qhpp.hj._kernels import BACKEND
from qhpp.hj.chain import (
    Chain,
    ChainError,
    ChainInvariants,
    CyclicSingularity,
    DiscrepancyData,
    chain_invariants,
    chain_to_type,
    continuant,
    d_squared_closed_form,
    discrepancies,
    hj_expand,
    intersection_matrix,
    reverse_conjugate,
    uv_profile,
)

__all__ = [
    "BACKEND",
    "Chain",
    "ChainError",
    "ChainInvariants",
    "CyclicSingularity",
    "DiscrepancyData",
    "chain_invariants",
    "chain_to_type",
    "continuant",
    "d_squared_closed_form",
    "discrepancies",
    "hj_expand",
    "intersection_matrix",
    "reverse_conjugate",
    "uv_profile",
]
