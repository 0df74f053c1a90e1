"""Meta-piece reductions, coarse tilings and exact count identities."""

from .coarse import CoarsePlacement, CoarseTiling, coarse_tilings, expand, forced_cluster_search, solve_coarse
from .decompose import (
    CheckRow,
    DecompositionFailed,
    DecompositionReport,
    ParityVerdict,
    j_parity_check,
    pair_decompose_j,
    verify_constants,
)
from .identities import (
    CoarseCheck,
    Constants,
    CountIdentity,
    TableCell,
    load_constants,
    parse_constants,
    product_count,
    verify_identity,
)
from .meta import CATALOG, MetaPiece, compose_meta_pieces, library_meta_piece, make_meta_piece, unions, unit_piece

__all__ = [
    "CATALOG", "CheckRow", "CoarseCheck", "CoarsePlacement", "CoarseTiling", "Constants",
    "CountIdentity", "DecompositionFailed", "DecompositionReport", "MetaPiece", "ParityVerdict",
    "TableCell", "coarse_tilings", "compose_meta_pieces", "expand", "forced_cluster_search",
    "j_parity_check", "library_meta_piece", "load_constants", "make_meta_piece", "pair_decompose_j",
    "parse_constants", "product_count", "solve_coarse", "unions", "unit_piece", "verify_constants",
    "verify_identity",
]
