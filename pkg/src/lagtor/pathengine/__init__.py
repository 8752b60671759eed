"""Moves, low admissible paths and isotopy certificates."""
from .moves import (
    Move,
    MovePath,
    apply_move,
    concat,
    is_low_admissible,
    leq_perm,
)
from .construct import (
    bounded_low_search,
    low_path,
    make_minimal_primitive,
    path_rank1,
    path_rank2_k2,
    path_shared_primitive,
)
from .certificate import (
    CertStep,
    FailureKind,
    IsotopyCertificate,
    certificate,
    check_certificate,
    check_path,
)
