"""Exact homological workbench: chain complexes over a prime field or
the rationals, lifting problems, certified tower factorizations, functor
categories, and degree-structured diagram shapes."""

from .certificates import (
    CellCert,
    CellStage,
    GenRef,
    PostnikovCert,
    TowerStage,
    VerifyResult,
    gen_chain_map,
    verify_cell_cert,
    verify_postnikov_cert,
)
from .complexes import (
    ChainComplex,
    ChainMap,
    disc,
    homology,
    identity_map,
    is_quasi_iso,
    make_complex,
    make_map,
    pullback,
    pushout,
    sphere,
    zero_complex,
    zero_map,
)
from .diagrams import (
    Diagram,
    NatTrans,
    diagram_colimit,
    diagram_limit,
    factor_injective_z,
    objectwise_classify,
    pitchfork_gen,
    solve_lift_nat,
    tensor_gen,
    verify_diag_cell_cert,
    verify_diag_postnikov_cert,
)
from .errors import (
    Infeasible,
    InternalCheckFailed,
    NotReedy,
    SemanticNegative,
    ValidationFailure,
    WorkbenchError,
)
from .factor import FactorResult, factor_acyclic_fibration, factor_fibration
from .fields import F101, RATIONAL, FieldSpec, field_from_label
from .lifting import Classification, classify, make_square, solve_lift
from .linalg import Matrix
from .categories import FinCat, chain_category, discrete_category, poset_category
from .reedy import (
    ReedyCat,
    delta_le1,
    direct_reedy,
    inverse_reedy,
    latching,
    matching,
    poset_degrees,
    reedy_canonical_cells,
    reedy_canonical_tower,
    reedy_classify,
    rel_latching,
    rel_matching,
)
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "CellCert",
    "CellStage",
    "ChainComplex",
    "ChainMap",
    "Classification",
    "Diagram",
    "F101",
    "FactorResult",
    "FieldSpec",
    "FinCat",
    "GenRef",
    "Infeasible",
    "InternalCheckFailed",
    "Matrix",
    "NatTrans",
    "NotReedy",
    "PostnikovCert",
    "RATIONAL",
    "ReedyCat",
    "SemanticNegative",
    "TowerStage",
    "ValidationFailure",
    "VerifyResult",
    "WorkbenchError",
    "chain_category",
    "classify",
    "delta_le1",
    "diagram_colimit",
    "diagram_limit",
    "direct_reedy",
    "disc",
    "discrete_category",
    "factor_acyclic_fibration",
    "factor_fibration",
    "factor_injective_z",
    "field_from_label",
    "gen_chain_map",
    "homology",
    "identity_map",
    "inverse_reedy",
    "is_quasi_iso",
    "latching",
    "make_complex",
    "make_map",
    "make_square",
    "matching",
    "objectwise_classify",
    "pitchfork_gen",
    "poset_category",
    "poset_degrees",
    "pullback",
    "pushout",
    "reedy_canonical_cells",
    "reedy_canonical_tower",
    "reedy_classify",
    "rel_latching",
    "rel_matching",
    "run_selftest",
    "solve_lift",
    "solve_lift_nat",
    "sphere",
    "tensor_gen",
    "verify_cell_cert",
    "verify_diag_cell_cert",
    "verify_diag_postnikov_cert",
    "verify_postnikov_cert",
    "zero_complex",
    "zero_map",
]
