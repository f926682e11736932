"""Regular-graph and product-matrix MBR codes, and how much they leak to an eavesdropper."""
from .analysis import CodeView, Witness, determinability_check, mds_rows_check, min_distance, min_weight_witness
from .field import FieldElement, FieldSpec, ff_inv, field_new
from .graph_code import GraphCode, NodeContent, RegularGraph, gc_build, gc_eavesdrop, gc_encode, gc_reconstruct, gc_repair
from .matrix import MatrixFq, cauchy_matrix, mat_inverse, mat_mul, mat_rank, solve_linear, vandermonde_matrix
from .pm_code import PmCode, index_set, pm_build, pm_eavesdrop_blockmatrix, pm_encode, pm_reconstruct, pm_repair
from .security import (
    SecureWrap,
    SecurityReport,
    audit,
    block_security_level,
    degradation_profile,
    dimakis_bound,
    exhaustive_mi_check,
    pawar_bound,
    perfect_secrecy_check,
    secure_wrap,
    theorem1_level,
    theorem2_level,
)
from .sim import Adversary, DssState

__version__ = "0.1.0"
