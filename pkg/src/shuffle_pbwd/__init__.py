"""Exact engine for trigonometric and rational shuffle algebras of types A_n, B_n and G_2.

The package builds quantum loop and Yangian generators as shuffle-algebra
elements, evaluates PBWD monomials under specialization maps, tests integral
forms, and checks the Yang-Baxter equation for the type B R-matrix, all with
exact rational arithmetic.
"""

from .ring import ULaurent, VRatFunc, angle, qbinom, qfact, qint
from .mpoly import MultiLaurent, VarId, W, X, Z
from .rootsys import KostantPartition, PBWDIndex, PosRoot, RootSystem, kostant_partitions, pbwd_indices
from .shuffle import ShuffleContext, ShuffleElement, generator, proportional_up_to_unit, psi, shuffle_product
from .rootvec import FreeElement, root_vector, tilde_root_vector, rtt_root_vector, yangian_root_vector
from .specmaps import in_bold_S, in_cal_S, in_tilde_S, is_good, is_integral_rational, phi, phi_product
from .rtt import RMatrixContext, build_PQR, build_Rtrig, check_ybe
from .verify import SuiteConfig, SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "ULaurent", "VRatFunc", "angle", "qbinom", "qfact", "qint",
    "MultiLaurent", "VarId", "W", "X", "Z",
    "KostantPartition", "PBWDIndex", "PosRoot", "RootSystem", "kostant_partitions", "pbwd_indices",
    "ShuffleContext", "ShuffleElement", "generator", "proportional_up_to_unit", "psi", "shuffle_product",
    "FreeElement", "root_vector", "tilde_root_vector", "rtt_root_vector", "yangian_root_vector",
    "in_bold_S", "in_cal_S", "in_tilde_S", "is_good", "is_integral_rational", "phi", "phi_product",
    "RMatrixContext", "build_PQR", "build_Rtrig", "check_ybe",
    "SuiteConfig", "SuiteReport", "run_suite",
    "__version__",
]
