"""Moments of the renormalized intersection local time of planar Brownian motion.

The pipeline runs from connectivity-matrix enumeration through multigraph
Symanzik polynomials and parametric/position-space integrals to the moment
assembly.  See ``iltmoments.cli`` for the command-line entry point.
"""

__version__ = "0.1.0"

from ._backend import NAME as BACKEND  # noqa: E402
from .combinatorics import (  # noqa: E402
    MatrixClass,
    arborescence_count,
    classify,
    cofactor,
    enumerate_matrices,
)
from .errors import (  # noqa: E402
    ConstantsParseError,
    ConvergenceError,
    IltError,
    IncompleteConstantsError,
    PoleError,
)
from .gammafn import GammaQuery, gamma_f1_recurrence, gamma_f2_recurrence, gamma_value  # noqa: E402
from .integrals import I_of, gamma_v, load_constants, script_I_of, t_d  # noqa: E402
from .moments import (  # noqa: E402
    MomentReport,
    ReportOptions,
    build_report,
    closed_moments,
    moment2,
    moment3,
    moment4,
)
from .multigraph import MultiGraph, graph_from_matrix, symanzik  # noqa: E402
from .quad import IntegralEstimate, adaptive_cubature, mc_expectation  # noqa: E402

__all__ = [
    "BACKEND",
    "ConstantsParseError",
    "ConvergenceError",
    "GammaQuery",
    "I_of",
    "IltError",
    "IncompleteConstantsError",
    "IntegralEstimate",
    "MatrixClass",
    "MomentReport",
    "MultiGraph",
    "PoleError",
    "ReportOptions",
    "adaptive_cubature",
    "arborescence_count",
    "build_report",
    "classify",
    "closed_moments",
    "cofactor",
    "enumerate_matrices",
    "gamma_f1_recurrence",
    "gamma_f2_recurrence",
    "gamma_v",
    "gamma_value",
    "graph_from_matrix",
    "load_constants",
    "mc_expectation",
    "moment2",
    "moment3",
    "moment4",
    "script_I_of",
    "symanzik",
    "t_d",
]
