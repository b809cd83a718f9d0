"""Perfect s-pair state transfer in continuous-time quantum walks on graphs."""

from .graph import Graph, GraphError, cartesian_product, line_graph
from .io import parse_edge_list, parse_graph6, to_graph6
from .search import pst_search
from .spectra import HamiltonianKind, SpectralDecomposition, classify, decompose, decompose_graph
from .states import RealState, SPairState, parse_state
from .tolerances import Tolerances
from .transfer import TransferReport, check_pst, fidelity, is_periodic, strongly_cospectral

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphError", "cartesian_product", "line_graph",
    "parse_edge_list", "parse_graph6", "to_graph6",
    "pst_search",
    "HamiltonianKind", "SpectralDecomposition", "classify", "decompose", "decompose_graph",
    "RealState", "SPairState", "parse_state",
    "Tolerances",
    "TransferReport", "check_pst", "fidelity", "is_periodic", "strongly_cospectral",
]
