"""Train track maps, Outer Space translation lengths, complete splittings and twisting."""

from .ct import build_ct_data, complete_split, covering_circuit, csp_graph, inp_search, scc, verify_splitting
from .errors import TtkitError
from .gm import GmDocument, format_gm, load_gm, parse_gm, parse_graph_spec
from .graph import Circuit, EdgePath, Graph, Turn, cyclically_reduce, tighten, turns_of
from .growth import (
    bcc_estimate,
    distortion_certificate,
    genericity_check,
    omega_vector,
    tw_about,
    tw_max,
    twist_growth,
)
from .maps import (
    Filtration,
    GraphMap,
    Stratum,
    check_rtt,
    derivative_map,
    gates,
    is_legal,
    lamination_orientation,
    transition_data,
)
from .outer_space import (
    MetricGraph,
    candidate_loops,
    epsilon_metric,
    lipschitz_interval,
    pf_metric,
    r_length,
    translation_length,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "EdgePath",
    "Filtration",
    "GmDocument",
    "Graph",
    "GraphMap",
    "MetricGraph",
    "Stratum",
    "TtkitError",
    "Turn",
    "bcc_estimate",
    "build_ct_data",
    "candidate_loops",
    "check_rtt",
    "complete_split",
    "covering_circuit",
    "csp_graph",
    "cyclically_reduce",
    "derivative_map",
    "distortion_certificate",
    "epsilon_metric",
    "format_gm",
    "gates",
    "genericity_check",
    "inp_search",
    "is_legal",
    "lamination_orientation",
    "lipschitz_interval",
    "load_gm",
    "omega_vector",
    "parse_gm",
    "parse_graph_spec",
    "pf_metric",
    "r_length",
    "scc",
    "tighten",
    "transition_data",
    "translation_length",
    "turns_of",
    "tw_about",
    "tw_max",
    "twist_growth",
    "verify_splitting",
    "data_path",
]


def data_path(name: str) -> str:
    """Path of a bundled example input, e.g. ``data_path("iwip.gm")``."""
    from importlib.resources import files

    return str(files(__name__) / "data" / name)
