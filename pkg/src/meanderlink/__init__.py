"""Random meander link diagrams: sampling, exact counts and verification."""
from .combinatorics import (
    catalan,
    count_E,
    count_O,
    expected_bigons,
    expected_nestings,
    expected_pierced_circles,
    expected_twists,
    narayana,
    volume_bounds,
    zeilberger_residual,
)
from .meander import (
    alternating_assignments,
    assemble,
    build_graph,
    diagram_stats,
    export_gauss,
    export_json,
    export_pd,
    graph_from_text,
)
from .pstring import PString, parse, sample_uniform

__version__ = "0.1.0"

__all__ = [
    "PString",
    "alternating_assignments",
    "assemble",
    "build_graph",
    "catalan",
    "count_E",
    "count_O",
    "diagram_stats",
    "expected_bigons",
    "expected_nestings",
    "expected_pierced_circles",
    "expected_twists",
    "export_gauss",
    "export_json",
    "export_pd",
    "graph_from_text",
    "narayana",
    "parse",
    "sample_uniform",
    "volume_bounds",
    "zeilberger_residual",
]
