"""Exact solver and verification workbench for rectangle visibility graphs."""

from .geometry import (
    Rect,
    Representation,
    SightEdge,
    validate,
    sees,
    sight_edges,
    visibility_graph,
    raster_oracle,
    directional_sets,
    transform,
)
from .graphs import Graph, canonical, isomorphic, is_planar

__version__ = "0.1.0"

__all__ = [
    "Rect",
    "Representation",
    "SightEdge",
    "validate",
    "sees",
    "sight_edges",
    "visibility_graph",
    "raster_oracle",
    "directional_sets",
    "transform",
    "Graph",
    "canonical",
    "isomorphic",
    "is_planar",
    "__version__",
]
