"""Persistent homology, matching distance and topological correlation of filtering functions."""

__version__ = "0.1.0"

from .bottleneck import INFINITE, bottleneck_distance, bottleneck_oracle
from .bundle import Bundle, emit_bundle, parse_bundle, parse_off_with_fields
from .core import (Bifunction, Filtration, ScalarField, SimplicialComplex, betti_at, build_complex,
                   lower_star_filtration)
from .correlation import (Branch, CorrelationReport, collection_correlation, topological_correlation,
                          topological_difference)
from .matching import FilteringLine, GridSpec, line_grid, matching_distance, matching_search, push_to_line
from .persistence import PersistenceDiagram, compute_persistence, persistence_oracle_h0
from .shapes import Axis, EmbeddedMesh, circle_mesh, projection_field, sphere_mesh, torus_mesh

__all__ = [
    "INFINITE", "Axis", "Bifunction", "Branch", "Bundle", "CorrelationReport", "EmbeddedMesh",
    "FilteringLine", "Filtration", "GridSpec", "PersistenceDiagram", "ScalarField", "SimplicialComplex",
    "betti_at", "bottleneck_distance", "bottleneck_oracle", "build_complex", "circle_mesh",
    "collection_correlation", "compute_persistence", "emit_bundle", "line_grid", "lower_star_filtration",
    "matching_distance", "matching_search", "parse_bundle", "parse_off_with_fields",
    "persistence_oracle_h0", "projection_field", "push_to_line", "sphere_mesh", "topological_correlation",
    "topological_difference", "torus_mesh",
]
