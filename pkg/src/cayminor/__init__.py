"""Cayley-graph balls, graph-minor search with certificates, ends at finite
scale, and a construction of clique minors from disjoint rays."""

from .cayley import Ball, build_ball, induced_graph, sphere
from .construction import build_clique_minor, decompose_23, detour_offsets
from .ends import end_count_estimate, extract_rays, live_components, thin_end_size_at_scale
from .flows import max_disjoint_paths
from .graph import Graph
from .groups import GenSet, parse_genset, parse_group, power_union
from .minors import (
    MinorEmbedding,
    brute_force_minor,
    find_clique_minor,
    find_minor,
    hadwiger_lower_bound,
    is_planar,
    verify_embedding,
)

__version__ = "0.1.0"
