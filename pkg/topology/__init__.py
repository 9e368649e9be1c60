from .graph import (
    DEFAULT_MAX_DEGREE,
    EsGraph,
    audit_graph,
    bfs_distances,
    diameter,
    export_edges,
    import_edges,
    is_connected,
    path_graph,
    random_connected_graph,
    ring_graph,
)

__all__ = [
    "DEFAULT_MAX_DEGREE",
    "EsGraph",
    "audit_graph",
    "bfs_distances",
    "diameter",
    "export_edges",
    "import_edges",
    "is_connected",
    "path_graph",
    "random_connected_graph",
    "ring_graph",
]
