import logging
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from errors import ContractViolation
from numerics import RandomStream

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 3


@dataclass(frozen=True)
class EsGraph:
    """Undirected ES-to-ES links; `adjacency[m]` is the sorted neighbor set 𝒜(m)."""

    adjacency: tuple[tuple[int, ...], ...]

    @property
    def M(self) -> int:
        return len(self.adjacency)

    def neighbors(self, m: int) -> tuple[int, ...]:
        return self.adjacency[m]

    def degree(self, m: int) -> int:
        return len([v for v in self.adjacency[m] if v != m])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u <= v]

    @classmethod
    def from_edges(cls, M: int, edges) -> "EsGraph":
        sets: list[set[int]] = [set() for _ in range(M)]
        for u, v in edges:
            if not (0 <= u < M and 0 <= v < M):
                raise ContractViolation(f"Edge ({u}, {v}) outside 0..{M - 1}")
            sets[u].add(v)
            sets[v].add(u)
        return cls(tuple(tuple(sorted(s)) for s in sets))


def bfs_distances(graph: EsGraph, source: int) -> list[int | None]:
    distances: list[int | None] = [None] * graph.M
    distances[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph.neighbors(u):
            if distances[v] is None:
                distances[v] = distances[u] + 1
                queue.append(v)
    return distances


def is_connected(graph: EsGraph) -> bool:
    return all(d is not None for d in bfs_distances(graph, 0))


def diameter(graph: EsGraph) -> int:
    return max(max(d for d in bfs_distances(graph, m) if d is not None) for m in range(graph.M))


def audit_graph(graph: EsGraph, max_degree: int | None = None) -> None:
    """Raise if the graph is asymmetric, disconnected, self-looped (M ≥ 2) or over the degree bound."""
    for u, nbrs in enumerate(graph.adjacency):
        for v in nbrs:
            if u not in graph.adjacency[v]:
                raise ContractViolation(f"Asymmetric link {u}->{v}")
        if graph.M >= 2 and u in nbrs:
            raise ContractViolation(f"Self-loop at {u}")
        if max_degree is not None and graph.M >= 2 and len(nbrs) > max_degree:
            raise ContractViolation(f"Node {u} has degree {len(nbrs)} > {max_degree}")
    if not is_connected(graph):
        raise ContractViolation("Graph is disconnected")


def random_connected_graph(M: int, max_degree: int, stream: RandomStream) -> EsGraph:
    """
    Random spanning tree under the degree bound, plus up to M random extra edges.

    Nodes join in a random order, each attaching to a random earlier node with
    spare degree. A single node gets a self-loop so next-cluster selection
    always has a candidate.
    """
    if M < 1:
        raise ContractViolation(f"M must be at least 1, got {M}")
    if M == 1:
        return EsGraph(((0,),))
    if max_degree < 1 or (M >= 3 and max_degree < 2):
        raise ContractViolation(f"No connected graph on {M} nodes with max degree {max_degree}")

    order = [int(v) for v in stream.permutation(M)]
    degree = [0] * M
    edges: set[tuple[int, int]] = set()

    def link(u: int, v: int) -> None:
        edges.add((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1

    for i in range(1, M):
        open_nodes = [v for v in order[:i] if degree[v] < max_degree]
        link(order[i], open_nodes[int(stream.integers(0, len(open_nodes)))])

    for _ in range(M):
        u, v = (int(x) for x in stream.integers(0, M, size=2))
        if u != v and (min(u, v), max(u, v)) not in edges and degree[u] < max_degree and degree[v] < max_degree:
            link(u, v)

    graph = EsGraph.from_edges(M, edges)
    audit_graph(graph, max_degree)
    logger.debug("Random ES graph: M=%d, %d edges", M, len(edges))
    return graph


def ring_graph(M: int) -> EsGraph:
    if M < 3:
        raise ContractViolation(f"A ring needs at least 3 nodes, got {M}")
    return EsGraph.from_edges(M, [(m, (m + 1) % M) for m in range(M)])


def path_graph(M: int) -> EsGraph:
    if M == 1:
        return EsGraph(((0,),))
    return EsGraph.from_edges(M, [(m, m + 1) for m in range(M - 1)])


def export_edges(graph: EsGraph, path: str | Path) -> None:
    lines = [f"{u} {v}" for u, v in graph.edges()]
    Path(path).write_text(f"# M={graph.M}\n" + "\n".join(lines) + "\n", encoding="utf-8")


def import_edges(path: str | Path) -> EsGraph:
    M = None
    edges = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if line.startswith("# M="):
            M = int(line[4:])
        elif line and not line.startswith("#"):
            try:
                u, v = (int(x) for x in line.split())
            except ValueError as e:
                raise ContractViolation(f"line {lineno}: expected 'm m2'") from e
            edges.append((u, v))
    if M is None:
        M = 1 + max(max(e) for e in edges)
    return EsGraph.from_edges(M, edges)
