"""Labelled dual graphs of quasisplit nodal curves.

Vertices are irreducible components (with a geometric genus), edges are nodes
(loops allowed) carrying monomial labels. Graphs are immutable; every operation
returns a new graph.

Example:
-------
    g = LabelledGraph.from_file("tests/data/graphs/banana_xy.json")
    assert classify(g) is GraphClass.NOT_ALIGNED
    h = specialize(g, keep={"x"})

"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from enum import IntEnum
from itertools import combinations
from pathlib import Path

import networkx as nx
from pydantic import NonNegativeInt, constr, dataclasses, validate_call

from aligned_graphs.configuration import DEFAULT_LIMITS, read_document
from aligned_graphs.labels import Label, ParameterSet, is_unit, project
from aligned_graphs.validation import GraphValidationError, check_limit, document_entries


@dataclasses.dataclass(frozen=True)
class Vertex:
    """An irreducible component of the fibre."""

    id: constr(min_length=1, strict=True)  # noqa: A003
    genus: NonNegativeInt = 0


@dataclasses.dataclass(frozen=True)
class Edge:
    """A node of the fibre, joining two (possibly equal) components."""

    id: constr(min_length=1, strict=True)  # noqa: A003
    ends: tuple[constr(min_length=1, strict=True), constr(min_length=1, strict=True)]
    label: Label

    @property
    def is_loop(self) -> bool:
        """Whether both ends are the same component."""
        return self.ends[0] == self.ends[1]


class GraphClass(IntEnum):
    """Coarse shape of a labelled graph, from most to least restrictive."""

    TREE = 0
    TREELIKE = 1
    ALIGNED_NOT_TREELIKE = 2
    NOT_ALIGNED = 3

    def __str__(self) -> str:
        """Render the class name as used in reports."""
        return {
            GraphClass.TREE: "Tree",
            GraphClass.TREELIKE: "Treelike",
            GraphClass.ALIGNED_NOT_TREELIKE: "AlignedNotTreelike",
            GraphClass.NOT_ALIGNED: "NotAligned",
        }[self]


@dataclasses.dataclass(frozen=True)
class LabelledGraph:
    """A finite multigraph with a monomial label on every edge.

    Construction only checks field types. Structural invariants (connected, no
    unit labels, unique ids, known endpoints) are checked by ``validate``.
    """

    parameters: ParameterSet
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "LabelledGraph":
        """Parse the JSON graph format.

        Parameters
        ----------
        data : dict
            ``{"parameters": [...], "vertices": [{"id", "genus"}],
            "edges": [{"id", "ends", "label": {name: exponent}}]}``

        Returns
        -------
        LabelledGraph
            The parsed graph, not yet validated

        Raises
        ------
        DocumentError
            The vertex or edge list is malformed, or an entry lacks a required field
        """
        parameters = ParameterSet(names=data.get("parameters", ()))
        vertices = document_entries(data, "vertices", "vertex", ("id",))
        edges = document_entries(data, "edges", "edge", ("id", "ends"))
        return cls(
            parameters=parameters,
            vertices=tuple(Vertex(id=v["id"], genus=v.get("genus", 0)) for v in vertices),
            edges=tuple(
                Edge(
                    id=e["id"],
                    ends=e["ends"],
                    label=Label.from_mapping(parameters, e.get("label", {})),
                )
                for e in edges
            ),
        )

    @classmethod
    def from_file(cls, path: Path | str) -> "LabelledGraph":
        """Read a graph document (JSON, TOML or YAML)."""
        return cls.from_dict(read_document(path))

    def to_dict(self) -> dict:
        """Serialize to the JSON graph format, ordered by id."""
        return {
            "parameters": list(self.parameters.names),
            "vertices": [
                {"id": v.id, "genus": v.genus}
                for v in sorted(self.vertices, key=lambda v: v.id)
            ],
            "edges": [
                {"id": e.id, "ends": list(e.ends), "label": e.label.to_mapping()}
                for e in sorted(self.edges, key=lambda e: e.id)
            ],
        }

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        """Vertex ids in storage order."""
        return tuple(v.id for v in self.vertices)

    def edge(self, edge_id: str) -> Edge:
        """Look up an edge by id."""
        for e in self.edges:
            if e.id == edge_id:
                return e
        msg = f"Unknown edge: {edge_id}"
        raise KeyError(msg)

    def to_multigraph(self) -> nx.MultiGraph:
        """Return a networkx view keyed by edge id, with genus and label attributes."""
        multigraph = nx.MultiGraph()
        for v in self.vertices:
            multigraph.add_node(v.id, genus=v.genus)
        for e in self.edges:
            multigraph.add_edge(*e.ends, key=e.id, label=e.label)
        return multigraph


def duplicate_ids(ids: Iterable[str]) -> list[str]:
    """Return the ids occurring more than once, sorted."""
    ids = list(ids)
    return sorted({i for i in ids if ids.count(i) > 1})


def validate(g: LabelledGraph) -> list[str]:
    """Collect every violated invariant of ``g``.

    Returns
    -------
    list[str]
        Empty when the graph is valid
    """
    violations = [f"duplicate vertex id: {v}" for v in duplicate_ids(g.vertex_ids)]
    violations += [f"duplicate edge id: {e}" for e in duplicate_ids(e.id for e in g.edges)]
    violations += [f"reserved character '#' in vertex id: {v}" for v in g.vertex_ids if "#" in v]
    violations += [f"reserved character '/' in edge id: {e.id}" for e in g.edges if "/" in e.id]

    known = set(g.vertex_ids)
    for e in g.edges:
        if unknown := [end for end in e.ends if end not in known]:
            violations.append(f"unknown endpoint: edge {e.id} -> {', '.join(unknown)}")
        if e.label.parameters != g.parameters:
            violations.append(f"parameter mismatch: edge {e.id}")
        elif is_unit(e.label):
            violations.append(f"unit label: edge {e.id}")

    if not g.vertices:
        violations.append("empty: no vertices")
    elif not any(v.startswith("unknown endpoint") for v in violations):
        if not nx.is_connected(g.to_multigraph()):
            violations.append("disconnected")

    return violations


def require_valid(g: LabelledGraph) -> LabelledGraph:
    """Return ``g`` if it is valid.

    Raises
    ------
    GraphValidationError
        Carrying every violation found by ``validate``
    """
    if violations := validate(g):
        raise GraphValidationError(violations)
    return g


def strata(parameters: ParameterSet) -> Iterator[tuple[str, ...]]:
    """Yield every subset of the parameters, by increasing size, in canonical order."""
    for size in range(len(parameters) + 1):
        yield from combinations(parameters.names, size)


def specialize(g: LabelledGraph, keep: Iterable[str]) -> LabelledGraph:
    """Generize the graph to the stratum where only ``keep`` stay non-invertible.

    Labels are projected to ``keep``. Edges whose label becomes a unit are
    contracted; a merged vertex is named after its smallest original id and gets
    the summed genera plus the first Betti number of the contracted piece.
    """
    log = logging.getLogger(__name__)

    require_valid(g)
    parameters = g.parameters.restrict(keep)

    projected = {e.id: project(e.label, parameters.names) for e in g.edges}
    contracted = [e for e in g.edges if is_unit(projected[e.id])]

    classes = nx.utils.UnionFind(g.vertex_ids)
    for e in contracted:
        classes.union(*e.ends)

    representative = {}
    for members in classes.to_sets():
        for v in members:
            representative[v] = min(members)

    genus = defaultdict(int)
    vertex_count = defaultdict(int)
    for v in g.vertices:
        genus[representative[v.id]] += v.genus
        vertex_count[representative[v.id]] += 1
    for e in contracted:
        genus[representative[e.ends[0]]] += 1
    for rep, count in vertex_count.items():
        genus[rep] -= count - 1

    log.debug(f"Stratum {parameters.names}: contracted {len(contracted)} of {len(g.edges)} edges")

    return LabelledGraph(
        parameters=parameters,
        vertices=tuple(
            Vertex(id=v.id, genus=genus[v.id])
            for v in g.vertices
            if representative[v.id] == v.id
        ),
        edges=tuple(
            Edge(
                id=e.id,
                ends=(representative[e.ends[0]], representative[e.ends[1]]),
                label=projected[e.id],
            )
            for e in g.edges
            if not is_unit(projected[e.id])
        ),
    )


def biconnected_blocks(g: LabelledGraph) -> list[frozenset[str]]:
    """Partition the edges into blocks.

    Two distinct non-loop edges share a block iff they lie on a common circuit.
    Bridges and loops are singleton blocks; parallel edges share a block.
    Blocks are ordered by their smallest edge id.
    """
    require_valid(g)

    simple = nx.Graph()
    simple.add_nodes_from(g.vertex_ids)
    parallel_class = defaultdict(list)
    blocks = []

    for e in g.edges:
        if e.is_loop:
            blocks.append(frozenset([e.id]))
        else:
            parallel_class[frozenset(e.ends)].append(e.id)
            simple.add_edge(*e.ends)

    for component in nx.biconnected_component_edges(simple):
        block = set()
        for u, v in component:
            block.update(parallel_class[frozenset((u, v))])
        blocks.append(frozenset(block))

    return sorted(blocks, key=sorted)


def edge_blocks(g: LabelledGraph) -> dict[str, int]:
    """Map each edge id to the index of its block in ``biconnected_blocks``."""
    return {
        edge_id: index
        for index, block in enumerate(biconnected_blocks(g))
        for edge_id in block
    }


def canonical_circuit(cycle: list[str]) -> tuple[str, ...]:
    """Return a cyclic edge sequence in canonical form.

    The sequence is rotated to start at its smallest id and read towards the
    smaller of that edge's two neighbours, so every traversal of one circuit
    gives the same tuple.
    """
    start = cycle.index(min(cycle))
    rotated = cycle[start:] + cycle[:start]
    if len(rotated) > 2 and rotated[-1] < rotated[1]:  # noqa: PLR2004
        rotated = [rotated[0], *reversed(rotated[1:])]
    return tuple(rotated)


def enumerate_circuits(
    g: LabelledGraph,
    limit: int | None = DEFAULT_LIMITS.circuit_edges,
) -> list[tuple[str, ...]]:
    """List every circuit of ``g`` once, as a sequence of edge ids.

    A circuit is a closed walk repeating neither edges nor intermediate vertices;
    a loop is a circuit of length 1. Each circuit is reported starting at its
    smallest edge id, in the direction whose second edge is the smaller.

    Raises
    ------
    GuardLimitExceededError
        The graph has more edges than ``limit``
    """
    require_valid(g)
    check_limit("circuit_edges", len(g.edges), limit)

    order = {v: i for i, v in enumerate(g.vertex_ids)}
    adjacency = defaultdict(list)
    found = {}

    for e in g.edges:
        if e.is_loop:
            found[frozenset([e.id])] = (e.id,)
        else:
            u, v = e.ends
            adjacency[u].append((e.id, v))
            adjacency[v].append((e.id, u))

    def extend(start: str, vertex: str, path: list[str], visited: set[str]) -> None:
        for edge_id, neighbour in adjacency[vertex]:
            if edge_id in path:
                continue
            if neighbour == start:
                cycle = [*path, edge_id]
                found.setdefault(frozenset(cycle), canonical_circuit(cycle))
            elif order[neighbour] > order[start] and neighbour not in visited:
                extend(start, neighbour, [*path, edge_id], visited | {neighbour})

    for start in g.vertex_ids:
        extend(start, start, [], {start})

    return sorted(found.values(), key=lambda c: (len(c), c))


def betti1(g: LabelledGraph) -> int:
    """Return the first Betti number of the (connected) graph."""
    require_valid(g)
    return len(g.edges) - len(g.vertices) + 1


def jacobian_dimension(g: LabelledGraph) -> int:
    """Return the arithmetic genus of the fibre: Betti number plus summed genera."""
    return betti1(g) + sum(v.genus for v in g.vertices)


@validate_call
def classify(g: LabelledGraph) -> GraphClass:
    """Classify ``g`` as a tree, treelike (tree plus loops), aligned, or not aligned."""
    from aligned_graphs.alignment import is_aligned

    if betti1(g) == 0:
        return GraphClass.TREE

    blocks = biconnected_blocks(g)
    if all(len(block) == 1 for block in blocks):
        return GraphClass.TREELIKE

    if is_aligned(g).aligned:
        return GraphClass.ALIGNED_NOT_TREELIKE

    return GraphClass.NOT_ALIGNED
