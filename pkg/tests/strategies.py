"""Hypothesis strategies and exhaustive enumerators for small graphs."""

from collections import defaultdict
from collections.abc import Iterator
from functools import cache
from itertools import combinations_with_replacement, permutations, product
from typing import Literal

import networkx as nx
from hypothesis import strategies as st

from aligned_graphs.graph import Edge, LabelledGraph, Vertex
from aligned_graphs.labels import Label, ParameterSet
from aligned_graphs.nmodel import WeightedEdge, WeightedGraph, WeightedVertex

PARAMETER_NAMES = ("x", "y", "z")

# Pairwise non-parallel exponent vectors over x, y, z with entries in {0, 1, 2}.
RAYS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 2, 0))

Shape = tuple[tuple[int, int], ...]


def _pairs(vertices: list[str], loops: bool) -> list[tuple[str, str]]:
    return [
        (u, v)
        for i, u in enumerate(vertices)
        for v in vertices[i if loops else i + 1 :]
    ]


def _is_connected(vertices: list, ends: list[tuple]) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(vertices)
    g.add_edges_from(ends)
    return nx.is_connected(g)


@st.composite
def connected_ends(
    draw: st.DrawFn,
    max_vertices: int = 4,
    max_edges: int = 6,
    loops: bool = True,
    shape: Literal["any", "treelike", "tree"] = "any",
) -> tuple[list[str], list[tuple[str, str]]]:
    """Draw vertex ids and edge ends of a connected multigraph.

    ``shape`` restricts the extra edges on top of a random spanning tree:
    none for "tree", loops only for "treelike".
    """
    n = draw(st.integers(1, min(max_vertices, max_edges + 1)))
    vertices = [f"v{i}" for i in range(n)]
    ends = [(vertices[draw(st.integers(0, i - 1))], vertices[i]) for i in range(1, n)]
    if shape == "treelike":
        pairs = [(v, v) for v in vertices]
    elif shape == "tree":
        pairs = []
    else:
        pairs = _pairs(vertices, loops)
    if pairs:
        ends += draw(st.lists(st.sampled_from(pairs), max_size=max_edges - len(ends)))
    return vertices, draw(st.permutations(ends))


@st.composite
def labelled_graphs(  # noqa: PLR0913
    draw: st.DrawFn,
    max_vertices: int = 4,
    max_edges: int = 6,
    max_parameters: int = 3,
    max_exponent: int = 2,
    shape: Literal["any", "treelike", "tree"] = "any",
) -> LabelledGraph:
    """Draw a valid labelled graph."""
    k = draw(st.integers(1, max_parameters))
    parameters = ParameterSet(names=PARAMETER_NAMES[:k])
    vertices, ends = draw(connected_ends(max_vertices, max_edges, shape=shape))
    exponents = st.lists(st.integers(0, max_exponent), min_size=k, max_size=k).filter(any)
    return LabelledGraph(
        parameters=parameters,
        vertices=tuple(Vertex(id=v, genus=draw(st.integers(0, 1))) for v in vertices),
        edges=tuple(
            Edge(
                id=f"e{i}",
                ends=e,
                label=Label(parameters=parameters, exponents=tuple(draw(exponents))),
            )
            for i, e in enumerate(ends)
        ),
    )


@st.composite
def aligned_labelled_graphs(
    draw: st.DrawFn,
    max_pieces: int = 4,
    max_parameters: int = 3,
) -> LabelledGraph:
    """Draw an aligned graph by gluing small pieces at single vertices.

    Every edge of a piece carries a power of the piece's base label, and each
    block of the result lies inside one piece.
    """
    k = draw(st.integers(1, max_parameters))
    parameters = ParameterSet(names=PARAMETER_NAMES[:k])
    base_labels = st.lists(st.integers(0, 2), min_size=k, max_size=k).filter(any)

    vertices = ["v0"]
    edges = []
    for piece in range(draw(st.integers(1, max_pieces))):
        piece_vertices, piece_ends = draw(connected_ends(max_vertices=3, max_edges=3))
        anchor = draw(st.sampled_from(vertices))
        rename = {piece_vertices[0]: anchor} | {v: f"p{piece}{v}" for v in piece_vertices[1:]}
        vertices += [rename[v] for v in piece_vertices[1:]]
        base = draw(base_labels)
        for u, v in piece_ends:
            power = draw(st.integers(1, 2))
            edges.append(
                Edge(
                    id=f"e{len(edges)}",
                    ends=(rename[u], rename[v]),
                    label=Label(parameters=parameters, exponents=tuple(power * b for b in base)),
                ),
            )

    return LabelledGraph(
        parameters=parameters,
        vertices=tuple(Vertex(id=v, genus=draw(st.integers(0, 1))) for v in vertices),
        edges=tuple(edges),
    )


@st.composite
def weighted_graphs(  # noqa: PLR0913
    draw: st.DrawFn,
    max_vertices: int = 4,
    max_edges: int = 6,
    max_thickness: int = 4,
    loops: bool = True,
    shape: Literal["any", "treelike", "tree"] = "any",
) -> WeightedGraph:
    """Draw a valid weighted graph."""
    vertices, ends = draw(connected_ends(max_vertices, max_edges, loops, shape))
    return WeightedGraph(
        vertices=tuple(WeightedVertex(id=v) for v in vertices),
        edges=tuple(
            WeightedEdge(id=f"e{i}", ends=e, thickness=draw(st.integers(1, max_thickness)))
            for i, e in enumerate(ends)
        ),
    )


def all_weighted_graphs(
    n_vertices: int,
    max_edges: int,
    max_thickness: int,
    loops: bool = True,
) -> Iterator[WeightedGraph]:
    """Enumerate every connected weighted multigraph on ``n_vertices`` vertices."""
    vertices = [f"v{i}" for i in range(n_vertices)]
    pairs = _pairs(vertices, loops)
    for size in range(max_edges + 1):
        for ends in combinations_with_replacement(pairs, size):
            if not _is_connected(vertices, list(ends)):
                continue
            for thicknesses in product(range(1, max_thickness + 1), repeat=size):
                yield WeightedGraph(
                    vertices=tuple(WeightedVertex(id=v) for v in vertices),
                    edges=tuple(
                        WeightedEdge(id=f"e{i}", ends=e, thickness=t)
                        for i, (e, t) in enumerate(zip(ends, thicknesses))
                    ),
                )


def all_labelled_graphs(
    n_vertices: int,
    max_edges: int,
    labels: list[dict[str, int]],
    parameters: tuple[str, ...] = ("x", "y"),
) -> Iterator[LabelledGraph]:
    """Enumerate every connected multigraph on ``n_vertices`` vertices with labels from ``labels``."""
    parameter_set = ParameterSet(names=parameters)
    vertices = [f"v{i}" for i in range(n_vertices)]
    pairs = _pairs(vertices, loops=True)
    for size in range(max_edges + 1):
        for ends in combinations_with_replacement(pairs, size):
            if not _is_connected(vertices, list(ends)):
                continue
            for chosen in product(labels, repeat=size):
                yield LabelledGraph(
                    parameters=parameter_set,
                    vertices=tuple(Vertex(id=v) for v in vertices),
                    edges=tuple(
                        Edge(id=f"e{i}", ends=e, label=Label.from_mapping(parameter_set, m))
                        for i, (e, m) in enumerate(zip(ends, chosen))
                    ),
                )


def _relabel(shape: Shape, p: tuple[int, ...]) -> Shape:
    return tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in shape))


def _canonical_form(shape: Shape, n: int) -> Shape:
    return min(_relabel(shape, p) for p in permutations(range(n)))


@cache
def canonical_shapes(n: int, max_edges: int, treelike: bool = False) -> tuple[Shape, ...]:
    """Return one connected multigraph on vertices 0..n-1 per isomorphism class, loops allowed.

    Shapes are sorted tuples of ``(u, v)`` with ``u <= v``, so parallel edges
    are adjacent. With ``treelike`` only trees with loops attached are kept.
    """
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    seen = set()
    shapes = []
    for size in range(max(n - 1, 0), max_edges + 1):
        for ends in combinations_with_replacement(pairs, size):
            bonds = sum(1 for u, v in ends if u != v)
            if bonds < n - 1 or (treelike and bonds != n - 1):
                continue
            if not _is_connected(list(range(n)), list(ends)):
                continue
            form = _canonical_form(ends, n)
            if form not in seen:
                seen.add(form)
                shapes.append(form)
    return tuple(shapes)


def _automorphisms(shape: Shape, n: int) -> list[tuple[int, ...]]:
    return [p for p in permutations(range(n)) if _relabel(shape, p) == shape]


def _bundles(shape: Shape) -> dict[tuple[int, int], list[int]]:
    bundles = defaultdict(list)
    for i, pair in enumerate(shape):
        bundles[pair].append(i)
    return bundles


def _preimage(pair: tuple[int, int], p: tuple[int, ...]) -> tuple[int, int]:
    inverse = {image: v for v, image in enumerate(p)}
    return tuple(sorted((inverse[pair[0]], inverse[pair[1]])))


def canonical_thicknesses(shape: Shape, n: int, max_thickness: int) -> Iterator[tuple[int, ...]]:
    """Yield one thickness assignment per orbit under the symmetries of ``shape``.

    Assignments are non-decreasing inside each bundle of parallel edges, and
    an assignment is kept only if no automorphism maps it to a smaller one.
    """
    bundles = _bundles(shape)
    order = list(bundles)
    automorphisms = [p for p in _automorphisms(shape, n) if p != tuple(range(n))]
    per_bundle = [
        list(combinations_with_replacement(range(1, max_thickness + 1), len(bundles[pair]))) for pair in order
    ]
    for choice in product(*per_bundle):
        assignment = tuple(t for part in choice for t in part)
        by_pair = dict(zip(order, choice))
        if all(
            assignment <= tuple(t for pair in order for t in by_pair[_preimage(pair, p)])
            for p in automorphisms
        ):
            yield assignment


def iso_weighted_graphs(
    max_vertices: int,
    max_edges: int,
    max_thickness: int,
    treelike: bool = False,
) -> Iterator[WeightedGraph]:
    """Enumerate connected weighted multigraphs up to isomorphism."""
    for n in range(1, max_vertices + 1):
        vertices = tuple(WeightedVertex(id=f"v{i}") for i in range(n))
        for shape in canonical_shapes(n, max_edges, treelike):
            for thicknesses in canonical_thicknesses(shape, n, max_thickness):
                yield WeightedGraph(
                    vertices=vertices,
                    edges=tuple(
                        WeightedEdge(id=f"e{i}", ends=(f"v{u}", f"v{v}"), thickness=t)
                        for i, ((u, v), t) in enumerate(zip(shape, thicknesses))
                    ),
                )


def set_partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Yield every partition of range(k) as a restricted growth string."""

    def grow(prefix: tuple[int, ...], blocks: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == k:
            yield prefix
            return
        for b in range(blocks + 1):
            yield from grow((*prefix, b), max(blocks, b + 1))

    yield from grow((), 0)


def parallelism_labelled_graphs(max_edges: int) -> Iterator[LabelledGraph]:
    """Enumerate every shape with up to ``max_edges`` edges under every parallelism pattern.

    Edges in one class get powers of one of ``RAYS``; every second edge of a
    class gets the doubled ray when its exponents allow, so parallel labels are
    not always equal.
    """
    parameters = ParameterSet(names=PARAMETER_NAMES)
    for n in range(1, max_edges + 2):
        vertices = tuple(Vertex(id=f"v{i}") for i in range(n))
        for shape in canonical_shapes(n, max_edges):
            for classes in set_partitions(len(shape)):
                seen = defaultdict(int)
                edges = []
                for i, ((u, v), c) in enumerate(zip(shape, classes)):
                    ray = RAYS[c]
                    if seen[c] % 2 and max(ray) == 1:
                        ray = tuple(2 * r for r in ray)
                    seen[c] += 1
                    edges.append(
                        Edge(id=f"e{i}", ends=(f"v{u}", f"v{v}"), label=Label(parameters=parameters, exponents=ray)),
                    )
                yield LabelledGraph(parameters=parameters, vertices=vertices, edges=tuple(edges))


def to_labelled(wg: WeightedGraph) -> LabelledGraph:
    """Read thicknesses as powers of a single parameter ``x``."""
    parameters = ParameterSet(names=("x",))
    return LabelledGraph(
        parameters=parameters,
        vertices=tuple(Vertex(id=v.id, genus=v.genus) for v in wg.vertices),
        edges=tuple(
            Edge(id=e.id, ends=e.ends, label=Label.monomial(parameters, "x", e.thickness))
            for e in wg.edges
        ),
    )


def labelled_shape(shape: Shape, n: int) -> LabelledGraph:
    """Put the label x on every edge of ``shape``."""
    parameters = ParameterSet(names=("x",))
    return LabelledGraph(
        parameters=parameters,
        vertices=tuple(Vertex(id=f"v{i}") for i in range(n)),
        edges=tuple(
            Edge(id=f"e{i}", ends=(f"v{u}", f"v{v}"), label=Label.monomial(parameters, "x"))
            for i, (u, v) in enumerate(shape)
        ),
    )
