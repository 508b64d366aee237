"""Néron model combinatorics over a trait.

Pulling a labelled graph back along a trait turns labels into thicknesses.
From the weighted graph this module computes the component group of the
classical Néron model (the critical group of the subdivided graph), the
component group of the quotient of Pic^[0] by the closure of the unit section
(the congruence-twist lattice on the original components), and the least sup-norm
bound on multidegrees that reaches every component.

Example:
-------
    wg = pull_back(LabelledGraph.from_file("banana_23.json"))
    str(critical_group(wg))            # "Z/5"
    str(quotient_component_group(wg))  # "Z/5"
    degree_bound(wg)                   # 2

"""

import logging
from collections import defaultdict
from collections.abc import Iterator, Mapping
from enum import Enum
from itertools import combinations
from math import prod
from pathlib import Path
from typing import Literal

import networkx as nx
from pydantic import NonNegativeInt, PositiveInt, constr, dataclasses, model_validator

from aligned_graphs.configuration import DEFAULT_LIMITS, Limits, read_document
from aligned_graphs.graph import (
    LabelledGraph,
    duplicate_ids,
    require_valid,
    specialize,
    strata,
)
from aligned_graphs.labels import ParameterSet
from aligned_graphs.lattice import (
    IntMatrix,
    InvariantFactors,
    QuotientMap,
    degree_zero_basis,
    hermite_normal_form,
    kernel_basis,
)
from aligned_graphs.validation import GraphValidationError, check_limit, document_entries


Identifier = constr(min_length=1, strict=True)


@dataclasses.dataclass(frozen=True)
class TraitWeights:
    """Order of vanishing of each parameter along the trait."""

    weights: dict[Identifier, PositiveInt]

    @classmethod
    def uniform(cls, parameters: ParameterSet, weight: int = 1) -> "TraitWeights":
        """Give every parameter the same weight; 1 makes each a uniformiser."""
        return cls(weights={n: weight for n in parameters})

    @classmethod
    def parse(cls, text: str, parameters: ParameterSet, default: int = 1) -> "TraitWeights":
        """Parse ``x=1,y=2``; parameters not mentioned get ``default``.

        Raises
        ------
        ValueError
            Malformed assignment, or a parameter outside ``parameters``
        """
        weights = {n: default for n in parameters}
        for assignment in filter(None, (a.strip() for a in text.split(","))):
            name, sep, value = assignment.partition("=")
            if not sep or not value.strip().lstrip("-").isdigit():
                msg = f"Malformed weight assignment: '{assignment}' (expected name=integer)"
                raise ValueError(msg)
            if name.strip() not in parameters:
                msg = f"Weight given for unknown parameter: {name.strip()}"
                raise ValueError(msg)
            weights[name.strip()] = int(value)
        return cls(weights=weights)

    def restrict(self, keep: tuple[str, ...]) -> "TraitWeights":
        """Keep only the weights of ``keep``."""
        return TraitWeights(weights={n: self.weights[n] for n in keep})


@dataclasses.dataclass(frozen=True)
class WeightedVertex:
    """A component of the fibre over the closed point of the trait."""

    id: Identifier  # noqa: A003
    genus: NonNegativeInt = 0
    kind: Literal["original", "exceptional"] = "original"


@dataclasses.dataclass(frozen=True)
class WeightedEdge:
    """A node of thickness ``thickness`` (local equation xy = t^thickness)."""

    id: Identifier  # noqa: A003
    ends: tuple[Identifier, Identifier]
    thickness: PositiveInt

    @property
    def is_loop(self) -> bool:
        """Whether both ends are the same component."""
        return self.ends[0] == self.ends[1]


@dataclasses.dataclass(frozen=True)
class WeightedGraph:
    """Dual graph of a nodal curve over a trait, edges weighted by thickness."""

    vertices: tuple[WeightedVertex, ...]
    edges: tuple[WeightedEdge, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedGraph":
        """Parse the weighted JSON format (the graph format with ``thickness`` for ``label``).

        Raises
        ------
        DocumentError
            The vertex or edge list is malformed, or an entry lacks a required field
        """
        vertices = document_entries(data, "vertices", "vertex", ("id",))
        edges = document_entries(data, "edges", "edge", ("id", "ends", "thickness"))
        return cls(
            vertices=tuple(
                WeightedVertex(id=v["id"], genus=v.get("genus", 0), kind=v.get("kind", "original")) for v in vertices
            ),
            edges=tuple(WeightedEdge(id=e["id"], ends=e["ends"], thickness=e["thickness"]) for e in edges),
        )

    @classmethod
    def from_file(cls, path: Path | str) -> "WeightedGraph":
        """Read a weighted graph document (JSON, TOML or YAML)."""
        return cls.from_dict(read_document(path))

    def to_dict(self) -> dict:
        """Serialize, ordered by id; ``kind`` is written only for exceptional vertices."""
        return {
            "vertices": [
                {"id": v.id, "genus": v.genus} | ({"kind": v.kind} if v.kind != "original" else {})
                for v in sorted(self.vertices, key=lambda v: v.id)
            ],
            "edges": [
                {"id": e.id, "ends": list(e.ends), "thickness": e.thickness}
                for e in sorted(self.edges, key=lambda e: e.id)
            ],
        }

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        """Vertex ids in storage order."""
        return tuple(v.id for v in self.vertices)

    def summary(self) -> dict:
        """Return vertex and edge counts and the thickness profile."""
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "max_thickness": max((e.thickness for e in self.edges), default=0),
            "total_thickness": sum(e.thickness for e in self.edges),
        }


def validate(wg: WeightedGraph) -> list[str]:
    """Collect every violated invariant of ``wg``; empty when valid."""
    violations = [f"duplicate vertex id: {v}" for v in duplicate_ids(wg.vertex_ids)]
    violations += [f"duplicate edge id: {e}" for e in duplicate_ids(e.id for e in wg.edges)]

    exceptional = {v.id for v in wg.vertices if v.kind == "exceptional"}
    violations += [
        f"reserved character '#' in vertex id: {v.id}" for v in wg.vertices if "#" in v.id and v.id not in exceptional
    ]
    violations += [
        f"reserved character '/' in edge id: {e.id}"
        for e in wg.edges
        if "/" in e.id and not exceptional.intersection(e.ends)
    ]

    known = set(wg.vertex_ids)
    for e in wg.edges:
        if unknown := [end for end in e.ends if end not in known]:
            violations.append(f"unknown endpoint: edge {e.id} -> {', '.join(unknown)}")

    if not wg.vertices:
        violations.append("empty: no vertices")
    elif not any(v.startswith("unknown endpoint") for v in violations):
        connectivity = nx.MultiGraph()
        connectivity.add_nodes_from(wg.vertex_ids)
        connectivity.add_edges_from(e.ends for e in wg.edges)
        if not nx.is_connected(connectivity):
            violations.append("disconnected")

    return violations


def require_valid_weighted(wg: WeightedGraph) -> WeightedGraph:
    """Return ``wg`` if it is valid.

    Raises
    ------
    GraphValidationError
        Carrying every violation found by ``validate``
    """
    if violations := validate(wg):
        raise GraphValidationError(violations)
    return wg


@dataclasses.dataclass(frozen=True)
class Multidegree:
    """Degrees of a line bundle on each component; total degree zero."""

    vertices: tuple[Identifier, ...]
    degrees: tuple[int, ...]

    @model_validator(mode="after")
    def check_total_degree_zero(self) -> "Multidegree":
        """Check one degree per vertex and a total of zero."""
        if len(self.vertices) != len(self.degrees):
            msg = f"Expected {len(self.vertices)} degrees, got {len(self.degrees)}"
            raise ValueError(msg)
        if sum(self.degrees) != 0:
            msg = f"Multidegree {self.degrees} has total degree {sum(self.degrees)}"
            raise ValueError(msg)
        return self

    @property
    def sup_norm(self) -> int:
        """Largest absolute partial degree."""
        return max((abs(d) for d in self.degrees), default=0)

    def to_dict(self) -> dict[str, int]:
        """Map vertex id to degree."""
        return dict(zip(self.vertices, self.degrees))


class DegreeBoundScope(str, Enum):
    """Which components the partial degrees of the bound are taken on."""

    ORIGINAL = "original"
    SUBDIVIDED = "subdivided"


def _resolve_weights(g: LabelledGraph, w: TraitWeights | None) -> Mapping[str, int]:
    if w is None:
        return TraitWeights.uniform(g.parameters).weights
    if set(w.weights) != set(g.parameters):
        msg = f"Weights given for {sorted(w.weights)}, graph parameters are {sorted(g.parameters)}"
        raise ValueError(msg)
    return w.weights


def pull_back(g: LabelledGraph, w: TraitWeights | None = None) -> WeightedGraph:
    """Pull the labelled graph back to a trait.

    Each thickness is the label's exponent vector dotted with the weights; the
    default weights are all 1.
    """
    require_valid(g)
    weights = _resolve_weights(g, w)
    return WeightedGraph(
        vertices=tuple(WeightedVertex(id=v.id, genus=v.genus) for v in g.vertices),
        edges=tuple(
            WeightedEdge(
                id=e.id,
                ends=e.ends,
                thickness=sum(x * weights[n] for n, x in zip(g.parameters, e.label.exponents)),
            )
            for e in g.edges
        ),
    )


def max_thickness(g: LabelledGraph, w: TraitWeights | None = None) -> int:
    """Return the largest thickness after pulling back (0 without edges)."""
    return pull_back(g, w).summary()["max_thickness"]


def subdivide(wg: WeightedGraph) -> WeightedGraph:
    """Resolve every node of thickness l into a chain of l - 1 exceptional components.

    Edge ``e`` of thickness l > 1 becomes edges ``e/0 .. e/(l-1)`` through new
    vertices ``e#1 .. e#(l-1)``; thickness-1 edges are kept as they are.

    Raises
    ------
    GraphValidationError
        The graph is invalid, or a new id clashes with a declared exceptional vertex
    """
    require_valid_weighted(wg)

    vertices = list(wg.vertices)
    edges = []
    for e in wg.edges:
        if e.thickness == 1:
            edges.append(e)
            continue
        chain = [e.ends[0], *(f"{e.id}#{k}" for k in range(1, e.thickness)), e.ends[1]]
        vertices += [WeightedVertex(id=v, kind="exceptional") for v in chain[1:-1]]
        edges += [
            WeightedEdge(id=f"{e.id}/{k}", ends=(chain[k], chain[k + 1]), thickness=1)
            for k in range(e.thickness)
        ]

    return require_valid_weighted(WeightedGraph(vertices=tuple(vertices), edges=tuple(edges)))


def laplacian(wg: WeightedGraph) -> IntMatrix:
    """Return the graph Laplacian of a unit-thickness graph, rows in vertex order.

    Off-diagonal entries count edges with a minus sign; the diagonal counts
    non-loop incidences, so loops contribute nothing.

    Raises
    ------
    ValueError
        Some edge has thickness other than 1
    """
    if thick := sorted(e.id for e in wg.edges if e.thickness != 1):
        msg = f"Laplacian needs unit thicknesses; subdivide first (edges {', '.join(thick)})"
        raise ValueError(msg)

    index = {v: i for i, v in enumerate(wg.vertex_ids)}
    n = len(index)
    rows = [[0] * n for _ in range(n)]
    for e in wg.edges:
        if e.is_loop:
            continue
        u, v = index[e.ends[0]], index[e.ends[1]]
        rows[u][u] += 1
        rows[v][v] += 1
        rows[u][v] -= 1
        rows[v][u] -= 1

    return IntMatrix.from_rows(rows, cols=n)


def _congruence_twists(wg: WeightedGraph) -> IntMatrix:
    """Generate the multidegrees of twists by integer vectors on the original components.

    A vector n twists the bundle when every non-loop edge's thickness divides
    the difference of n across it; the twist has degree sum_e (n_v - n_u) / t_e
    at u. Pairs (n, k) with n_u - n_v = t_e * k_e form the kernel of an integer
    matrix, and the degree map is linear in k.
    """
    index = {v: i for i, v in enumerate(wg.vertex_ids)}
    n = len(index)
    bonds = [e for e in wg.edges if not e.is_loop]
    k = len(bonds)

    conditions = []
    for j, e in enumerate(bonds):
        row = [0] * (n + k)
        row[index[e.ends[0]]] += 1
        row[index[e.ends[1]]] -= 1
        row[n + j] = -e.thickness
        conditions.append(row)

    twists = kernel_basis(IntMatrix.from_rows(conditions, cols=n + k))

    degrees = []
    for i in range(twists.rows):
        quotients = twists.row(i)[n:]
        d = [0] * n
        for j, e in enumerate(bonds):
            d[index[e.ends[0]]] -= quotients[j]
            d[index[e.ends[1]]] += quotients[j]
        degrees.append(d)

    return hermite_normal_form(IntMatrix.from_rows(degrees, cols=n)).h


def _component_lattice(wg: WeightedGraph, scope: DegreeBoundScope) -> tuple[tuple[str, ...], QuotientMap]:
    require_valid_weighted(wg)
    if scope is DegreeBoundScope.SUBDIVIDED:
        regular = subdivide(wg)
        n = len(regular.vertices)
        return regular.vertex_ids, QuotientMap(degree_zero_basis(n), laplacian(regular))
    return wg.vertex_ids, QuotientMap(degree_zero_basis(len(wg.vertices)), _congruence_twists(wg))


def critical_group(wg: WeightedGraph) -> InvariantFactors:
    """Component group of the classical Néron model over the trait.

    Degree-zero multidegrees on the subdivided graph modulo the image of its
    Laplacian.

    Raises
    ------
    GraphValidationError
        The graph is disconnected or otherwise invalid
    """
    _, quotient_map = _component_lattice(wg, DegreeBoundScope.SUBDIVIDED)
    group = quotient_map.invariant_factors
    if not group.is_finite:
        msg = f"Critical group {group} of a connected graph must be finite"
        logging.getLogger(__name__).error(msg)
        raise RuntimeError(msg)
    return group


def quotient_component_group(wg: WeightedGraph) -> InvariantFactors:
    """Component group of Pic^[0] modulo the closure of the unit section.

    Degree-zero multidegrees on the original components modulo the multidegrees
    of congruence twists (see ``_congruence_twists``). Loops impose no
    congruence and contribute no degree.

    Raises
    ------
    GraphValidationError
        The graph is disconnected or otherwise invalid
    """
    _, quotient_map = _component_lattice(wg, DegreeBoundScope.ORIGINAL)
    return quotient_map.invariant_factors


def kirchhoff_order(wg: WeightedGraph, limit: int | None = DEFAULT_LIMITS.kirchhoff_edges) -> int:
    """Sum over spanning trees T of the product of thicknesses of edges outside T.

    Equals the number of spanning trees of the subdivided graph, hence the order
    of the critical group.

    Raises
    ------
    GuardLimitExceededError
        The graph has more edges than ``limit``
    """
    require_valid_weighted(wg)
    check_limit("kirchhoff_edges", len(wg.edges), limit)

    bonds = [e for e in wg.edges if not e.is_loop]
    total = 0
    for tree in combinations(bonds, len(wg.vertices) - 1):
        forest = nx.utils.UnionFind(wg.vertex_ids)
        acyclic = True
        for e in tree:
            if forest[e.ends[0]] == forest[e.ends[1]]:
                acyclic = False
                break
            forest.union(*e.ends)
        if acyclic:
            in_tree = {e.id for e in tree}
            total += prod(e.thickness for e in wg.edges if e.id not in in_tree)
    return total


def _ball_size(n: int, radius: int) -> int:
    """Count the degree-zero vectors of Z^n with sup-norm at most ``radius``."""
    sums = {0: 1}
    for _ in range(n):
        widened = defaultdict(int)
        for total, count in sums.items():
            for x in range(-radius, radius + 1):
                widened[total + x] += count
        sums = widened
    return sums.get(0, 0)


def _sup_norm_shell(n: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Yield the degree-zero vectors of Z^n with sup-norm exactly ``radius``.

    Vectors come in lexicographic order. Prefixes whose sum can no longer be
    cancelled by the remaining entries are cut off.
    """

    def extend(prefix: tuple[int, ...], total: int, touched: bool) -> Iterator[tuple[int, ...]]:
        remaining = n - len(prefix)
        if remaining == 1:
            last = -total
            if abs(last) <= radius and (touched or abs(last) == radius):
                yield (*prefix, last)
            return
        for x in range(-radius, radius + 1):
            if abs(total + x) <= (remaining - 1) * radius:
                yield from extend((*prefix, x), total + x, touched or abs(x) == radius)

    if n > 0:
        yield from extend((), 0, False)


def _cover_cosets(
    wg: WeightedGraph,
    scope: DegreeBoundScope,
    limit: int | None,
    ball_limit: int | None,
) -> tuple[int, tuple[str, ...], list[tuple[int, ...]]]:
    """Grow sup-norm balls until every coset is hit.

    Returns the radius, the vertex order and, per coset (in representative
    order), the first vector of least sup-norm found in it.

    Raises
    ------
    GuardLimitExceededError
        The group order exceeds ``limit``, or the next ball to scan holds more
        than ``ball_limit`` vectors
    """
    log = logging.getLogger(__name__)

    vertex_ids, quotient_map = _component_lattice(wg, scope)
    group = quotient_map.invariant_factors
    if not group.is_finite:
        msg = f"Component group {group} is infinite"
        raise ValueError(msg)
    check_limit("coset_order", group.order, limit)

    n = len(vertex_ids)
    targets = [quotient_map.coset_key(r) for r in quotient_map.representatives(limit=None)]
    found = {}
    radius = 0
    while True:
        check_limit("degree_ball", _ball_size(n, radius), ball_limit)
        for vector in _sup_norm_shell(n, radius):
            found.setdefault(quotient_map.coset_key(vector), vector)
        if all(t in found for t in targets):
            log.info(f"All {len(targets)} cosets reached at sup-norm {radius}")
            return radius, vertex_ids, [found[t] for t in targets]
        radius += 1


def degree_bound(
    wg: WeightedGraph,
    scope: DegreeBoundScope = DegreeBoundScope.ORIGINAL,
    limit: int | None = DEFAULT_LIMITS.coset_order,
    ball_limit: int | None = DEFAULT_LIMITS.degree_ball,
) -> int:
    """Least n such that multidegrees with all partial degrees in [-n, n] reach every component.

    Raises
    ------
    GuardLimitExceededError
        The component group has more elements than ``limit``, or a scanned
        ball of multidegrees more than ``ball_limit``
    """
    radius, _, _ = _cover_cosets(wg, scope, limit, ball_limit)
    return radius


def small_representatives(
    wg: WeightedGraph,
    scope: DegreeBoundScope = DegreeBoundScope.ORIGINAL,
    limit: int | None = DEFAULT_LIMITS.coset_order,
    ball_limit: int | None = DEFAULT_LIMITS.degree_ball,
) -> list[Multidegree]:
    """Return, per component, a multidegree of least sup-norm reaching it."""
    _, vertex_ids, vectors = _cover_cosets(wg, scope, limit, ball_limit)
    return [Multidegree(vertices=vertex_ids, degrees=v) for v in vectors]


def stratum_thickness_bounds(
    g: LabelledGraph,
    w: TraitWeights | None = None,
    limit: int | None = DEFAULT_LIMITS.strata_parameters,
) -> dict[tuple[str, ...], int]:
    """Return the largest thickness of the graph specialized to each stratum."""
    require_valid(g)
    check_limit("strata_parameters", len(g.parameters), limit)
    weights = TraitWeights(weights=dict(_resolve_weights(g, w)))
    return {keep: max_thickness(specialize(g, keep), weights.restrict(keep)) for keep in strata(g.parameters)}


def stratified_degree_bounds(
    g: LabelledGraph,
    w: TraitWeights | None = None,
    scope: DegreeBoundScope = DegreeBoundScope.ORIGINAL,
    limits: Limits = DEFAULT_LIMITS,
) -> dict[tuple[str, ...], int]:
    """Return the degree bound of the graph specialized to each stratum.

    ``limits`` guards the stratum count, the component group order and the
    multidegree balls scanned.
    """
    require_valid(g)
    check_limit("strata_parameters", len(g.parameters), limits.strata_parameters)
    weights = TraitWeights(weights=dict(_resolve_weights(g, w)))
    return {
        keep: degree_bound(
            pull_back(specialize(g, keep), weights.restrict(keep)),
            scope,
            limit=limits.coset_order,
            ball_limit=limits.degree_ball,
        )
        for keep in strata(g.parameters)
    }
