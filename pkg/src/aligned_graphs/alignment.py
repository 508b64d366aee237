"""Alignment of labelled graphs, the criterion for existence of a Néron model.

A labelled graph is aligned when, for every circuit and every pair of edges on
it, the two labels have a common power. Two distinct non-loop edges lie on a
common circuit iff they share a biconnected block, so the test runs block by
block against one representative label per block.

Example:
-------
    verdict = is_aligned(g)
    if not verdict.aligned:
        print(verdict.witness.circuit, verdict.witness.pair)

"""

import logging

import networkx as nx
from pydantic import constr, dataclasses, model_validator

from aligned_graphs.configuration import DEFAULT_LIMITS
from aligned_graphs.graph import (
    LabelledGraph,
    biconnected_blocks,
    canonical_circuit,
    enumerate_circuits,
    require_valid,
    specialize,
    strata,
)
from aligned_graphs.labels import parallel
from aligned_graphs.validation import check_limit


EdgeId = constr(min_length=1, strict=True)


@dataclasses.dataclass(frozen=True)
class Witness:
    """A circuit and two edges on it whose labels are not parallel."""

    circuit: tuple[EdgeId, ...]
    pair: tuple[EdgeId, EdgeId]

    @model_validator(mode="after")
    def check_pair_on_circuit(self) -> "Witness":
        """Check that both edges of the pair lie on the circuit."""
        if not set(self.pair) <= set(self.circuit):
            msg = f"Witness pair {self.pair} is not on circuit {self.circuit}"
            raise ValueError(msg)
        return self

    def to_dict(self) -> dict:
        """Serialize with the circuit as an ordered edge id list."""
        return {"circuit": list(self.circuit), "pair": list(self.pair)}


@dataclasses.dataclass(frozen=True)
class AlignmentVerdict:
    """Whether a graph is aligned, with a witness exactly when it is not."""

    aligned: bool
    witness: Witness | None = None

    @model_validator(mode="after")
    def check_witness_iff_not_aligned(self) -> "AlignmentVerdict":
        """Check that a witness is present iff the graph is not aligned."""
        if self.aligned == (self.witness is not None):
            msg = "A witness must be given exactly when the graph is not aligned"
            raise ValueError(msg)
        return self

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types."""
        return {
            "aligned": self.aligned,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclasses.dataclass(frozen=True)
class StratumVerdict:
    """Alignment of the graph specialized to one stratum."""

    keep: tuple[str, ...]
    verdict: AlignmentVerdict

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types."""
        return {"keep": list(self.keep), **self.verdict.to_dict()}


@dataclasses.dataclass(frozen=True)
class NeronModelReport:
    """Néron model existence with the per-stratum table behind it."""

    exists: bool
    strata: tuple[StratumVerdict, ...]

    @property
    def failing(self) -> tuple[StratumVerdict, ...]:
        """Strata whose specialized graph is not aligned."""
        return tuple(s for s in self.strata if not s.verdict.aligned)

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types."""
        return {
            "exists": self.exists,
            "strata": [s.to_dict() for s in self.strata],
            "failing": [list(s.keep) for s in self.failing],
        }


def _circuit_through(g: LabelledGraph, block: frozenset[str], e1: str, e2: str) -> tuple[str, ...]:
    """Build a circuit through two edges of the same block.

    Every edge of the block is subdivided by a node of its own; two internally
    disjoint paths between the nodes of ``e1`` and ``e2`` close up to the circuit.
    """
    incidence = nx.Graph()
    for e in g.edges:
        if e.id in block:
            incidence.add_edge(("edge", e.id), ("vertex", e.ends[0]))
            incidence.add_edge(("edge", e.id), ("vertex", e.ends[1]))

    paths = list(nx.node_disjoint_paths(incidence, ("edge", e1), ("edge", e2)))
    if len(paths) < 2:  # noqa: PLR2004
        msg = f"Edges {e1} and {e2} do not lie on a common circuit"
        logging.getLogger(__name__).error(msg)
        raise RuntimeError(msg)

    there, back = paths[0], paths[1]
    cycle = [node[1] for node in there if node[0] == "edge"]
    cycle += [node[1] for node in reversed(back[1:-1]) if node[0] == "edge"]

    return canonical_circuit(cycle)


def is_aligned(g: LabelledGraph) -> AlignmentVerdict:
    """Decide alignment block by block.

    Within each block of two or more edges every label is compared with the
    label of the block's smallest edge id; parallelism is transitive on nonzero
    labels, so this covers every pair.
    """
    log = logging.getLogger(__name__)

    require_valid(g)
    labels = {e.id: e.label for e in g.edges}

    for block in biconnected_blocks(g):
        representative, *others = sorted(block)
        for other in others:
            if not parallel(labels[representative], labels[other]):
                pair = (representative, other)
                log.info(f"Labels of {pair} are not parallel")
                return AlignmentVerdict(
                    aligned=False,
                    witness=Witness(
                        circuit=_circuit_through(g, block, *pair),
                        pair=pair,
                    ),
                )

    return AlignmentVerdict(aligned=True)


def is_aligned_bruteforce(
    g: LabelledGraph,
    limit: int | None = DEFAULT_LIMITS.circuit_edges,
) -> AlignmentVerdict:
    """Decide alignment by checking every pair of edges on every circuit.

    Raises
    ------
    GuardLimitExceededError
        The graph has more edges than ``limit``
    """
    labels = {e.id: e.label for e in g.edges}

    for circuit in enumerate_circuits(g, limit=limit):
        for i, first in enumerate(circuit):
            for second in circuit[i + 1 :]:
                if not parallel(labels[first], labels[second]):
                    return AlignmentVerdict(
                        aligned=False,
                        witness=Witness(circuit=circuit, pair=(first, second)),
                    )

    return AlignmentVerdict(aligned=True)


def neron_model_exists(
    g: LabelledGraph,
    limit: int | None = DEFAULT_LIMITS.strata_parameters,
) -> NeronModelReport:
    """Check alignment at every stratum of the base.

    Alignment specializes, so the answer always equals alignment at the closed
    stratum; enumerating every stratum cross-checks that.

    Raises
    ------
    GuardLimitExceededError
        The graph has more parameters than ``limit``
    RuntimeError
        The stratum table contradicts alignment at the closed stratum
    """
    log = logging.getLogger(__name__)

    require_valid(g)
    check_limit("strata_parameters", len(g.parameters), limit)

    table = []
    for keep in strata(g.parameters):
        verdict = is_aligned(specialize(g, keep))
        log.info(f"Stratum {keep}: {'aligned' if verdict.aligned else 'not aligned'}")
        table.append(StratumVerdict(keep=keep, verdict=verdict))

    exists = all(s.verdict.aligned for s in table)

    if exists != is_aligned(g).aligned:
        msg = "Stratum table contradicts alignment of the closed stratum"
        log.error(msg)
        raise RuntimeError(msg)

    return NeronModelReport(exists=exists, strata=tuple(table))
