"""Full pipeline over one graph file, as one consolidated report.

Example:
-------
    ```bash
    aligned-graphs report tests/data/graphs/banana_23.json --weights x=1
    ```

    ```python
    report = Report(graph_path="tests/data/graphs/banana_23.json")
    run_report = report.run()
    print(to_canonical_text(run_report.to_dict()))
    ```

Notes:
-----
Stages run in a fixed order. A stage that raises is recorded with its name and
the remaining stages are skipped. An unaligned graph is not an error: component
groups over a trait exist fibre by fibre.

"""

import hashlib
import logging
from collections.abc import Callable
from time import perf_counter
from typing import Any

from methodtools import lru_cache
from pydantic import FilePath, PositiveInt, dataclasses

from aligned_graphs.alignment import is_aligned, neron_model_exists
from aligned_graphs.configuration import DEFAULT_LIMITS, Limits, read_document
from aligned_graphs.graph import LabelledGraph, classify, require_valid
from aligned_graphs.nmodel import (
    DegreeBoundScope,
    TraitWeights,
    WeightedGraph,
    critical_group,
    degree_bound,
    pull_back,
    quotient_component_group,
)
from aligned_graphs.torsion import graph_torsion_bound
from aligned_graphs.validation import to_canonical_text

SCHEMA = "aligned-graphs/1"

STAGES = (
    "validate",
    "classify",
    "align",
    "strata",
    "pullback",
    "critical",
    "quotient",
    "degree_bound",
    "torsion",
)


@dataclasses.dataclass
class StageError:
    """The first stage that raised, and what it raised."""

    stage: str
    error: str
    message: str
    exception: Any = None

    def to_dict(self) -> dict:
        """Serialize without the exception object."""
        return {"stage": self.stage, "error": self.error, "message": self.message}


@dataclasses.dataclass
class RunReport:
    """Everything the pipeline computed; fields stay None for stages that did not run."""

    schema: str = SCHEMA
    digest: str | None = None
    classification: str | None = None
    alignment: dict | None = None
    strata: dict | None = None
    weighted_graph: dict | None = None
    component_groups: dict | None = None
    degree_bound: dict | None = None
    torsion_bound: dict | None = None
    error: StageError | None = None
    timings: dict[str, float] | None = None

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types; absent fields become None."""
        return {
            "schema": self.schema,
            "digest": self.digest,
            "classification": self.classification,
            "alignment": self.alignment,
            "strata": self.strata,
            "weighted_graph": self.weighted_graph,
            "component_groups": self.component_groups,
            "degree_bound": self.degree_bound,
            "torsion_bound": self.torsion_bound,
            "error": self.error.to_dict() if self.error else None,
            "timings": self.timings,
        }


@dataclasses.dataclass
class Report:
    """Runs every stage of the pipeline on one graph file."""

    graph_path: FilePath
    weights: str = ""
    scope: DegreeBoundScope = DegreeBoundScope.ORIGINAL
    limits: Limits = DEFAULT_LIMITS
    level: PositiveInt | None = None
    degree: PositiveInt = 1
    timings: bool = False

    def __post_init__(self) -> None:
        """Initialize logger."""
        self.log = logging.getLogger(__name__)

    @lru_cache(maxsize=1)
    def _document(self) -> dict:
        return read_document(self.graph_path)

    @lru_cache(maxsize=1)
    def _graph(self) -> LabelledGraph:
        return require_valid(LabelledGraph.from_dict(self._document()))

    @lru_cache(maxsize=1)
    def _weighted_graph(self) -> WeightedGraph:
        g = self._graph()
        return pull_back(g, TraitWeights.parse(self.weights, g.parameters))

    def _validate(self, report: RunReport) -> None:
        canonical = to_canonical_text(self._document())
        report.digest = hashlib.sha256(canonical.encode()).hexdigest()
        self._graph()

    def _classify(self, report: RunReport) -> None:
        report.classification = str(classify(self._graph()))

    def _align(self, report: RunReport) -> None:
        verdict = is_aligned(self._graph())
        report.alignment = verdict.to_dict()
        if not verdict.aligned:
            self.log.warning(f"Graph is not aligned, witness {verdict.witness.pair}")

    def _strata(self, report: RunReport) -> None:
        report.strata = neron_model_exists(
            self._graph(),
            limit=self.limits.strata_parameters,
        ).to_dict()

    def _pullback(self, report: RunReport) -> None:
        report.weighted_graph = self._weighted_graph().summary()

    def _critical(self, report: RunReport) -> None:
        report.component_groups = {
            "critical": critical_group(self._weighted_graph()).to_dict(),
        }

    def _quotient(self, report: RunReport) -> None:
        report.component_groups["quotient"] = quotient_component_group(
            self._weighted_graph(),
        ).to_dict()

    def _degree_bound(self, report: RunReport) -> None:
        report.degree_bound = {
            "scope": self.scope.value,
            "bound": degree_bound(
                self._weighted_graph(),
                self.scope,
                limit=self.limits.coset_order,
                ball_limit=self.limits.degree_ball,
            ),
        }

    def _torsion(self, report: RunReport) -> None:
        if self.level is None:
            return
        report.torsion_bound = graph_torsion_bound(
            self._graph(),
            self.level,
            self.degree,
            limit=self.limits.strata_parameters,
        ).to_dict()

    def _stage(self, name: str) -> Callable[[RunReport], None]:
        return getattr(self, f"_{name}")

    def run(self) -> RunReport:
        """Run the stages in order, stopping at the first one that raises.

        Returns
        -------
        RunReport
            The consolidated report; ``error`` names the failed stage, if any
        """
        report = RunReport(timings={} if self.timings else None)

        for name in STAGES:
            self.log.info(f"Running stage: {name}")
            started = perf_counter()
            try:
                self._stage(name)(report)
            except (ValueError, RuntimeError) as e:
                self.log.warning(f"Stage {name} failed: {e}")
                report.error = StageError(
                    stage=name,
                    error=type(e).__name__,
                    message=str(e),
                    exception=e,
                )
                break
            finally:
                if self.timings:
                    report.timings[name] = round(perf_counter() - started, 6)

        return report
