"""Combinatorics of Néron models of jacobians of nodal curves.

Labelled dual graphs, their specializations, the alignment criterion for
existence of a Néron model, component groups and degree bounds over traits,
and exact uniform torsion bounds.

Notes
-----
Usable as a library or through the ``aligned-graphs`` command.

"""


from .alignment import is_aligned, neron_model_exists
from .graph import GraphClass, LabelledGraph, classify, specialize
from .labels import Label, ParameterSet
from .nmodel import TraitWeights, WeightedGraph, pull_back
from .report import Report

__all__ = [
    "alignment",
    "cli",
    "configuration",
    "graph",
    "labels",
    "lattice",
    "nmodel",
    "report",
    "torsion",
    "validation",
    "GraphClass",
    "Label",
    "LabelledGraph",
    "ParameterSet",
    "Report",
    "TraitWeights",
    "WeightedGraph",
    "classify",
    "is_aligned",
    "neron_model_exists",
    "pull_back",
    "specialize",
]
