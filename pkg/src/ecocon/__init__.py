"""Dependency-contribution congruence analytics for package ecosystems."""

from .congruence import (
    BinaryRelation,
    CellScore,
    CongruenceReport,
    build_contribution_relation,
    build_dependency_relation,
    congruence_report,
    ecosystem_congruence,
    package_congruence,
)
from .graph import TemporalGraph, build_window_graph, contribution_pairs
from .ingest import EventStore, bin_quarters, derive_role, parse_event_stream
from .model import (
    ContributionKind,
    ContributionType,
    DependencyChangeKind,
    Role,
    TimeWindow,
)

__all__ = [
    "BinaryRelation",
    "CellScore",
    "CongruenceReport",
    "ContributionKind",
    "ContributionType",
    "DependencyChangeKind",
    "EventStore",
    "Role",
    "TemporalGraph",
    "TimeWindow",
    "bin_quarters",
    "build_contribution_relation",
    "build_dependency_relation",
    "build_window_graph",
    "congruence_report",
    "contribution_pairs",
    "derive_role",
    "ecosystem_congruence",
    "package_congruence",
    "parse_event_stream",
]

__version__ = "0.1.0"
