"""Binary relations and dependency-contribution congruence scoring.

Relations are sparse sets of (client, library) index pairs; congruence is
the exact rational |C_D and C_E| / |C_D|, Undefined (None) when the
denominator is zero. A window report carries all 32 ecosystem cells
(4 change kinds x 4 contribution types x 2 contribution kinds) plus
per-package scores for every package with at least one incident
dependency of the cell's change kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, IndexOutOfRange
from .graph import TemporalGraph, contribution_pairs
from .model import ContributionKind, ContributionType, DependencyChangeKind, TimeWindow

CellKey = tuple  # (DependencyChangeKind, ContributionType, ContributionKind)

ALL_CELLS: list[CellKey] = [
    (change, ctype, kind)
    for change in DependencyChangeKind
    for ctype in ContributionType
    for kind in ContributionKind
]


@dataclass(frozen=True)
class BinaryRelation:
    """Sparse boolean package-pair relation of a fixed dimension."""

    pairs: frozenset
    dimension: int

    def __post_init__(self):
        for i, j in self.pairs:
            if i == j:
                raise ValueError(f"self-pair ({i}, {i}) not allowed")
            if not (0 <= i < self.dimension and 0 <= j < self.dimension):
                raise IndexOutOfRange(f"pair ({i}, {j}) outside dimension {self.dimension}")

    @classmethod
    def from_pairs(cls, pairs, dimension: int) -> "BinaryRelation":
        return cls(frozenset(pairs), dimension)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class CellScore:
    numerator: int
    denominator: int

    @property
    def score(self) -> Fraction | None:
        if self.denominator == 0:
            return None
        return Fraction(self.numerator, self.denominator)


def build_dependency_relation(
    graph: TemporalGraph, change: DependencyChangeKind
) -> BinaryRelation:
    pairs = {pair for pair, kind in graph.dep_edges.items() if kind is change}
    return BinaryRelation.from_pairs(pairs, _dimension(graph))


def build_contribution_relation(
    graph: TemporalGraph, type: ContributionType, kind: ContributionKind
) -> BinaryRelation:
    return BinaryRelation.from_pairs(
        contribution_pairs(graph, type, kind), _dimension(graph))


def _dimension(graph: TemporalGraph) -> int:
    # edges only ever touch filtered packages, so this bounds every index
    return max(graph.packages, default=-1) + 1


def ecosystem_congruence(cd: BinaryRelation, ce: BinaryRelation) -> Fraction | None:
    """|C_D and C_E| / |C_D|; Undefined (None) when C_D is empty."""
    if cd.dimension != ce.dimension:
        raise DimensionMismatch(f"{cd.dimension} != {ce.dimension}")
    if not cd.pairs:
        return None
    return Fraction(len(cd.pairs & ce.pairs), len(cd.pairs))


def package_congruence(
    cd: BinaryRelation, ce: BinaryRelation, p: int
) -> Fraction | None:
    """Row-plus-column congruence of one package; Undefined without incident deps."""
    if cd.dimension != ce.dimension:
        raise DimensionMismatch(f"{cd.dimension} != {ce.dimension}")
    if not (0 <= p < cd.dimension):
        raise IndexOutOfRange(f"package {p} outside dimension {cd.dimension}")
    aligned = cd.pairs & ce.pairs
    denominator = sum(1 for pair in cd.pairs if p in pair)
    if denominator == 0:
        return None
    numerator = sum(1 for pair in aligned if p in pair)
    return Fraction(numerator, denominator)


@dataclass
class CongruenceReport:
    window: TimeWindow
    cells: dict = field(default_factory=dict)  # CellKey -> CellScore
    package_scores: dict = field(default_factory=dict)  # pkg -> {CellKey -> CellScore}


def congruence_report(graph: TemporalGraph) -> CongruenceReport:
    """All 32 ecosystem cells plus per-package cells for one window."""
    report = CongruenceReport(graph.window)

    cd_pairs = {change: set() for change in DependencyChangeKind}
    for pair, kind in graph.dep_edges.items():
        cd_pairs[kind].add(pair)
    ce_pairs = {
        (ctype, kind): contribution_pairs(graph, ctype, kind)
        for ctype in ContributionType
        for kind in ContributionKind
    }

    # incident-dependency counts per package, one pass per change kind;
    # the denominator is shared by the 8 cells of that kind
    incident: dict = {change: {} for change in DependencyChangeKind}
    for change, pairs in cd_pairs.items():
        counts = incident[change]
        for c, l in pairs:
            counts[c] = counts.get(c, 0) + 1
            counts[l] = counts.get(l, 0) + 1

    pkg_cells: dict = {}
    for change, ctype, kind in ALL_CELLS:
        cd = cd_pairs[change]
        aligned = cd & ce_pairs[(ctype, kind)]
        report.cells[(change, ctype, kind)] = CellScore(len(aligned), len(cd))

        numerators: dict = {}
        for c, l in aligned:
            numerators[c] = numerators.get(c, 0) + 1
            numerators[l] = numerators.get(l, 0) + 1
        for pkg, den in incident[change].items():
            pkg_cells.setdefault(pkg, {})[(change, ctype, kind)] = CellScore(
                numerators.get(pkg, 0), den)

    report.package_scores = pkg_cells
    return report


def format_score(score: Fraction | None) -> str:
    """Display form: 3 decimal places, empty for Undefined."""
    if score is None:
        return ""
    return f"{float(score):.3f}"
