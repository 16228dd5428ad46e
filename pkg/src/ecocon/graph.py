"""Window-scoped temporal graphs: creation filtering, carry-over, pair extraction.

A window's dependency state is the latest change event at or before the
window end (carry-over), restricted to packages created strictly before
the window start. Contribution edges are the window's PRs and issues,
each resolved to a committer/submitter role.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .ingest import EventStore, resolve_role
from .model import ContributionKind, ContributionType, DependencyChangeKind, Role, TimeWindow


class ContribEdge(NamedTuple):
    dev: int
    pkg: int
    role: Role
    kind: ContributionKind
    time: int
    cid: str


@dataclass(frozen=True)
class ContributionPair:
    client: int
    library: int
    type: ContributionType
    kind: ContributionKind
    witnesses: tuple  # (dev, (client contribution ids), (library contribution ids))


@dataclass
class TemporalGraph:
    window: TimeWindow
    packages: set[int]
    dep_edges: dict  # (client, library) -> DependencyChangeKind
    contrib_edges: list[ContribEdge]
    _by_role: dict | None = field(default=None, repr=False)

    def contributors_by_role(self) -> dict:
        """(kind, role) -> {pkg -> set of devs} over this window's contributions."""
        if self._by_role is None:
            index: dict = {}
            for edge in self.contrib_edges:
                pkgs = index.setdefault((edge.kind, edge.role), {})
                pkgs.setdefault(edge.pkg, set()).add(edge.dev)
            self._by_role = index
        return self._by_role


def build_window_graph(store: EventStore, window: TimeWindow) -> TemporalGraph:
    created = store.packages.created
    packages = {i for i in range(len(created)) if created[i] < window.t1}

    # latest change at or before t2 wins; events are time-sorted with
    # input-order ties, so a plain overwrite implements carry-over
    state: dict = {}
    for change in store.dep_changes:
        if change.time > window.t2:
            break
        state[(change.client, change.library)] = change.kind
    dep_edges = {
        pair: kind
        for pair, kind in state.items()
        if kind is not None and pair[0] in packages and pair[1] in packages
    }

    contrib_edges = [
        ContribEdge(c.dev, c.pkg, resolve_role(c, store), c.kind, c.time, c.cid)
        for c in store.contributions_between(window.t1, window.t2)
        if c.pkg in packages
    ]
    return TemporalGraph(window, packages, dep_edges, contrib_edges)


def contribution_pairs(
    graph: TemporalGraph,
    type: ContributionType,
    kind: ContributionKind,
) -> set[tuple[int, int]]:
    """Dependency pairs witnessed by a developer contributing to both ends.

    A pair (client, library) qualifies when one developer made a ``kind``
    contribution to the client under the type's client role and a ``kind``
    contribution to the library under the type's library role, both within
    the window.
    """
    client_role, library_role = type.roles
    by_role = graph.contributors_by_role()
    client_devs = by_role.get((kind, client_role), {})
    library_devs = by_role.get((kind, library_role), {})
    if not client_devs or not library_devs:
        return set()
    pairs = set()
    for client, library in graph.dep_edges:
        devs_c = client_devs.get(client)
        if not devs_c:
            continue
        devs_l = library_devs.get(library)
        if devs_l and not devs_c.isdisjoint(devs_l):
            pairs.add((client, library))
    return pairs


def contribution_pair_witnesses(
    graph: TemporalGraph,
    type: ContributionType,
    kind: ContributionKind,
) -> list[ContributionPair]:
    """Like contribution_pairs, but with the witnessing developers and ids."""
    client_role, library_role = type.roles
    contribs: dict = {}
    for edge in graph.contrib_edges:
        if edge.kind is kind:
            contribs.setdefault((edge.role, edge.pkg, edge.dev), []).append(edge.cid)
    results = []
    for client, library in sorted(contribution_pairs(graph, type, kind)):
        witnesses = []
        for (role, pkg, dev), cids in contribs.items():
            if role is client_role and pkg == client:
                lib_cids = contribs.get((library_role, library, dev))
                if lib_cids:
                    witnesses.append((dev, tuple(cids), tuple(lib_cids)))
        results.append(ContributionPair(client, library, type, kind,
                                        tuple(sorted(witnesses))))
    return results
