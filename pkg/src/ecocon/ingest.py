"""NDJSON event-log ingestion: parsing, validation, quarter binning, roles.

The event log is one JSON object per line. A full pass buffers records by
name, then every reference is resolved against the package registry built
from ``package_created`` lines, so creation lines may appear anywhere in
the stream.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import EmptyRange, MalformedLine, UnknownVariant, UnresolvedReference
from .model import (
    ContributionKind,
    DependencyChangeKind,
    DeveloperRegistry,
    PackageRegistry,
    Role,
    TimeWindow,
    parse_time,
    quarter_of,
)

EVENT_VARIANTS = (
    "package_created",
    "manifest_snapshot",
    "dependency_change",
    "contribution",
    "commit",
    "license",
)

LICENSES = ("strong-copyleft", "weak-copyleft", "non-copyleft", "none")


class Contribution(NamedTuple):
    time: int
    dev: int
    pkg: int
    kind: ContributionKind
    cid: str
    role: Role | None  # explicit role from the log, None = derive


class Commit(NamedTuple):
    time: int
    dev: int
    pkg: int


class DepChange(NamedTuple):
    time: int
    client: int
    library: int
    kind: DependencyChangeKind | None  # None = unknown, excluded from congruence


class ManifestSnapshot(NamedTuple):
    time: int
    pkg: int
    deps: dict
    dev_deps: dict


class LicenseEvent(NamedTuple):
    time: int
    pkg: int
    license: str


@dataclass
class EventStore:
    """Immutable, time-ordered view of a validated event log.

    Every list is sorted non-decreasing by time with ties in input order.
    """

    packages: PackageRegistry = field(default_factory=PackageRegistry)
    developers: DeveloperRegistry = field(default_factory=DeveloperRegistry)
    contributions: list[Contribution] = field(default_factory=list)
    commits: list[Commit] = field(default_factory=list)
    dep_changes: list[DepChange] = field(default_factory=list)
    manifests: list[ManifestSnapshot] = field(default_factory=list)
    licenses: list[LicenseEvent] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    study_range: tuple[int, int] | None = None
    first_commit: dict = field(default_factory=dict)  # (dev, pkg) -> earliest time
    _contrib_times: list[int] = field(default_factory=list)

    def freeze(self) -> None:
        for records in (self.contributions, self.commits, self.dep_changes,
                        self.manifests, self.licenses):
            records.sort(key=lambda r: r.time)
        for c in self.commits:
            key = (c.dev, c.pkg)
            if key not in self.first_commit:
                self.first_commit[key] = c.time
        self._contrib_times = [c.time for c in self.contributions]
        self.packages.freeze()
        self.developers.freeze()

    def contributions_between(self, t1: int, t2: int) -> Iterator[Contribution]:
        lo = bisect.bisect_left(self._contrib_times, t1)
        hi = bisect.bisect_right(self._contrib_times, t2)
        for i in range(lo, hi):
            yield self.contributions[i]


def derive_role(dev: int, pkg: int, at: int, store: EventStore) -> Role:
    """Committer iff the developer has a commit to the package strictly before ``at``."""
    first = store.first_commit.get((dev, pkg))
    if first is not None and first < at:
        return Role.COMMITTER
    return Role.SUBMITTER


def resolve_role(contribution: Contribution, store: EventStore) -> Role:
    if contribution.role is not None:
        return contribution.role
    return derive_role(contribution.dev, contribution.pkg, contribution.time, store)


def _decode_line(raw) -> str:
    return raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw


def _iter_lines(reader: Iterable) -> Iterator[tuple[int, int, str]]:
    """Yield (line_no, byte_offset, text) for non-empty lines."""
    offset = 0
    for line_no, raw in enumerate(reader, start=1):
        text = _decode_line(raw)
        stripped = text.strip()
        if stripped:
            yield line_no, offset, stripped
        offset += len(text.encode("utf-8"))
        if not text.endswith("\n"):
            offset += 1


def _required(obj: dict, key: str, line_no: int, offset: int):
    if key not in obj:
        raise MalformedLine(line_no, offset, f"missing field {key!r}")
    return obj[key]


def _parse_ts(obj: dict, line_no: int, offset: int) -> int:
    raw = _required(obj, "time", line_no, offset)
    try:
        return parse_time(raw)
    except (ValueError, TypeError) as exc:
        raise MalformedLine(line_no, offset, f"bad timestamp {raw!r}: {exc}") from exc


def parse_event_stream(reader: Iterable, errors: list | None = None) -> EventStore:
    """Parse an NDJSON event stream into a frozen EventStore.

    With ``errors`` set, problems are collected there and offending records
    skipped; otherwise the first problem raises.
    """

    def report(exc):
        if errors is None:
            raise exc
        errors.append(exc)

    store = EventStore()
    counts = {v: 0 for v in EVENT_VARIANTS}
    # (variant, line_no, offset, time, name-based payload)
    pending: list[tuple] = []
    tmin: int | None = None
    tmax: int | None = None

    for line_no, offset, text in _iter_lines(reader):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            report(MalformedLine(line_no, offset, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            report(MalformedLine(line_no, offset, "line is not a JSON object"))
            continue
        variant = obj.get("event")
        if variant not in EVENT_VARIANTS:
            report(UnknownVariant(line_no, str(variant)))
            continue
        try:
            ts = _parse_ts(obj, line_no, offset)
            if variant == "package_created":
                store.packages.intern(str(_required(obj, "pkg", line_no, offset)), ts)
            elif variant == "manifest_snapshot":
                pkg = str(_required(obj, "pkg", line_no, offset))
                deps = obj.get("deps") or {}
                dev_deps = obj.get("dev_deps") or {}
                if not isinstance(deps, dict) or not isinstance(dev_deps, dict):
                    raise MalformedLine(line_no, offset, "deps/dev_deps must be objects")
                pending.append((variant, line_no, offset, ts, (pkg, deps, dev_deps)))
            elif variant == "dependency_change":
                client = str(_required(obj, "client", line_no, offset))
                library = str(_required(obj, "library", line_no, offset))
                if client == library:
                    raise MalformedLine(line_no, offset, "self-dependency")
                change = _required(obj, "change", line_no, offset)
                if change == "unknown":
                    kind = None
                else:
                    try:
                        kind = DependencyChangeKind(change)
                    except ValueError:
                        raise MalformedLine(line_no, offset,
                                            f"bad change kind {change!r}") from None
                pending.append((variant, line_no, offset, ts, (client, library, kind)))
            elif variant == "contribution":
                dev = str(_required(obj, "dev", line_no, offset))
                pkg = str(_required(obj, "pkg", line_no, offset))
                try:
                    kind = ContributionKind(_required(obj, "kind", line_no, offset))
                except ValueError:
                    raise MalformedLine(line_no, offset, "kind must be pr or issue") from None
                cid = str(_required(obj, "id", line_no, offset))
                role = None
                if "role" in obj and obj["role"] is not None:
                    try:
                        role = Role(obj["role"])
                    except ValueError:
                        raise MalformedLine(line_no, offset,
                                            f"bad role {obj['role']!r}") from None
                pending.append((variant, line_no, offset, ts, (dev, pkg, kind, cid, role)))
            elif variant == "commit":
                dev = str(_required(obj, "dev", line_no, offset))
                pkg = str(_required(obj, "pkg", line_no, offset))
                pending.append((variant, line_no, offset, ts, (dev, pkg)))
            elif variant == "license":
                pkg = str(_required(obj, "pkg", line_no, offset))
                lic = _required(obj, "license", line_no, offset)
                if lic not in LICENSES:
                    raise MalformedLine(line_no, offset, f"bad license {lic!r}")
                pending.append((variant, line_no, offset, ts, (pkg, lic)))
        except (MalformedLine, UnknownVariant, UnresolvedReference) as exc:
            report(exc)
            continue
        except Exception as exc:  # conflicting creation time, etc.
            report(MalformedLine(line_no, offset, str(exc)))
            continue
        counts[variant] += 1
        tmin = ts if tmin is None else min(tmin, ts)
        tmax = ts if tmax is None else max(tmax, ts)

    def resolve(name: str, line_no: int, ts: int) -> int:
        idx = store.packages.lookup(name)
        if idx is None:
            raise UnresolvedReference(line_no, name)
        if ts < store.packages.created[idx]:
            raise MalformedLine(line_no, 0,
                                f"event precedes creation of package {name!r}")
        return idx

    for variant, line_no, offset, ts, payload in pending:
        try:
            if variant == "manifest_snapshot":
                pkg, deps, dev_deps = payload
                store.manifests.append(
                    ManifestSnapshot(ts, resolve(pkg, line_no, ts), deps, dev_deps))
            elif variant == "dependency_change":
                client, library, kind = payload
                store.dep_changes.append(
                    DepChange(ts, resolve(client, line_no, ts),
                              resolve(library, line_no, ts), kind))
            elif variant == "contribution":
                dev, pkg, kind, cid, role = payload
                store.contributions.append(
                    Contribution(ts, store.developers.intern(dev),
                                 resolve(pkg, line_no, ts), kind, cid, role))
            elif variant == "commit":
                dev, pkg = payload
                store.commits.append(
                    Commit(ts, store.developers.intern(dev), resolve(pkg, line_no, ts)))
            elif variant == "license":
                pkg, lic = payload
                store.licenses.append(LicenseEvent(ts, resolve(pkg, line_no, ts), lic))
        except (MalformedLine, UnresolvedReference) as exc:
            counts[variant] -= 1
            report(exc)

    store.counts = counts
    if tmin is not None:
        store.study_range = (tmin, tmax)
    store.freeze()
    return store


def bin_quarters(study_range: tuple[int, int] | None) -> list[TimeWindow]:
    """Calendar quarters covering the range, first to last inclusive."""
    if study_range is None:
        raise EmptyRange("no events, nothing to bin")
    start, end = study_range
    if start > end:
        raise EmptyRange("range start after range end")
    year, q = quarter_of(start)
    last_year, last_q = quarter_of(end)
    windows = []
    while (year, q) <= (last_year, last_q):
        windows.append(TimeWindow.quarter(year, q))
        q += 1
        if q > 4:
            year, q = year + 1, 1
    return windows
