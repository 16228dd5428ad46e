"""Dormancy detection, control metrics, and the survival-table export.

A package is dormant at the first quarter q where its mean commits over
q..q+3 drops below one. Packages whose first commit leaves fewer than
four quarters of lookahead are excluded: their history cannot decide
dormancy either way. The export is one row per package-quarter, right
censored, ready for an external proportional-hazards fit.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .congruence import ALL_CELLS, CongruenceReport, format_score
from .errors import MissingWindowReport
from .ingest import EventStore
from .model import ContributionKind, TimeWindow

DORMANCY_SPAN = 4  # consecutive quarters


@dataclass
class ActivitySeries:
    package: int
    start: int  # global index of the first full quarter of existence
    counts: list  # commits per quarter, aligned to windows[start:]


@dataclass(frozen=True)
class ControlMetrics:
    commits: int
    contributors: int
    core_team: int
    issues: int
    nondev_reporters: int
    license: str


@dataclass
class SurvivalRow:
    package: int
    window: str
    dormant_event: bool
    congruence: dict = field(default_factory=dict)  # CellKey -> CellScore
    controls: ControlMetrics | None = None


def dormant_since(counts) -> int | None:
    """First index q with mean(counts[q..q+3]) < 1, needing full lookahead."""
    for q in range(len(counts) - DORMANCY_SPAN + 1):
        if sum(counts[q:q + DORMANCY_SPAN]) < DORMANCY_SPAN:
            return q
    return None


def build_activity_series(store: EventStore, windows: list[TimeWindow]) -> dict:
    """package -> ActivitySeries over its full quarters of existence."""
    per_window: dict = {}
    times = [c.time for c in store.commits]
    for w_idx, window in enumerate(windows):
        lo = bisect.bisect_left(times, window.t1)
        hi = bisect.bisect_right(times, window.t2)
        for i in range(lo, hi):
            commit = store.commits[i]
            key = (commit.pkg, w_idx)
            per_window[key] = per_window.get(key, 0) + 1

    series = {}
    for pkg, created in enumerate(store.packages.created):
        start = next((i for i, w in enumerate(windows) if created < w.t1), None)
        if start is None:
            continue
        counts = [per_window.get((pkg, i), 0) for i in range(start, len(windows))]
        series[pkg] = ActivitySeries(pkg, start, counts)
    return series


def control_metrics(store: EventStore, pkg: int, window: TimeWindow) -> ControlMetrics:
    times = [c.time for c in store.commits]
    lo = bisect.bisect_left(times, window.t1)
    hi = bisect.bisect_right(times, window.t2)
    author_counts: dict = {}
    for i in range(lo, hi):
        commit = store.commits[i]
        if commit.pkg == pkg:
            author_counts[commit.dev] = author_counts.get(commit.dev, 0) + 1

    n_commits = sum(author_counts.values())
    core_team = 0
    if n_commits:
        covered = 0
        ordered = sorted(author_counts.items(),
                         key=lambda item: (-item[1], store.developers.userids[item[0]]))
        for _, count in ordered:
            covered += count
            core_team += 1
            if covered * 10 >= n_commits * 9:  # >= 90% coverage
                break

    issues = 0
    reporters = set()
    for c in store.contributions_between(window.t1, window.t2):
        if c.pkg == pkg and c.kind is ContributionKind.ISSUE:
            issues += 1
            reporters.add(c.dev)
    nondev = sum(
        1 for dev in reporters
        if store.first_commit.get((dev, pkg), window.t2 + 1) > window.t2
    )

    license = "none"
    for event in store.licenses:
        if event.time > window.t2:
            break
        if event.pkg == pkg:
            license = event.license
    return ControlMetrics(n_commits, len(author_counts), core_team,
                          issues, nondev, license)


def survival_export(
    store: EventStore,
    windows: list[TimeWindow],
    reports: list[CongruenceReport],
) -> list[SurvivalRow]:
    """One row per package-quarter up to the dormant quarter (or study end)."""
    if len(reports) != len(windows) or any(
        r.window.label != w.label for r, w in zip(reports, windows)
    ):
        raise MissingWindowReport("reports must cover every study quarter in order")

    first_commit_quarter: dict = {}
    for (dev, pkg), time in store.first_commit.items():
        q = next((i for i, w in enumerate(windows) if w.contains(time)), None)
        if q is not None:
            prev = first_commit_quarter.get(pkg)
            if prev is None or q < prev:
                first_commit_quarter[pkg] = q

    series = build_activity_series(store, windows)
    rows = []
    for pkg in range(len(store.packages)):
        fc = first_commit_quarter.get(pkg)
        if fc is None or len(windows) - fc < DORMANCY_SPAN:
            continue  # not enough lookahead from the first commit
        activity = series.get(pkg)
        if activity is None:
            continue
        dormant_local = dormant_since(activity.counts)
        if dormant_local is None:
            last = len(windows) - 1
            dormant_global = None
        else:
            dormant_global = activity.start + dormant_local
            last = dormant_global
        for q in range(activity.start, last + 1):
            rows.append(SurvivalRow(
                package=pkg,
                window=windows[q].label,
                dormant_event=(q == dormant_global),
                congruence=reports[q].package_scores.get(pkg, {}),
                controls=control_metrics(store, pkg, windows[q]),
            ))
    return rows


def survival_header() -> list[str]:
    cols = ["package", "window", "dormant"]
    cols += [
        f"{change.value}_{ctype.value}_{kind.value}"
        for change, ctype, kind in ALL_CELLS
    ]
    cols += ["commits", "contributors", "core_team", "issues",
             "nondev_reporters", "license"]
    return cols


def survival_row_values(row: SurvivalRow, package_name: str) -> list[str]:
    values = [package_name, row.window, "true" if row.dormant_event else "false"]
    for cell in ALL_CELLS:
        score = row.congruence.get(cell)
        values.append(format_score(score.score) if score is not None else "")
    c = row.controls
    values += [str(c.commits), str(c.contributors), str(c.core_team),
               str(c.issues), str(c.nondev_reporters), c.license]
    return values
