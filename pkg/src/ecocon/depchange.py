"""Manifest diffing: version-constraint floors and dependency-change classification.

Constraints are ordered by their "floor" — the minimal version that
satisfies them. Anything that does not parse to a floor (ranges with
unions, git/file/url specifiers, bare wildcards) compares as Unknown:
the change is counted but never enters a congruence matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SelfDependency
from .model import DependencyChangeKind

_VERSION_RE = re.compile(
    r"(?P<major>\d+|[xX*])"
    r"(?:\.(?P<minor>\d+|[xX*]))?"
    r"(?:\.(?P<patch>\d+|[xX*]))?"
    r"(?:-(?P<pre>[0-9A-Za-z.-]+))?"
    r"(?:\+[0-9A-Za-z.-]+)?$"  # build metadata, ignored
)

# orderable floor: (major, minor, patch, is_release, prerelease_ids)
Floor = tuple


@dataclass(frozen=True)
class VersionConstraint:
    raw: str
    floor: Floor | None  # None = Unknown


def _pre_key(pre: str) -> tuple:
    # numeric identifiers sort below alphanumeric ones, per semver precedence
    ids = []
    for part in pre.split("."):
        if part.isdigit():
            ids.append((0, int(part), ""))
        else:
            ids.append((1, 0, part))
    return tuple(ids)


def _parse_version(text: str) -> Floor | None:
    m = _VERSION_RE.match(text)
    if not m:
        return None
    parts = []
    wildcard_seen = False
    for name in ("major", "minor", "patch"):
        value = m.group(name)
        if value is None or value in ("x", "X", "*"):
            wildcard_seen = True
            parts.append(0)
        elif wildcard_seen:
            return None  # e.g. "1.x.2"
        else:
            parts.append(int(value))
    pre = m.group("pre")
    if pre is not None and wildcard_seen:
        return None
    if pre is None:
        return (*parts, 1, ())
    return (*parts, 0, _pre_key(pre))


def normalize_constraint(raw: str) -> VersionConstraint:
    """Normalize an npm-style constraint to its minimal satisfying version."""
    text = raw.strip()
    if (
        not text
        or text in ("*", "latest")
        or "||" in text
        or "://" in text
        or text.startswith(("git", "file:", "link:", "http", "npm:"))
    ):
        return VersionConstraint(raw, None)
    # ranges like ">=1.2.3 <2.0.0" floor at the first clause; hyphen ranges
    # and other compound forms are not in the normalization rules
    if " - " in text:
        return VersionConstraint(raw, None)
    token = text.split()[0]
    for prefix in (">=", "^", "~", "="):
        if token.startswith(prefix):
            token = token[len(prefix):].strip()
            break
    else:
        if token.startswith(("<", ">")):
            return VersionConstraint(raw, None)
    if token.startswith("v"):
        token = token[1:]
    return VersionConstraint(raw, _parse_version(token))


@dataclass(frozen=True)
class DependencyDelta:
    """One classified change of a client manifest against a library.

    ``kind`` is None for Unknown changes (unparseable constraints that
    differ textually); those are counted but excluded from congruence.
    """

    client: str
    library: str
    kind: DependencyChangeKind | None
    time: int


def merge_manifest(deps: dict | None, dev_deps: dict | None) -> dict:
    """Runtime and development dependencies as one map; runtime wins."""
    merged = dict(dev_deps or {})
    merged.update(deps or {})
    return merged


def classify_delta(
    prev: dict | None,
    next: dict,
    time: int,
    client: str,
) -> list[DependencyDelta]:
    """Diff two merged manifest maps into classified dependency deltas."""
    prev = prev or {}
    if client in prev or client in next:
        raise SelfDependency(f"package {client!r} lists itself as a dependency")
    deltas = []
    for library in sorted(set(prev) | set(next)):
        before = prev.get(library)
        after = next.get(library)
        if before is None:
            kind = DependencyChangeKind.ADDED
        elif after is None:
            kind = DependencyChangeKind.REMOVED
        else:
            f1 = normalize_constraint(str(before)).floor
            f2 = normalize_constraint(str(after)).floor
            if f1 is not None and f2 is not None:
                if f2 > f1:
                    kind = DependencyChangeKind.UPGRADED
                elif f2 < f1:
                    kind = DependencyChangeKind.DOWNGRADED
                else:
                    continue  # equal floors: no change
            elif str(before) != str(after):
                kind = None  # Unknown
            else:
                continue
        deltas.append(DependencyDelta(client, library, kind, time))
    return deltas
