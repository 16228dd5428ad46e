"""Shared domain types: enums, time windows, and identifier registries.

Packages and developers are interned to dense integer indices so that the
dependency and contribution relations can be stored as sets of index pairs.
All timestamps are UTC at second precision, stored as epoch seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .errors import ConflictingCreationTime


class DependencyChangeKind(Enum):
    ADDED = "is-added"
    REMOVED = "is-removed"
    UPGRADED = "is-upgraded"
    DOWNGRADED = "is-downgraded"


class Role(Enum):
    COMMITTER = "committer"
    SUBMITTER = "submitter"


class ContributionKind(Enum):
    PR = "pr"
    ISSUE = "issue"


class ContributionType(Enum):
    CLI_LIB_MAINTAIN = "cli-lib-maintain"
    CLI_MAINTAIN = "cli-maintain"
    LIB_MAINTAIN = "lib-maintain"
    NON_MAINTAIN = "non-maintain"

    @property
    def roles(self) -> tuple[Role, Role]:
        """The (client-role, library-role) pair that witnesses this type."""
        return _TYPE_ROLES[self]


_TYPE_ROLES = {
    ContributionType.CLI_LIB_MAINTAIN: (Role.COMMITTER, Role.COMMITTER),
    ContributionType.CLI_MAINTAIN: (Role.COMMITTER, Role.SUBMITTER),
    ContributionType.LIB_MAINTAIN: (Role.SUBMITTER, Role.COMMITTER),
    ContributionType.NON_MAINTAIN: (Role.SUBMITTER, Role.SUBMITTER),
}

LICENSE_KINDS = ("strong-copyleft", "weak-copyleft", "non-copyleft", "none")


def parse_time(text: str) -> int:
    """Parse an RFC 3339 UTC timestamp to epoch seconds."""
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no timezone")
    return int(dt.timestamp())


def format_time(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def quarter_of(ts: int) -> tuple[int, int]:
    """(year, quarter 1..4) of an epoch-second timestamp."""
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    return dt.year, (dt.month - 1) // 3 + 1


@dataclass(frozen=True)
class TimeWindow:
    """A closed [t1, t2] window at second granularity."""

    t1: int
    t2: int
    label: str

    def __post_init__(self):
        if self.t1 >= self.t2:
            raise ValueError(f"window {self.label}: t1 must precede t2")

    def contains(self, ts: int) -> bool:
        return self.t1 <= ts <= self.t2

    @classmethod
    def quarter(cls, year: int, q: int) -> "TimeWindow":
        if not 1 <= q <= 4:
            raise ValueError(f"quarter must be 1..4, got {q}")
        start = datetime(year, 3 * (q - 1) + 1, 1, tzinfo=timezone.utc)
        if q == 4:
            end = datetime(year + 1, 1, 1, tzinfo=timezone.utc)
        else:
            end = datetime(year, 3 * q + 1, 1, tzinfo=timezone.utc)
        # closed interval: t2 is the last second of the quarter
        return cls(int(start.timestamp()), int(end.timestamp()) - 1, f"{year}Q{q}")

    @classmethod
    def from_label(cls, label: str) -> "TimeWindow":
        year, _, q = label.partition("Q")
        return cls.quarter(int(year), int(q))


@dataclass(frozen=True)
class PackageNode:
    name: str
    created_at: int


@dataclass(frozen=True)
class DeveloperNode:
    userid: str


@dataclass
class PackageRegistry:
    """Interns package names to dense indices 0..n-1."""

    names: list[str] = field(default_factory=list)
    created: list[int] = field(default_factory=list)
    _index: dict[str, int] = field(default_factory=dict)
    _frozen: bool = False

    def intern(self, name: str, created_at: int) -> int:
        if not name:
            raise ValueError("package name must be non-empty")
        idx = self._index.get(name)
        if idx is not None:
            if self.created[idx] != created_at:
                raise ConflictingCreationTime(
                    f"package {name!r} registered with creation times "
                    f"{format_time(self.created[idx])} and {format_time(created_at)}"
                )
            return idx
        if self._frozen:
            raise RuntimeError("registry is frozen")
        idx = len(self.names)
        self.names.append(name)
        self.created.append(created_at)
        self._index[name] = idx
        return idx

    def lookup(self, name: str) -> int | None:
        return self._index.get(name)

    def node(self, idx: int) -> PackageNode:
        return PackageNode(self.names[idx], self.created[idx])

    def freeze(self) -> None:
        self._frozen = True

    def __len__(self) -> int:
        return len(self.names)


@dataclass
class DeveloperRegistry:
    userids: list[str] = field(default_factory=list)
    _index: dict[str, int] = field(default_factory=dict)
    _frozen: bool = False

    def intern(self, userid: str) -> int:
        if not userid:
            raise ValueError("developer userid must be non-empty")
        idx = self._index.get(userid)
        if idx is not None:
            return idx
        if self._frozen:
            raise RuntimeError("registry is frozen")
        idx = len(self.userids)
        self.userids.append(userid)
        self._index[userid] = idx
        return idx

    def lookup(self, userid: str) -> int | None:
        return self._index.get(userid)

    def freeze(self) -> None:
        self._frozen = True

    def __len__(self) -> int:
        return len(self.userids)
