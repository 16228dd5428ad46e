import json

import pytest

from ecocon.ingest import parse_event_stream


def event_lines(events):
    return [json.dumps(e, sort_keys=True) for e in events]


# Three packages i, j, k with dependencies i->j, i->k, j->k (all is-added).
# dev.x has prior commits to i, j, k; dev.y has a prior commit to i only.
# Q4 2015: dev.x contributes to i and j.
# Q1 2016: dev.x contributes to i and k (committer to both),
#          dev.y contributes to i (committer) and j (submitter).
WORKED_EXAMPLE_EVENTS = [
    {"event": "package_created", "pkg": "pkg.i", "time": "2015-09-01T00:00:00Z"},
    {"event": "package_created", "pkg": "pkg.j", "time": "2015-09-01T00:00:00Z"},
    {"event": "package_created", "pkg": "pkg.k", "time": "2015-09-01T00:00:00Z"},
    {"event": "commit", "dev": "dev.x", "pkg": "pkg.i", "time": "2015-09-10T00:00:00Z"},
    {"event": "commit", "dev": "dev.x", "pkg": "pkg.j", "time": "2015-09-10T00:00:00Z"},
    {"event": "dependency_change", "client": "pkg.i", "library": "pkg.j",
     "change": "is-added", "time": "2015-10-10T00:00:00Z"},
    {"event": "dependency_change", "client": "pkg.i", "library": "pkg.k",
     "change": "is-added", "time": "2015-10-10T00:00:00Z"},
    {"event": "dependency_change", "client": "pkg.j", "library": "pkg.k",
     "change": "is-added", "time": "2015-10-10T00:00:00Z"},
    {"event": "contribution", "dev": "dev.x", "pkg": "pkg.i", "kind": "pr",
     "id": "a1", "time": "2015-11-01T00:00:00Z"},
    {"event": "contribution", "dev": "dev.x", "pkg": "pkg.j", "kind": "pr",
     "id": "a2", "time": "2015-11-02T00:00:00Z"},
    {"event": "commit", "dev": "dev.x", "pkg": "pkg.k", "time": "2015-12-20T00:00:00Z"},
    {"event": "commit", "dev": "dev.y", "pkg": "pkg.i", "time": "2015-12-25T00:00:00Z"},
    {"event": "contribution", "dev": "dev.x", "pkg": "pkg.i", "kind": "pr",
     "id": "b1", "time": "2016-01-10T00:00:00Z"},
    {"event": "contribution", "dev": "dev.x", "pkg": "pkg.k", "kind": "pr",
     "id": "b2", "time": "2016-01-11T00:00:00Z"},
    {"event": "contribution", "dev": "dev.y", "pkg": "pkg.i", "kind": "pr",
     "id": "b3", "time": "2016-02-01T00:00:00Z"},
    {"event": "contribution", "dev": "dev.y", "pkg": "pkg.j", "kind": "pr",
     "id": "b4", "time": "2016-02-02T00:00:00Z"},
]


@pytest.fixture
def worked_example_lines():
    return event_lines(WORKED_EXAMPLE_EVENTS)


@pytest.fixture
def worked_example_store(worked_example_lines):
    return parse_event_stream(worked_example_lines)
