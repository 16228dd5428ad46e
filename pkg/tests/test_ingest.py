import json

import pytest
from hypothesis import given, strategies as st

from ecocon.errors import EmptyRange, MalformedLine, UnknownVariant, UnresolvedReference
from ecocon.ingest import bin_quarters, derive_role, parse_event_stream
from ecocon.model import Role, parse_time

from conftest import event_lines


MINIMAL = event_lines([
    {"event": "package_created", "pkg": "a", "time": "2016-01-01T00:00:00Z"},
    {"event": "contribution", "dev": "d", "pkg": "a", "kind": "pr",
     "id": "c1", "time": "2016-02-01T00:00:00Z"},
])


def test_parse_minimal_stream():
    store = parse_event_stream(MINIMAL)
    assert len(store.packages) == 1
    assert len(store.developers) == 1
    assert len(store.contributions) == 1
    assert store.counts["package_created"] == 1
    assert store.counts["contribution"] == 1


def test_parse_empty_stream():
    store = parse_event_stream([])
    assert store.study_range is None
    assert sum(store.counts.values()) == 0


def test_unknown_variant_raises():
    with pytest.raises(UnknownVariant):
        parse_event_stream(['{"event":"bogus"}'])


def test_malformed_json_carries_line_and_offset():
    lines = MINIMAL + ["{not json"]
    with pytest.raises(MalformedLine) as info:
        parse_event_stream(lines)
    assert info.value.line_no == 3
    expected_offset = sum(len(l.encode()) + 1 for l in MINIMAL)
    assert info.value.byte_offset == expected_offset


def test_unresolved_reference():
    lines = event_lines([
        {"event": "commit", "dev": "d", "pkg": "ghost", "time": "2016-01-01T00:00:00Z"},
    ])
    with pytest.raises(UnresolvedReference):
        parse_event_stream(lines)


def test_creation_line_may_come_after_reference():
    lines = event_lines([
        {"event": "commit", "dev": "d", "pkg": "a", "time": "2016-02-01T00:00:00Z"},
        {"event": "package_created", "pkg": "a", "time": "2016-01-01T00:00:00Z"},
    ])
    store = parse_event_stream(lines)
    assert len(store.commits) == 1


def test_event_before_creation_rejected():
    lines = event_lines([
        {"event": "package_created", "pkg": "a", "time": "2016-06-01T00:00:00Z"},
        {"event": "commit", "dev": "d", "pkg": "a", "time": "2016-01-01T00:00:00Z"},
    ])
    with pytest.raises(MalformedLine):
        parse_event_stream(lines)


def test_error_collection_mode():
    errors = []
    store = parse_event_stream(['{"event":"bogus"}'] + MINIMAL, errors=errors)
    assert len(errors) == 1
    assert len(store.contributions) == 1


def test_parse_accepts_byte_lines():
    store = parse_event_stream([l.encode() for l in MINIMAL])
    assert len(store.contributions) == 1


def test_parse_is_deterministic_including_ties():
    events = [
        {"event": "package_created", "pkg": "a", "time": "2016-01-01T00:00:00Z"},
        {"event": "contribution", "dev": "d1", "pkg": "a", "kind": "pr",
         "id": "c1", "time": "2016-02-01T00:00:00Z"},
        {"event": "contribution", "dev": "d2", "pkg": "a", "kind": "pr",
         "id": "c2", "time": "2016-02-01T00:00:00Z"},
    ]
    s1 = parse_event_stream(event_lines(events))
    s2 = parse_event_stream(event_lines(events))
    assert s1.contributions == s2.contributions
    assert [c.cid for c in s1.contributions] == ["c1", "c2"]


def test_bin_quarters_mid_range():
    windows = bin_quarters((parse_time("2016-01-15T00:00:00Z"),
                            parse_time("2016-05-01T00:00:00Z")))
    assert [w.label for w in windows] == ["2016Q1", "2016Q2"]


def test_bin_quarters_full_year():
    windows = bin_quarters((parse_time("2014-01-01T00:00:00Z"),
                            parse_time("2014-12-31T00:00:00Z")))
    assert [w.label for w in windows] == ["2014Q1", "2014Q2", "2014Q3", "2014Q4"]


def test_bin_quarters_boundary():
    windows = bin_quarters((parse_time("2015-12-31T00:00:00Z"),
                            parse_time("2016-01-01T00:00:00Z")))
    assert [w.label for w in windows] == ["2015Q4", "2016Q1"]


def test_bin_quarters_empty_range():
    with pytest.raises(EmptyRange):
        bin_quarters(None)


def _role_store(commit_time):
    return parse_event_stream(event_lines([
        {"event": "package_created", "pkg": "a", "time": "2015-01-01T00:00:00Z"},
        {"event": "commit", "dev": "d", "pkg": "a", "time": commit_time},
    ]))


def test_derive_role_prior_commit_is_committer():
    store = _role_store("2016-01-01T00:00:00Z")
    at = parse_time("2016-01-02T00:00:00Z")
    assert derive_role(0, 0, at, store) is Role.COMMITTER


def test_derive_role_no_commits_is_submitter():
    store = parse_event_stream(event_lines([
        {"event": "package_created", "pkg": "a", "time": "2015-01-01T00:00:00Z"},
        {"event": "commit", "dev": "other", "pkg": "a", "time": "2015-06-01T00:00:00Z"},
        {"event": "contribution", "dev": "d", "pkg": "a", "kind": "pr",
         "id": "c1", "time": "2016-01-01T00:00:00Z"},
    ]))
    dev = store.developers.lookup("d")
    assert derive_role(dev, 0, parse_time("2016-01-01T00:00:00Z"), store) is Role.SUBMITTER


def test_derive_role_same_instant_commit_is_submitter():
    # strict inequality: a commit at the contribution instant grants nothing
    store = _role_store("2016-01-01T00:00:00Z")
    at = parse_time("2016-01-01T00:00:00Z")
    assert derive_role(0, 0, at, store) is Role.SUBMITTER


@given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=1, max_value=10 ** 6))
def test_derive_role_monotone_in_time(offset, gap):
    store = _role_store("2016-01-01T00:00:00Z")
    t0 = parse_time("2016-01-01T00:00:00Z") + offset
    if derive_role(0, 0, t0, store) is Role.COMMITTER:
        assert derive_role(0, 0, t0 + gap, store) is Role.COMMITTER


def test_explicit_role_overrides_derivation(worked_example_store):
    lines = event_lines([
        {"event": "package_created", "pkg": "a", "time": "2015-01-01T00:00:00Z"},
        {"event": "commit", "dev": "d", "pkg": "a", "time": "2015-02-01T00:00:00Z"},
        {"event": "contribution", "dev": "d", "pkg": "a", "kind": "pr",
         "id": "c1", "time": "2016-01-01T00:00:00Z", "role": "submitter"},
    ])
    store = parse_event_stream(lines)
    assert store.contributions[0].role is Role.SUBMITTER
