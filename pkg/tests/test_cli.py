import csv
import json

import pytest

from ecocon.cli import run

from conftest import WORKED_EXAMPLE_EVENTS, event_lines


@pytest.fixture
def events_file(tmp_path, worked_example_lines):
    path = tmp_path / "events.ndjson"
    path.write_text("\n".join(worked_example_lines) + "\n")
    return str(path)


def test_validate_clean_log(events_file, capsys):
    assert run(["validate", events_file]) == 0
    out = capsys.readouterr().out
    assert "errors: 0" in out
    assert "package_created: 3" in out


def test_validate_reports_errors(tmp_path, capsys):
    path = tmp_path / "bad.ndjson"
    path.write_text("not json\n")
    assert run(["validate", str(path)]) == 1
    assert "errors: 1" in capsys.readouterr().out


def test_missing_input_file(tmp_path, capsys):
    assert run(["validate", str(tmp_path / "absent.ndjson")]) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2


def test_no_subcommand_is_usage_error(capsys):
    assert run([]) == 2


def test_graph_dump(events_file, capsys):
    assert run(["graph", events_file, "--window", "2016Q1"]) == 0
    dump = json.loads(capsys.readouterr().out)
    assert dump["window"] == "2016Q1"
    assert dump["packages"] == ["pkg.i", "pkg.j", "pkg.k"]
    assert len(dump["dep_edges"]) == 3
    assert dump["contrib_pairs"]["cli-maintain"]["pr"] == [["pkg.i", "pkg.j"]]
    assert dump["contrib_pairs"]["cli-lib-maintain"]["pr"] == [["pkg.i", "pkg.k"]]


def test_graph_unknown_window(events_file, capsys):
    assert run(["graph", events_file, "--window", "2030Q1"]) == 1


def test_congruence_csv_output(events_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert run(["congruence", events_file, "--out", str(out)]) == 0
    with open(out / "ecosystem.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    # three study quarters, 32 cells each
    assert len(rows) == 96
    by_key = {(r["window"], r["change"], r["type"], r["kind"]): r for r in rows}
    cell = by_key[("2016Q1", "is-added", "cli-maintain", "pr")]
    assert cell["score"] == "0.333"
    assert (cell["numerator"], cell["denominator"]) == ("1", "3")

    with open(out / "packages.csv", newline="") as handle:
        pkg_rows = list(csv.DictReader(handle))
    k = [r for r in pkg_rows
         if r["package"] == "pkg.k" and r["window"] == "2016Q1"
         and r["type"] == "cli-lib-maintain" and r["kind"] == "pr"]
    assert len(k) == 1
    assert k[0]["score"] == "0.500"


def test_congruence_window_filter(events_file, tmp_path):
    out = tmp_path / "out"
    assert run(["congruence", events_file, "--out", str(out),
                "--windows", "2016Q1..2016Q1"]) == 0
    with open(out / "ecosystem.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 32
    assert {r["window"] for r in rows} == {"2016Q1"}


def test_congruence_bad_window_filter(events_file, tmp_path):
    assert run(["congruence", events_file, "--out", str(tmp_path),
                "--windows", "2030Q1"]) == 1


def test_congruence_json_and_svg(events_file, tmp_path):
    out = tmp_path / "out"
    assert run(["congruence", events_file, "--out", str(out),
                "--format", "json", "--svg"]) == 0
    payload = json.loads((out / "report.json").read_text())
    assert [w["window"] for w in payload] == ["2015Q3", "2015Q4", "2016Q1"]
    assert len(payload[0]["cells"]) == 32
    svg = (out / "congruence_cli-maintain_pr.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_congruence_outputs_are_deterministic(events_file, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert run(["congruence", events_file, "--out", str(out),
                    "--format", "csv,json"]) == 0
    for name in ("ecosystem.csv", "packages.csv", "report.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_congruence_parallel_matches_serial(events_file, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(["congruence", events_file, "--out", str(out1)]) == 0
    assert run(["congruence", events_file, "--out", str(out2), "--jobs", "4"]) == 0
    assert (out1 / "ecosystem.csv").read_bytes() == \
        (out2 / "ecosystem.csv").read_bytes()


def test_changes_command(tmp_path, capsys):
    events = [
        {"event": "package_created", "pkg": "app", "time": "2016-01-01T00:00:00Z"},
        {"event": "package_created", "pkg": "lib", "time": "2016-01-01T00:00:00Z"},
        {"event": "package_created", "pkg": "odd", "time": "2016-01-01T00:00:00Z"},
        {"event": "manifest_snapshot", "pkg": "app", "time": "2016-02-01T00:00:00Z",
         "deps": {"lib": "1.0.0"}},
        {"event": "manifest_snapshot", "pkg": "app", "time": "2016-03-01T00:00:00Z",
         "deps": {"lib": "2.0.0", "odd": "*"}},
        {"event": "manifest_snapshot", "pkg": "app", "time": "2016-04-01T00:00:00Z",
         "deps": {"odd": "latest"}},
    ]
    path = tmp_path / "m.ndjson"
    path.write_text("\n".join(event_lines(events)) + "\n")

    assert run(["changes", str(path)]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines() if l]
    changes = {(l["library"], l["change"]) for l in lines}
    assert ("lib", "is-added") in changes
    assert ("lib", "is-upgraded") in changes
    assert ("lib", "is-removed") in changes
    assert ("odd", "is-added") in changes
    # the "*" -> "latest" constraint change is unknown and hidden by default
    assert not any(l["change"] == "unknown" for l in lines)

    assert run(["changes", str(path), "--include-unknown"]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines() if l]
    assert any(l["library"] == "odd" and l["change"] == "unknown" for l in lines)


def test_synth_command_round_trips(tmp_path, capsys):
    assert run(["synth", "--seed", "9", "--packages", "10", "--devs", "4",
                "--quarters", "3"]) == 0
    text = capsys.readouterr().out
    path = tmp_path / "synth.ndjson"
    path.write_text(text)
    assert run(["validate", str(path)]) == 0


def test_synth_is_deterministic(capsys):
    assert run(["synth", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert run(["synth", "--seed", "5"]) == 0
    assert capsys.readouterr().out == first


def test_survival_command(tmp_path, capsys):
    events = [{"event": "package_created", "pkg": "a",
               "time": "2015-12-01T00:00:00Z"}]
    for q, month in enumerate((2, 5, 8, 11)):
        events.append({"event": "commit", "dev": "d", "pkg": "a",
                       "time": f"2016-{month:02d}-01T00:00:00Z"})
    path = tmp_path / "events.ndjson"
    path.write_text("\n".join(event_lines(events)) + "\n")
    out = tmp_path / "survival.csv"
    assert run(["survival", str(path), "--out", str(out)]) == 0
    with open(out, newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 4
    assert all(r["dormant"] == "false" for r in rows)
    assert rows[0]["commits"] == "1"
    assert rows[0]["license"] == "none"


def test_correlate_command(events_file, tmp_path, capsys):
    out = tmp_path / "out"
    run(["congruence", events_file, "--out", str(out)])
    capsys.readouterr()
    assert run(["correlate", str(out / "ecosystem.csv"),
                "--type", "cli-maintain", "--kind", "pr"]) == 0
    text = capsys.readouterr().out
    assert "type=cli-maintain kind=pr" in text
    # only two quarters: every change pair has too few samples
    assert "too few samples" in text


def test_similarity_command(tmp_path, capsys):
    prs = [
        {"id": f"p{i}", "dev": "d", "type": "cli-maintain",
         "files": [{"path": "src/a.js", "added": ["let x = 1;"]}]}
        for i in range(3)
    ] + [
        {"id": f"q{i}", "dev": "d", "type": "non-maintain",
         "files": [{"path": "lib/b.js", "added": ["let y = 2;"]}]}
        for i in range(3)
    ]
    path = tmp_path / "prs.ndjson"
    path.write_text("\n".join(json.dumps(p) for p in prs) + "\n")
    out = tmp_path / "pairs.csv"
    assert run(["similarity", str(path), "--out", str(out)]) == 0
    with open(out, newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 6  # C(3,2) per bucket
    assert {r["bucket"] for r in rows} == {"cli-maintain", "non-maintain"}
    assert all(r["source_sim"] == "1.000000" for r in rows)
    text = capsys.readouterr().out
    assert "Kruskal-Wallis" in text
    assert "cli-maintain vs non-maintain" in text
