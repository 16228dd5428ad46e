"""Command-line entry point: validate, changes, graph, congruence,
correlate, similarity, survival, synth.

Outputs are written atomically (temp file + rename) and row ordering is
fixed (window, change, type, kind, package name) so repeated runs produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import congruence as cong
from . import depchange, dormancy, similarity, stats, synth
from .errors import EcoconError
from .graph import build_window_graph, contribution_pairs
from .ingest import bin_quarters, parse_event_stream
from .model import (
    ContributionKind,
    ContributionType,
    DependencyChangeKind,
    format_time,
)

CHANGE_ORDER = list(DependencyChangeKind)
TYPE_ORDER = list(ContributionType)
KIND_ORDER = list(ContributionKind)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _open_events(path: str):
    if not os.path.exists(path):
        raise EcoconError(f"input file not found: {path}")
    return open(path, "r", encoding="utf-8")


def _load_store(path: str):
    with _open_events(path) as handle:
        return parse_event_stream(handle)


def _select_windows(store, selector: str | None):
    windows = bin_quarters(store.study_range)
    if selector:
        first, _, last = selector.partition("..")
        last = last or first
        windows = [w for w in windows if first <= w.label <= last]
        if not windows:
            raise EcoconError(f"no study quarters match {selector!r}")
    return windows


def _summary(path: str, detail: str) -> None:
    print(f"wrote {path}: {detail}")


# --- subcommands -----------------------------------------------------------


def cmd_validate(args) -> int:
    errors: list = []
    with _open_events(args.events) as handle:
        store = parse_event_stream(handle, errors=errors)
    for variant, count in store.counts.items():
        print(f"{variant}: {count}")
    print(f"errors: {len(errors)}")
    for exc in errors[:10]:
        print(f"  {exc}")
    return 0 if not errors else 1


def cmd_changes(args) -> int:
    store = _load_store(args.events)
    previous: dict = {}
    out = []
    for snapshot in store.manifests:
        merged = depchange.merge_manifest(snapshot.deps, snapshot.dev_deps)
        client = store.packages.names[snapshot.pkg]
        deltas = depchange.classify_delta(
            previous.get(snapshot.pkg), merged, snapshot.time, client)
        previous[snapshot.pkg] = merged
        for delta in deltas:
            if delta.kind is None and not args.include_unknown:
                continue
            out.append(json.dumps({
                "event": "dependency_change",
                "client": delta.client,
                "library": delta.library,
                "change": delta.kind.value if delta.kind else "unknown",
                "time": format_time(delta.time),
            }, sort_keys=True))
    print("\n".join(out))
    return 0


def cmd_graph(args) -> int:
    store = _load_store(args.events)
    windows = [w for w in bin_quarters(store.study_range) if w.label == args.window]
    if not windows:
        raise EcoconError(f"window {args.window!r} not in study range")
    graph = build_window_graph(store, windows[0])
    names = store.packages.names
    dump = {
        "window": graph.window.label,
        "packages": sorted(names[p] for p in graph.packages),
        "dep_edges": [
            {"client": names[c], "library": names[l], "change": kind.value}
            for (c, l), kind in sorted(graph.dep_edges.items())
        ],
        "contrib_pairs": {
            ctype.value: {
                kind.value: sorted(
                    [names[c], names[l]]
                    for c, l in contribution_pairs(graph, ctype, kind)
                )
                for kind in KIND_ORDER
            }
            for ctype in TYPE_ORDER
        },
    }
    print(json.dumps(dump, indent=2, sort_keys=True))
    return 0


def _compute_reports(store, windows, jobs: int):
    def one(window):
        return cong.congruence_report(build_window_graph(store, window))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, windows))
    return [one(w) for w in windows]


def _ecosystem_rows(reports):
    for report in reports:
        for change in CHANGE_ORDER:
            for ctype in TYPE_ORDER:
                for kind in KIND_ORDER:
                    cell = report.cells[(change, ctype, kind)]
                    yield [report.window.label, change.value, ctype.value,
                           kind.value, str(cell.numerator), str(cell.denominator),
                           cong.format_score(cell.score)]


def _package_rows(reports, names):
    for report in reports:
        for change in CHANGE_ORDER:
            for ctype in TYPE_ORDER:
                for kind in KIND_ORDER:
                    scored = [
                        (names[pkg], cells[(change, ctype, kind)])
                        for pkg, cells in report.package_scores.items()
                        if (change, ctype, kind) in cells
                    ]
                    for name, cell in sorted(scored):
                        yield [name, report.window.label, change.value,
                               ctype.value, kind.value, str(cell.numerator),
                               str(cell.denominator), cong.format_score(cell.score)]


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _chart_svg(series: dict, labels: list[str], title: str) -> str:
    width, height, pad = 720, 260, 40
    plot_w, plot_h = width - 2 * pad, height - 2 * pad
    n = max(len(labels), 2)
    colors = {
        DependencyChangeKind.ADDED: "#1f77b4",
        DependencyChangeKind.REMOVED: "#d62728",
        DependencyChangeKind.UPGRADED: "#2ca02c",
        DependencyChangeKind.DOWNGRADED: "#9467bd",
    }
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{pad}" y="20" font-size="13">{title}</text>',
        f'<rect x="{pad}" y="{pad}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#999"/>',
    ]
    for change in CHANGE_ORDER:
        points = []
        segments = []
        for i, score in enumerate(series[change]):
            if score is None:
                if points:
                    segments.append(points)
                points = []
                continue
            x = pad + plot_w * i / (n - 1)
            y = pad + plot_h * (1.0 - float(score))
            points.append(f"{x:.1f},{y:.1f}")
        if points:
            segments.append(points)
        for seg in segments:
            parts.append(
                f'<polyline fill="none" stroke="{colors[change]}" '
                f'stroke-width="1.5" points="{" ".join(seg)}"/>'
            )
    for i, change in enumerate(CHANGE_ORDER):
        parts.append(
            f'<text x="{pad + 130 * i}" y="{height - 8}" font-size="11" '
            f'fill="{colors[change]}">{change.value}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_congruence(args) -> int:
    store = _load_store(args.events)
    windows = _select_windows(store, args.windows)
    reports = _compute_reports(store, windows, args.jobs)
    formats = set(args.format.split(","))
    if args.svg:
        formats.add("svg")
    out = args.out

    if "csv" in formats:
        path = os.path.join(out, "ecosystem.csv")
        _write_atomic(path, _csv_text(
            ["window", "change", "type", "kind", "numerator", "denominator", "score"],
            _ecosystem_rows(reports)))
        _summary(path, f"{len(reports) * 32} cells over {len(reports)} windows")

        path = os.path.join(out, "packages.csv")
        rows = list(_package_rows(reports, store.packages.names))
        _write_atomic(path, _csv_text(
            ["package", "window", "change", "type", "kind",
             "numerator", "denominator", "score"], rows))
        _summary(path, f"{len(rows)} package rows")

    if "json" in formats:
        path = os.path.join(out, "report.json")
        payload = [
            {
                "window": report.window.label,
                "cells": [
                    {
                        "change": change.value, "type": ctype.value,
                        "kind": kind.value,
                        "numerator": report.cells[(change, ctype, kind)].numerator,
                        "denominator": report.cells[(change, ctype, kind)].denominator,
                        "score": cong.format_score(
                            report.cells[(change, ctype, kind)].score) or None,
                    }
                    for change in CHANGE_ORDER
                    for ctype in TYPE_ORDER
                    for kind in KIND_ORDER
                ],
            }
            for report in reports
        ]
        _write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        _summary(path, f"{len(reports)} windows")

    if "svg" in formats:
        labels = [r.window.label for r in reports]
        for ctype in TYPE_ORDER:
            for kind in KIND_ORDER:
                series = {
                    change: [r.cells[(change, ctype, kind)].score for r in reports]
                    for change in CHANGE_ORDER
                }
                path = os.path.join(out, f"congruence_{ctype.value}_{kind.value}.svg")
                _write_atomic(path, _chart_svg(
                    series, labels, f"{ctype.value} / {kind.value}"))
                _summary(path, "time-series chart")
    return 0


def cmd_correlate(args) -> int:
    if not os.path.exists(args.ecosystem_csv):
        raise EcoconError(f"input file not found: {args.ecosystem_csv}")
    series: dict = {change: {} for change in CHANGE_ORDER}
    with open(args.ecosystem_csv, encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            if row["type"] != args.type or row["kind"] != args.kind:
                continue
            change = DependencyChangeKind(row["change"])
            series[change][row["window"]] = (
                float(row["score"]) if row["score"] else None)

    print(f"type={args.type} kind={args.kind}")
    for i, a in enumerate(CHANGE_ORDER):
        for b in CHANGE_ORDER[i + 1:]:
            windows = sorted(set(series[a]) & set(series[b]))
            pairs = [
                (series[a][w], series[b][w])
                for w in windows
                if series[a][w] is not None and series[b][w] is not None
            ]
            if len(pairs) < 3:
                print(f"{a.value} to {b.value}: n={len(pairs)} (too few samples)")
                continue
            result = stats.spearman([p[0] for p in pairs], [p[1] for p in pairs])
            print(f"{a.value} to {b.value}: rho={result.rho:+.3f} "
                  f"n={result.n} {result.strength}")
    return 0


def cmd_similarity(args) -> int:
    if not os.path.exists(args.prs):
        raise EcoconError(f"input file not found: {args.prs}")
    with open(args.prs, encoding="utf-8") as handle:
        prs = similarity.load_pr_contents(handle)
    buckets = similarity.group_similarities(prs)

    rows = []
    for bucket in (similarity.BUCKET_CLI, similarity.BUCKET_NON,
                   similarity.BUCKET_MAINTAINERS):
        for pair in buckets[bucket]:
            rows.append([
                pair.dev, pair.bucket, pair.pr1, pair.pr2,
                "" if pair.source_sim is None else f"{pair.source_sim:.6f}",
                f"{pair.path_sim:.6f}",
            ])
    _write_atomic(args.out, _csv_text(
        ["dev", "bucket", "pr1", "pr2", "source_sim", "path_sim"], rows))
    _summary(args.out, f"{len(rows)} PR pairs")

    for metric, pick in (("source", lambda p: p.source_sim),
                         ("path", lambda p: p.path_sim)):
        groups = {
            bucket: [pick(p) for p in pairs if pick(p) is not None]
            for bucket, pairs in buckets.items()
        }
        present = {b: g for b, g in groups.items() if g}
        if len(present) >= 2 and sum(map(len, present.values())) >= 5:
            result = stats.kruskal_wallis(list(present.values()))
            print(f"{metric}: Kruskal-Wallis H={result.h:.3f} "
                  f"df={result.df} p={result.p:.4g}")
        items = sorted(present.items())
        for i, (b1, g1) in enumerate(items):
            for b2, g2 in items[i + 1:]:
                effect = stats.cliffs_delta(g1, g2)
                print(f"{metric}: {b1} vs {b2}: delta={effect.delta:+.3f} "
                      f"{effect.magnitude}")
    return 0


def cmd_survival(args) -> int:
    store = _load_store(args.events)
    windows = bin_quarters(store.study_range)
    reports = _compute_reports(store, windows, args.jobs)
    rows = dormancy.survival_export(store, windows, reports)
    names = store.packages.names
    csv_rows = [dormancy.survival_row_values(row, names[row.package]) for row in rows]
    csv_rows.sort(key=lambda r: (r[0], r[1]))
    _write_atomic(args.out, _csv_text(dormancy.survival_header(), csv_rows))
    _summary(args.out, f"{len(csv_rows)} package-quarter rows")
    return 0


def cmd_synth(args) -> int:
    params = synth.SynthParams(
        seed=args.seed, n_packages=args.packages, n_devs=args.devs,
        n_quarters=args.quarters, dep_density=args.dep_density,
        contrib_rate=args.contrib_rate)
    print("\n".join(synth.generate(params)))
    return 0


# --- wiring ----------------------------------------------------------------


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ECOCON_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecocon",
        description="Dependency-contribution congruence analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an NDJSON event log")
    p.add_argument("events")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("changes", help="derive dependency changes from manifests")
    p.add_argument("events")
    p.add_argument("--include-unknown", action="store_true")
    p.set_defaults(func=cmd_changes)

    p = sub.add_parser("graph", help="dump one window's temporal graph")
    p.add_argument("events")
    p.add_argument("--window", required=True, metavar="2016Q1")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("congruence", help="compute all congruence cells")
    p.add_argument("events")
    p.add_argument("--windows", metavar="A..B")
    p.add_argument("--out", default=".")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--format", default="csv")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("correlate", help="Spearman correlation across change kinds")
    p.add_argument("ecosystem_csv")
    p.add_argument("--type", default=ContributionType.NON_MAINTAIN.value,
                   choices=[t.value for t in TYPE_ORDER])
    p.add_argument("--kind", default=ContributionKind.PR.value,
                   choices=[k.value for k in KIND_ORDER])
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("similarity", help="PR content similarity by bucket")
    p.add_argument("prs")
    p.add_argument("--out", default="pairs.csv")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("survival", help="export the survival-analysis table")
    p.add_argument("events")
    p.add_argument("--out", default="survival.csv")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=cmd_survival)

    p = sub.add_parser("synth", help="generate a synthetic event log")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--packages", type=int, default=20)
    p.add_argument("--devs", type=int, default=8)
    p.add_argument("--quarters", type=int, default=4)
    p.add_argument("--dep-density", type=float, default=0.08)
    p.add_argument("--contrib-rate", type=float, default=0.6)
    p.set_defaults(func=cmd_synth)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return args.func(args)
    except EcoconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
