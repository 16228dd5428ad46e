"""Synthetic ecosystems and a naive congruence reference for testing.

The generator is deterministic per seed and writes commit history before
contributions so derived roles have consistent evidence. The naive
reference works directly on raw event dicts with quadratic enumeration:
no interning, no relations, no shared code with the pipeline it checks.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams
from .model import (
    ContributionKind,
    ContributionType,
    DependencyChangeKind,
    TimeWindow,
    format_time,
    parse_time,
)

_CHANGES = [k.value for k in DependencyChangeKind]
_START_YEAR = 2015


@dataclass(frozen=True)
class SynthParams:
    seed: int
    n_packages: int = 20
    n_devs: int = 8
    n_quarters: int = 4
    dep_density: float = 0.08
    contrib_rate: float = 0.6
    change_mix: tuple = (0.4, 0.2, 0.3, 0.1)

    def validate(self) -> None:
        if min(self.n_packages, self.n_devs, self.n_quarters) < 1:
            raise InvalidParams("counts must be >= 1")
        if not 0.0 <= self.dep_density <= 1.0 or not 0.0 <= self.contrib_rate <= 1.0:
            raise InvalidParams("probabilities must be in [0, 1]")
        if len(self.change_mix) != 4 or any(p < 0 for p in self.change_mix) or \
                abs(sum(self.change_mix) - 1.0) > 1e-9:
            raise InvalidParams("change_mix must be 4 probabilities summing to 1")


def _quarters(n: int) -> list[TimeWindow]:
    windows = []
    year, q = _START_YEAR, 1
    for _ in range(n):
        windows.append(TimeWindow.quarter(year, q))
        q += 1
        if q > 4:
            year, q = year + 1, 1
    return windows


def generate(params: SynthParams) -> list[str]:
    """Deterministic NDJSON event lines for one synthetic ecosystem."""
    params.validate()
    rng = random.Random(params.seed)
    windows = _quarters(params.n_quarters)
    start = windows[0].t1

    events = []  # (time, insertion order, json line)

    def emit(time: int, obj: dict) -> None:
        obj["time"] = format_time(time)
        events.append((time, len(events), json.dumps(obj, sort_keys=True)))

    pkgs = [f"pkg{i:03d}" for i in range(params.n_packages)]
    devs = [f"dev{i:03d}" for i in range(params.n_devs)]

    created = {}
    for name in pkgs:
        if rng.random() < 0.75 or params.n_quarters == 1:
            t = start - rng.randint(1, 90 * 86400)
        else:
            w = rng.choice(windows[:-1])
            t = rng.randint(w.t1, w.t2)
        created[name] = t
        emit(t, {"event": "package_created", "pkg": name})

    def random_moment(window: TimeWindow, *floors: int) -> int:
        lo = max(window.t1, *[f + 1 for f in floors]) if floors else window.t1
        if lo > window.t2:
            return -1
        return rng.randint(lo, window.t2)

    # commit history first: it both drives roles and feeds dormancy
    for dev in devs:
        for name in rng.sample(pkgs, k=max(1, params.n_packages // 3)):
            for window in windows:
                if rng.random() < 0.4:
                    t = random_moment(window, created[name])
                    if t >= 0:
                        emit(t, {"event": "commit", "dev": dev, "pkg": name})

    for client in pkgs:
        for library in pkgs:
            if client == library or rng.random() >= params.dep_density:
                continue
            for window in windows:
                if rng.random() < 0.5:
                    t = random_moment(window, created[client], created[library])
                    if t < 0:
                        continue
                    change = rng.choices(_CHANGES, weights=params.change_mix)[0]
                    emit(t, {"event": "dependency_change", "client": client,
                             "library": library, "change": change})

    counter = 0
    for window in windows:
        for dev in devs:
            if rng.random() >= params.contrib_rate:
                continue
            for _ in range(rng.randint(1, 3)):
                name = rng.choice(pkgs)
                t = random_moment(window, created[name])
                if t < 0:
                    continue
                counter += 1
                kind = rng.choice(["pr", "issue"])
                emit(t, {"event": "contribution", "dev": dev, "pkg": name,
                         "kind": kind, "id": f"c{counter:05d}"})

    events.sort(key=lambda e: (e[0], e[1]))
    return [line for _, _, line in events]


def _raw_events(lines) -> list[dict]:
    return [json.loads(line) for line in lines if line.strip()]


def _naive_role(events: list[dict], dev: str, pkg: str, at: int) -> str:
    for obj in events:
        if (obj["event"] == "commit" and obj["dev"] == dev and obj["pkg"] == pkg
                and parse_time(obj["time"]) < at):
            return "committer"
    return "submitter"


_ROLE_PAIRS = {
    ContributionType.CLI_LIB_MAINTAIN: ("committer", "committer"),
    ContributionType.CLI_MAINTAIN: ("committer", "submitter"),
    ContributionType.LIB_MAINTAIN: ("submitter", "committer"),
    ContributionType.NON_MAINTAIN: ("submitter", "submitter"),
}


def _naive_window_state(events: list[dict], window: TimeWindow):
    """Creation-filtered packages, per-pair latest change, window contributions."""
    packages = {
        obj["pkg"] for obj in events
        if obj["event"] == "package_created" and parse_time(obj["time"]) < window.t1
    }
    latest: dict = {}
    for obj in events:  # input order breaks ties, like the pipeline
        if obj["event"] != "dependency_change":
            continue
        t = parse_time(obj["time"])
        if t > window.t2:
            continue
        if obj["client"] not in packages or obj["library"] not in packages:
            continue
        key = (obj["client"], obj["library"])
        if key not in latest or t >= latest[key][0]:
            latest[key] = (t, obj["change"])
    contribs = []
    for obj in events:
        if obj["event"] != "contribution":
            continue
        t = parse_time(obj["time"])
        if window.t1 <= t <= window.t2 and obj["pkg"] in packages:
            role = obj.get("role") or _naive_role(events, obj["dev"], obj["pkg"], t)
            contribs.append((obj["dev"], obj["pkg"], role, obj["kind"]))
    return packages, latest, contribs


def _naive_aligned(contribs, client: str, library: str,
                   type: ContributionType, kind: ContributionKind) -> bool:
    r1, r2 = _ROLE_PAIRS[type]
    devs_c = {d for d, p, r, k in contribs if p == client and r == r1 and k == kind.value}
    devs_l = {d for d, p, r, k in contribs if p == library and r == r2 and k == kind.value}
    return bool(devs_c & devs_l)


def naive_congruence(
    events: list[dict],
    window: TimeWindow,
    change: DependencyChangeKind,
    type: ContributionType,
    kind: ContributionKind,
) -> Fraction | None:
    """Ground-truth ecosystem congruence by direct pair enumeration."""
    packages, latest, contribs = _naive_window_state(events, window)
    num = den = 0
    for client in packages:
        for library in packages:
            if client == library:
                continue
            state = latest.get((client, library))
            if state is None or state[1] != change.value:
                continue
            den += 1
            if _naive_aligned(contribs, client, library, type, kind):
                num += 1
    if den == 0:
        return None
    return Fraction(num, den)


def naive_package_congruence(
    events: list[dict],
    window: TimeWindow,
    change: DependencyChangeKind,
    type: ContributionType,
    kind: ContributionKind,
    pkg: str,
) -> Fraction | None:
    """Ground-truth package-level congruence for one package name."""
    packages, latest, contribs = _naive_window_state(events, window)
    num = den = 0
    for (client, library), (_, state_change) in latest.items():
        if state_change != change.value or pkg not in (client, library):
            continue
        den += 1
        if _naive_aligned(contribs, client, library, type, kind):
            num += 1
    if den == 0:
        return None
    return Fraction(num, den)
