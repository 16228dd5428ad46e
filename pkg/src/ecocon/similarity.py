"""Pull-request content similarity: trigram Jaccard and file-path techniques.

Source similarity is a multiset Jaccard over token trigrams of the lines a
PR added (JavaScript files only); path similarity averages four
component-level techniques (common prefix, common suffix, longest common
substring, longest common subsequence) over all file-path pairs.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from statistics import mean
from typing import Iterable, Sequence

from .errors import BothPathsEmpty, MalformedLine, NoFiles
from .model import ContributionType

_TOKEN_RE = re.compile(r"[A-Za-z0-9_$]+|[^\sA-Za-z0-9_$]")

PATH_TECHNIQUES = ("lcp", "lcs", "lcsubstr", "lcsubseq")

# the three-way comparison buckets: client maintainers, ecosystem
# contributors, and both maintainer types pooled
BUCKET_CLI = "cli-maintain"
BUCKET_NON = "non-maintain"
BUCKET_MAINTAINERS = "maintainers"


def tokenize(line: str) -> list[str]:
    """Whitespace split plus identifier/punctuation boundary split."""
    return _TOKEN_RE.findall(line)


@dataclass
class PullRequestContent:
    id: str
    dev: str
    type: ContributionType
    added_lines: list  # (path, text) in input order
    file_paths: set
    _trigrams: Counter | None = field(default=None, repr=False)

    def trigrams(self) -> Counter:
        """Token-trigram multiset over the added lines of each .js file.

        Tokens of one file's added lines form a single stream; no trigram
        spans files.
        """
        if self._trigrams is None:
            streams: dict = {}
            for path, text in self.added_lines:
                if path.endswith(".js"):
                    streams.setdefault(path, []).extend(tokenize(text))
            counts: Counter = Counter()
            for tokens in streams.values():
                for i in range(len(tokens) - 2):
                    counts[tuple(tokens[i:i + 3])] += 1
            self._trigrams = counts
        return self._trigrams


def source_code_sim(p1: PullRequestContent, p2: PullRequestContent) -> float | None:
    """Multiset Jaccard of token trigrams; None when both multisets are empty."""
    t1, t2 = p1.trigrams(), p2.trigrams()
    if not t1 and not t2:
        return None
    intersection = sum((t1 & t2).values())
    union = sum((t1 | t2).values())
    return intersection / union


def split_path(path: str) -> list[str]:
    return [c for c in path.split("/") if c]


def lcx(f1: Sequence[str], f2: Sequence[str], technique: str) -> int:
    """Common-component length of two path-component lists."""
    if technique == "lcp":
        n = 0
        for a, b in zip(f1, f2):
            if a != b:
                break
            n += 1
        return n
    if technique == "lcs":
        n = 0
        for a, b in zip(reversed(f1), reversed(f2)):
            if a != b:
                break
            n += 1
        return n
    if technique == "lcsubstr":
        best = 0
        prev = [0] * (len(f2) + 1)
        for a in f1:
            row = [0] * (len(f2) + 1)
            for j, b in enumerate(f2, start=1):
                if a == b:
                    row[j] = prev[j - 1] + 1
                    best = max(best, row[j])
            prev = row
        return best
    if technique == "lcsubseq":
        prev = [0] * (len(f2) + 1)
        for a in f1:
            row = [0] * (len(f2) + 1)
            for j, b in enumerate(f2, start=1):
                if a == b:
                    row[j] = prev[j - 1] + 1
                else:
                    row[j] = max(prev[j], row[j - 1])
            prev = row
        return prev[len(f2)]
    raise ValueError(f"unknown technique {technique!r}")


def string_sim(f1: Sequence[str], f2: Sequence[str], technique: str) -> float:
    """lcx normalized by the longer path's component count."""
    longest = max(len(f1), len(f2))
    if longest == 0:
        raise BothPathsEmpty("both file paths have no components")
    return lcx(f1, f2, technique) / longest


def pr_path_sim(p1: PullRequestContent, p2: PullRequestContent) -> float:
    """Mean over all path pairs of the mean of the four technique scores."""
    if not p1.file_paths or not p2.file_paths:
        raise NoFiles("both PRs must touch at least one file")
    scores = []
    for path1 in p1.file_paths:
        f1 = split_path(path1)
        for path2 in p2.file_paths:
            f2 = split_path(path2)
            scores.append(mean(string_sim(f1, f2, t) for t in PATH_TECHNIQUES))
    return mean(scores)


def bucket_of(type: ContributionType) -> str:
    if type is ContributionType.CLI_MAINTAIN:
        return BUCKET_CLI
    if type is ContributionType.NON_MAINTAIN:
        return BUCKET_NON
    return BUCKET_MAINTAINERS


@dataclass(frozen=True)
class PairScore:
    dev: str
    bucket: str
    pr1: str
    pr2: str
    source_sim: float | None
    path_sim: float


def group_similarities(prs: Iterable[PullRequestContent]) -> dict:
    """bucket -> pair scores, pairing PRs only within one developer's bucket."""
    grouped: dict = {}
    for pr in prs:
        grouped.setdefault((pr.dev, bucket_of(pr.type)), []).append(pr)
    results: dict = {b: [] for b in (BUCKET_CLI, BUCKET_NON, BUCKET_MAINTAINERS)}
    for (dev, bucket), members in sorted(grouped.items()):
        for p1, p2 in combinations(members, 2):
            results[bucket].append(PairScore(
                dev, bucket, p1.id, p2.id,
                source_code_sim(p1, p2), pr_path_sim(p1, p2)))
    return results


def load_pr_contents(reader: Iterable) -> list[PullRequestContent]:
    """Parse NDJSON PR-content records."""
    prs = []
    for line_no, raw in enumerate(reader, start=1):
        text = (raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw).strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
            ctype = ContributionType(obj["type"])
            added = [(f["path"], line) for f in obj["files"] for line in f.get("added", [])]
            paths = {f["path"] for f in obj["files"]}
            prs.append(PullRequestContent(
                str(obj["id"]), str(obj["dev"]), ctype, added, paths))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedLine(line_no, 0, f"bad PR record: {exc}") from exc
    return prs
