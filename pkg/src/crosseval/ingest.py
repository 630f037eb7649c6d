"""Score-file and manifest parsing.

Two canonical formats:

Score file
    UTF-8 text, LF or CRLF line endings, one ``<utt_id>\\t<score>`` record per
    line, no header, no comments, no blank lines.

Manifest
    CSV with the header ``utt_id,label,subset_id``; ``label`` is ``bonafide``
    or ``spoof`` and each ``subset_id`` carries a single label.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .crosstest import SubsetStore
from .errors import (
    BadHeader,
    BadLabel,
    DuplicateId,
    InconsistentSubsetLabel,
    MalformedLine,
    MissingScore,
    NonFiniteScore,
)
from .metrics import LABELS, LabeledScoreSet

log = logging.getLogger(__name__)

MANIFEST_HEADER = ["utt_id", "label", "subset_id"]
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NONFINITE = re.compile(r"[+-]?(nan|inf|infinity)", re.IGNORECASE)


@dataclass(frozen=True)
class ManifestEntry:
    utt_id: str
    label: str
    subset_id: str


@dataclass(frozen=True)
class ScoredTrial:
    utt_id: str
    score: float
    label: str
    subset_id: str


def _text_lines(source):
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    text = data.decode("utf-8")
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def parse_score(text: str, line: int, content: str) -> float:
    if _NONFINITE.fullmatch(text):
        raise NonFiniteScore(f"line {line}: {content!r}")
    if not _DECIMAL.fullmatch(text):
        raise MalformedLine(line, content)
    value = float(text)
    if not math.isfinite(value):
        raise NonFiniteScore(f"line {line}: {content!r}")
    return value


def parse_scores(source) -> dict[str, float]:
    """Read a score file into ``{utt_id: score}``.

    ``source`` may be bytes, a path, or a binary/text stream.
    """
    scores: dict[str, float] = {}
    for lineno, line in enumerate(_text_lines(source), start=1):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise MalformedLine(lineno, line)
        utt_id, raw = parts
        if utt_id in scores:
            raise DuplicateId(utt_id, lineno)
        scores[utt_id] = parse_score(raw, lineno, line)
    return scores


def parse_manifest(source) -> list[ManifestEntry]:
    lines = _text_lines(source)
    if not lines:
        raise BadHeader("")
    rows = csv.reader(lines)
    header = next(rows)
    if header != MANIFEST_HEADER:
        raise BadHeader(lines[0])
    entries = []
    seen = set()
    subset_label: dict[str, str] = {}
    for lineno, row in enumerate(rows, start=2):
        if len(row) != 3 or not row[0] or not row[2]:
            raise MalformedLine(lineno, lines[lineno - 1])
        utt_id, label, subset_id = row
        if label not in LABELS:
            raise BadLabel(lineno, label)
        if utt_id in seen:
            raise DuplicateId(utt_id, lineno)
        seen.add(utt_id)
        if subset_label.setdefault(subset_id, label) != label:
            raise InconsistentSubsetLabel(subset_id)
        entries.append(ManifestEntry(utt_id, label, subset_id))
    return entries


def join(scores: dict[str, float], manifest: list[ManifestEntry], invert: bool = False) -> list[ScoredTrial]:
    """Attach scores to manifest entries, negating them when ``invert`` is set."""
    trials = []
    for e in manifest:
        if e.utt_id not in scores:
            raise MissingScore(e.utt_id)
        s = scores[e.utt_id]
        trials.append(ScoredTrial(e.utt_id, -s if invert else s, e.label, e.subset_id))
    unmatched = len(scores) - len(trials)
    if unmatched:
        log.warning("%d score record(s) have no manifest entry and were ignored", unmatched)
    return trials


def build_store(scores: dict[str, float], manifest: list[ManifestEntry], invert: bool = False) -> SubsetStore:
    """Group joined trials by subset into a :class:`SubsetStore`.

    Subsets keep their order of first appearance in the manifest. Use
    ``invert`` for detectors whose higher scores mean spoof.
    """
    groups: dict[str, tuple[str, list[float]]] = {}
    for t in join(scores, manifest, invert):
        groups.setdefault(t.subset_id, (t.label, []))[1].append(t.score)
    bona, spf = {}, {}
    for sid, (label, values) in groups.items():
        (bona if label == "bonafide" else spf)[sid] = LabeledScoreSet(label, values, sid)
    return SubsetStore(bona, spf)


def load_store(scores_path, manifest_path, invert: bool = False) -> SubsetStore:
    return build_store(parse_scores(scores_path), parse_manifest(manifest_path), invert)


def _utt_ids(store: SubsetStore):
    for subsets in (store.bonafide_subsets, store.spoof_subsets):
        for sid, s in subsets.items():
            for i, value in enumerate(s.scores):
                yield f"{sid}-{i:06d}", s.label, sid, float(value)


def format_scores(store: SubsetStore) -> str:
    """Serialize a store as a score file; utterance ids are synthesized."""
    return "".join(f"{utt}\t{value!r}\n" for utt, _, _, value in _utt_ids(store))


def format_manifest(store: SubsetStore) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_HEADER)
    for utt, label, sid, _ in _utt_ids(store):
        writer.writerow([utt, label, sid])
    return buf.getvalue()
