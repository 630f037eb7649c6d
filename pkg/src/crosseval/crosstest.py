"""Bona fide x spoof cross-testing, pooling and the combined-set baseline."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import metrics
from .errors import EmptySubset, UnknownSubset, ValidationError
from .metrics import EerOutcome, LabeledScoreSet
from .rng import Stream


@dataclass(frozen=True)
class SubsetStore:
    """K bona fide subsets and M spoof subsets, keyed by subset id.

    Dict insertion order is the row (bona fide) and column (spoof) order.
    """

    bonafide_subsets: dict[str, LabeledScoreSet]
    spoof_subsets: dict[str, LabeledScoreSet]

    def __post_init__(self):
        if not self.bonafide_subsets:
            raise EmptySubset("bonafide subsets")
        if not self.spoof_subsets:
            raise EmptySubset("spoof subsets")
        clash = set(self.bonafide_subsets) & set(self.spoof_subsets)
        if clash:
            raise ValidationError(f"subset ids used for both classes: {sorted(clash)}")
        for label, subsets in (("bonafide", self.bonafide_subsets), ("spoof", self.spoof_subsets)):
            for sid, s in subsets.items():
                if s.label != label:
                    raise ValidationError(f"subset {sid!r} is stored as {label} but labelled {s.label}")

    @property
    def bonafide_ids(self):
        return list(self.bonafide_subsets)

    @property
    def spoof_ids(self):
        return list(self.spoof_subsets)

    def __len__(self):
        return sum(len(s) for s in self.bonafide_subsets.values()) + sum(
            len(s) for s in self.spoof_subsets.values()
        )


@dataclass(frozen=True)
class CrossTestMatrix:
    bonafide_ids: list[str]
    spoof_ids: list[str]
    cells: list[list[EerOutcome]]  # cells[k][m]

    def __post_init__(self):
        if len(self.cells) != len(self.bonafide_ids) or any(
            len(row) != len(self.spoof_ids) for row in self.cells
        ):
            raise ValidationError("cell grid does not match the subset id lists")

    def cell(self, bonafide_id, spoof_id) -> EerOutcome:
        return self.cells[self.bonafide_ids.index(bonafide_id)][self.spoof_ids.index(spoof_id)]

    def eers(self) -> np.ndarray:
        """K x M array of EER values."""
        return np.array([[c.eer for c in row] for row in self.cells], dtype=np.float64)


@dataclass(frozen=True)
class PooledRow:
    bonafide_id: str
    max_eer: float
    argmax_spoof_id: str
    mean_eer: float


def cross_test(store: SubsetStore, parallelism: int = 1) -> CrossTestMatrix:
    """EER of every (bona fide subset, spoof subset) pair.

    Cells are independent; with ``parallelism > 1`` rows are evaluated on a
    thread pool. Results are identical to serial evaluation because each
    cell is a pure function of two read-only arrays.
    """
    bona_ids = store.bonafide_ids
    spoof_sets = list(store.spoof_subsets.values())

    def row(bid):
        b = store.bonafide_subsets[bid]
        return [metrics.eer(b, s) for s in spoof_sets]

    if parallelism > 1 and len(bona_ids) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            rows = list(pool.map(row, bona_ids))
    else:
        rows = [row(bid) for bid in bona_ids]
    return CrossTestMatrix(bona_ids, store.spoof_ids, rows)


def pooled_bonafide(store: SubsetStore) -> LabeledScoreSet:
    """All bona fide subsets of ``store`` merged into one set."""
    subsets = list(store.bonafide_subsets.values())
    if len(subsets) == 1:
        return subsets[0]
    return LabeledScoreSet("bonafide", np.concatenate([s.scores for s in subsets]), "bonafide")


def spoof_cross_test(
    bonafide_set: LabeledScoreSet, spoof_subsets: Mapping[str, LabeledScoreSet]
) -> list[EerOutcome]:
    """One bona fide set against each spoof subset, in mapping order."""
    if not spoof_subsets:
        raise EmptySubset("spoof subsets")
    return [metrics.eer(bonafide_set, s) for s in spoof_subsets.values()]


def pool(matrix: CrossTestMatrix) -> list[PooledRow]:
    """Max- and mean-pool each bona fide row over the spoof subsets.

    The argmax ties to the first spoof id in column order. Rows are never
    aggregated across bona fide subsets here.
    """
    out = []
    for bid, row in zip(matrix.bonafide_ids, matrix.cells):
        values = [c.eer for c in row]
        best = max(range(len(values)), key=lambda m: (values[m], -m))
        out.append(PooledRow(bid, values[best], matrix.spoof_ids[best], math.fsum(values) / len(values)))
    return out


def subsample_size(n: int, fraction: float) -> int:
    return max(1, math.floor(fraction * n))


def subsample(scoreset: LabeledScoreSet, fraction: float, seed: int) -> LabeledScoreSet:
    """Seeded uniform subsample without replacement.

    Keeps ``max(1, floor(fraction * n))`` scores. The random stream is keyed
    by the subset id, so the draw does not depend on which other subsets
    take part.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValidationError(f"weight for {scoreset.subset_id!r} must lie in (0, 1], got {fraction}")
    n = len(scoreset)
    k = subsample_size(n, fraction)
    if k == n:
        return scoreset
    idx = Stream(seed, f"subsample/{scoreset.subset_id}").sample_indices(n, k)
    return LabeledScoreSet(scoreset.label, scoreset.scores[idx], scoreset.subset_id)


def combine(
    spoof_subsets: Mapping[str, LabeledScoreSet],
    weights: Mapping[str, float] | None = None,
    seed: int = 0,
    subset_id: str = "combined",
) -> LabeledScoreSet:
    """Concatenate (optionally subsampled) spoof subsets into one pool."""
    if not spoof_subsets:
        raise EmptySubset("spoof subsets")
    weights = dict(weights or {})
    unknown = set(weights) - set(spoof_subsets)
    if unknown:
        raise UnknownSubset(sorted(unknown)[0])
    parts = [subsample(s, weights.get(sid, 1.0), seed).scores for sid, s in spoof_subsets.items()]
    label = next(iter(spoof_subsets.values())).label
    return LabeledScoreSet(label, np.concatenate(parts), subset_id)


def combined_eer(
    bonafide_set: LabeledScoreSet,
    spoof_subsets: Mapping[str, LabeledScoreSet],
    weights: Mapping[str, float] | None = None,
    seed: int = 0,
) -> EerOutcome:
    """Single EER over the pooled spoof subsets, the traditional evaluation.

    ``weights`` maps spoof subset ids to the fraction of that subset kept;
    absent ids keep everything.
    """
    return metrics.eer(bonafide_set, combine(spoof_subsets, weights, seed))
