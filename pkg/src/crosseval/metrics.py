"""False positive / false negative rates and the equal error rate.

Conventions follow the anti-spoofing literature: *spoof* is the positive
class, *bona fide* the negative class, and a detector gives bona fide audio
the higher score. For a threshold ``tau``:

* FPR(tau) = fraction of bona fide scores strictly below ``tau``
* FNR(tau) = fraction of spoof scores greater than or equal to ``tau``

Both are step functions that only change at observed scores, so the EER
search is exact over the finite candidate set made of every distinct pooled
score plus one sentinel above the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import EmptySubset, NonFiniteScore

Label = Literal["bonafide", "spoof"]
LABELS = ("bonafide", "spoof")


@dataclass(frozen=True)
class LabeledScoreSet:
    """Scores of one labelled subset, stored ascending and read-only.

    Construction sorts the input, so ``sorted`` is always ``True`` for
    instances built through the constructor; the flag is kept so callers
    can assert the invariant cheaply.
    """

    label: Label
    scores: np.ndarray
    subset_id: str | None = None
    sorted: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")
        arr = np.asarray(self.scores, dtype=np.float64).ravel()
        if arr.size == 0:
            raise EmptySubset(self.subset_id)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteScore(f"subset {self.subset_id!r}" if self.subset_id else "")
        arr = np.sort(arr, kind="stable")
        arr.setflags(write=False)
        object.__setattr__(self, "scores", arr)

    def __len__(self):
        return self.scores.size

    def __eq__(self, other):
        if not isinstance(other, LabeledScoreSet):
            return NotImplemented
        return (
            self.label == other.label
            and self.subset_id == other.subset_id
            and np.array_equal(self.scores, other.scores)
        )

    __hash__ = None


def bonafide(scores, subset_id=None) -> LabeledScoreSet:
    return LabeledScoreSet("bonafide", scores, subset_id)


def spoof(scores, subset_id=None) -> LabeledScoreSet:
    return LabeledScoreSet("spoof", scores, subset_id)


@dataclass(frozen=True)
class ErrorRatePoint:
    threshold: float
    fpr: float
    fnr: float


@dataclass(frozen=True)
class EerOutcome:
    """Result of one EER search.

    ``eer`` is a fraction in [0, 1] and always equals the mean of
    ``fpr_at_threshold`` and ``fnr_at_threshold``.
    """

    eer: float
    threshold: float
    fpr_at_threshold: float
    fnr_at_threshold: float

    def as_dict(self):
        return {
            "eer": self.eer,
            "threshold": self.threshold,
            "fpr": self.fpr_at_threshold,
            "fnr": self.fnr_at_threshold,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["eer"]), float(d["threshold"]), float(d["fpr"]), float(d["fnr"]))


def _check(scoreset, label):
    if scoreset.label != label:
        raise ValueError(f"expected a {label} set, got {scoreset.label}")


def fpr_at(bonafide_set: LabeledScoreSet, tau: float) -> float:
    """Fraction of bona fide scores strictly below ``tau``."""
    _check(bonafide_set, "bonafide")
    below = np.searchsorted(bonafide_set.scores, tau, side="left")
    return int(below) / len(bonafide_set)


def fnr_at(spoof_set: LabeledScoreSet, tau: float) -> float:
    """Fraction of spoof scores at or above ``tau``."""
    _check(spoof_set, "spoof")
    below = np.searchsorted(spoof_set.scores, tau, side="left")
    return (len(spoof_set) - int(below)) / len(spoof_set)


def sentinel_above(x: float) -> float:
    """``x + 1``, or the next float up when adding 1 is absorbed by rounding."""
    up = x + 1.0
    return up if up > x else float(np.nextafter(x, np.inf))


def candidate_thresholds(bona: np.ndarray, spf: np.ndarray) -> np.ndarray:
    """Distinct pooled scores plus a sentinel above the maximum, ascending."""
    pooled = np.union1d(bona, spf)
    return np.append(pooled, sentinel_above(float(pooled[-1])))


def _counts(bona, spf, candidates):
    # bona/spf sorted ascending
    fp = np.searchsorted(bona, candidates, side="left").astype(np.int64)
    fn = spf.size - np.searchsorted(spf, candidates, side="left").astype(np.int64)
    return fp, fn


def select_threshold(fp, fn, n_bona, n_spoof):
    """Index of the EER operating point given FP/FN counts per candidate.

    Candidates must be in ascending threshold order. The criterion is
    ``|FPR - FNR|``, then ``FPR + FNR``, then the smallest threshold, all
    compared as cross-multiplied integers so ties are exact.
    """
    a = fp * n_spoof
    b = fn * n_bona
    gap = np.abs(a - b)
    total = np.where(gap == gap.min(), a + b, np.iinfo(np.int64).max)
    return int(np.argmin(total))


def eer(bonafide_set: LabeledScoreSet, spoof_set: LabeledScoreSet) -> EerOutcome:
    """Equal error rate of one bona fide set against one spoof set.

    Examples:
        >>> eer(bonafide([3, 4, 5, 6]), spoof([1, 2, 3.5, 7]))
        EerOutcome(eer=0.25, threshold=4.0, fpr_at_threshold=0.25, fnr_at_threshold=0.25)
    """
    _check(bonafide_set, "bonafide")
    _check(spoof_set, "spoof")
    bona, spf = bonafide_set.scores, spoof_set.scores
    candidates = candidate_thresholds(bona, spf)
    fp, fn = _counts(bona, spf, candidates)
    i = select_threshold(fp, fn, bona.size, spf.size)
    fpr = int(fp[i]) / bona.size
    fnr = int(fn[i]) / spf.size
    return EerOutcome((fpr + fnr) / 2, float(candidates[i]), fpr, fnr)


def error_rate_curve(bonafide_set: LabeledScoreSet, spoof_set: LabeledScoreSet) -> list[ErrorRatePoint]:
    """FPR and FNR at every candidate threshold, ascending in threshold."""
    _check(bonafide_set, "bonafide")
    _check(spoof_set, "spoof")
    bona, spf = bonafide_set.scores, spoof_set.scores
    candidates = candidate_thresholds(bona, spf)
    fp, fn = _counts(bona, spf, candidates)
    return [
        ErrorRatePoint(float(t), int(p) / bona.size, int(q) / spf.size)
        for t, p, q in zip(candidates, fp, fn)
    ]
