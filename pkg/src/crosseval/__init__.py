"""Bona fide x spoof cross-testing for audio deepfake detectors.

Computes per-pair equal error rates between bona fide and spoof score
subsets, pools them per bona fide type, and reproduces the threshold drift
that subset imbalance causes in combined test sets.
"""

from .crosstest import (
    CrossTestMatrix,
    PooledRow,
    SubsetStore,
    combined_eer,
    cross_test,
    pool,
    spoof_cross_test,
)
from .metrics import (
    EerOutcome,
    ErrorRatePoint,
    LabeledScoreSet,
    bonafide,
    eer,
    error_rate_curve,
    fnr_at,
    fpr_at,
    spoof,
)

__version__ = "0.1.0"
