import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosseval.errors import EmptySubset, NonFiniteScore
from crosseval.metrics import (
    EerOutcome,
    LabeledScoreSet,
    bonafide,
    eer,
    error_rate_curve,
    fnr_at,
    fpr_at,
    spoof,
)
from tests.oracle import brute_eer, brute_eer_float, candidates, rates

# small grid of values so that ties across and within classes are common
tied_scores = st.lists(st.integers(-6, 6).map(lambda i: i / 2), min_size=1, max_size=50)


class TestRates:
    @pytest.mark.parametrize("tau, expected", [(4.5, 0.5), (3, 0.0), (7, 1.0)])
    def test_fpr_at(self, tau, expected):
        assert fpr_at(bonafide([3, 4, 5, 6]), tau) == expected

    @pytest.mark.parametrize("tau, expected", [(4.5, 0.25), (1, 1.0), (8, 0.0)])
    def test_fnr_at(self, tau, expected):
        assert fnr_at(spoof([1, 2, 3.5, 7]), tau) == expected

    def test_wrong_label_rejected(self):
        with pytest.raises(ValueError):
            fpr_at(spoof([1.0]), 0.0)
        with pytest.raises(ValueError):
            fnr_at(bonafide([1.0]), 0.0)

    @given(tied_scores, st.floats(-4, 4))
    def test_match_oracle(self, values, tau):
        fpr, _ = rates(values, [0.0], tau)
        _, fnr = rates([0.0], values, tau)
        assert fpr_at(bonafide(values), tau) == float(fpr)
        assert fnr_at(spoof(values), tau) == float(fnr)


class TestScoreSet:
    def test_empty(self):
        with pytest.raises(EmptySubset):
            bonafide([])

    def test_empty_carries_subset_id(self):
        with pytest.raises(EmptySubset) as exc:
            spoof([], subset_id="s1_1")
        assert exc.value.subset_id == "s1_1"

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite(self, bad):
        with pytest.raises(NonFiniteScore):
            bonafide([1.0, bad])

    def test_sorted_and_read_only(self):
        s = spoof([3.0, 1.0, 2.0])
        assert s.sorted
        assert list(s.scores) == [1.0, 2.0, 3.0]
        with pytest.raises(ValueError):
            s.scores[0] = 9.0

    def test_bad_label(self):
        with pytest.raises(ValueError):
            LabeledScoreSet("genuine", [1.0])


class TestEer:
    @pytest.mark.parametrize(
        "bona, spf, expected",
        [
            ([2, 3], [0, 1], EerOutcome(0.0, 2.0, 0.0, 0.0)),
            ([3, 4, 5, 6], [1, 2, 3.5, 7], EerOutcome(0.25, 4.0, 0.25, 0.25)),
            # tie between tau=0 (0, 1) and tau=1 (1, 0); smallest tau wins
            ([0], [0], EerOutcome(0.5, 0.0, 0.0, 1.0)),
            ([0, 1], [2, 3], EerOutcome(1.0, 2.0, 1.0, 1.0)),
        ],
    )
    def test_examples(self, bona, spf, expected):
        assert eer(bonafide(bona), spoof(spf)) == expected

    def test_eer_is_mean_of_rates(self):
        out = eer(bonafide([0.1, 0.4, 0.35, 0.8]), spoof([0.3, 0.2, 0.9]))
        assert out.eer == (out.fpr_at_threshold + out.fnr_at_threshold) / 2

    def test_sentinel_for_huge_scores(self):
        out = eer(bonafide([1e300]), spoof([1e300]))
        assert out == EerOutcome(0.5, 1e300, 0.0, 1.0)
        curve = error_rate_curve(bonafide([1e17]), spoof([1e17]))
        assert curve[-1].threshold > 1e17

    @settings(max_examples=300)
    @given(tied_scores, tied_scores)
    def test_oracle_equivalence(self, bona, spf):
        out = eer(bonafide(bona), spoof(spf))
        assert (out.eer, out.threshold, out.fpr_at_threshold, out.fnr_at_threshold) == brute_eer_float(bona, spf)
        exact = brute_eer(bona, spf)[0]
        assert abs(out.eer - exact) <= math.ulp(1.0)

    @given(tied_scores, tied_scores)
    def test_gap_is_global_minimum(self, bona, spf):
        out = eer(bonafide(bona), spoof(spf))
        gap = abs(out.fpr_at_threshold - out.fnr_at_threshold)
        for tau in candidates(bona, spf):
            fpr, fnr = rates(bona, spf, tau)
            assert gap <= float(abs(fpr - fnr)) + 1e-15
        assert 0.0 <= out.eer <= 1.0

    @given(tied_scores, tied_scores, st.integers(2, 4))
    def test_replication_invariance(self, bona, spf, c):
        assert eer(bonafide(bona * c), spoof(spf * c)) == eer(bonafide(bona), spoof(spf))

    @given(tied_scores, tied_scores, st.randoms(use_true_random=False))
    def test_input_order_irrelevant(self, bona, spf, rnd):
        shuffled_b, shuffled_s = bona[:], spf[:]
        rnd.shuffle(shuffled_b)
        rnd.shuffle(shuffled_s)
        assert eer(bonafide(shuffled_b), spoof(shuffled_s)) == eer(bonafide(bona), spoof(spf))

    @pytest.mark.parametrize(
        "f",
        [lambda x: 3.0 * x + 7.0, lambda x: x**3 + x, np.exp],
        ids=["affine", "cube-plus-linear", "exp"],
    )
    @given(bona=tied_scores, spf=tied_scores)
    def test_monotone_transform_invariance(self, f, bona, spf):
        base = eer(bonafide(bona), spoof(spf))
        tb = [float(f(x)) for x in bona]
        ts = [float(f(x)) for x in spf]
        moved = eer(bonafide(tb), spoof(ts))
        assert (moved.eer, moved.fpr_at_threshold, moved.fnr_at_threshold) == (
            base.eer,
            base.fpr_at_threshold,
            base.fnr_at_threshold,
        )
        rank = lambda t, vals: int(np.searchsorted(np.union1d(*vals), t))
        assert rank(moved.threshold, (tb, ts)) == rank(base.threshold, (bona, spf))


class TestErrorRateCurve:
    def test_example(self):
        curve = error_rate_curve(bonafide([2, 3]), spoof([0, 1]))
        assert [p.threshold for p in curve] == [0, 1, 2, 3, 4]
        assert [p.fpr for p in curve] == [0, 0, 0, 0.5, 1.0]
        assert [p.fnr for p in curve] == [1.0, 0.5, 0, 0, 0]

    def test_single_shared_score(self):
        curve = error_rate_curve(bonafide([5]), spoof([5]))
        assert [(p.threshold, p.fpr, p.fnr) for p in curve] == [(5, 0, 1), (6, 1, 0)]

    @given(tied_scores, tied_scores)
    def test_shape(self, bona, spf):
        curve = error_rate_curve(bonafide(bona), spoof(spf))
        assert len(curve) == len(set(bona) | set(spf)) + 1
        fprs = [p.fpr for p in curve]
        fnrs = [p.fnr for p in curve]
        assert fprs == sorted(fprs)
        assert fnrs == sorted(fnrs, reverse=True)
        assert fprs[0] == 0.0 and fnrs[-1] == 0.0
        ts = [p.threshold for p in curve]
        assert ts == sorted(set(ts))
