"""Feature ranking, signature construction, and the nonparametric tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import f_oneway, wilcoxon

from eegworkload import (
    FeatureScore,
    LabelNotFoundError,
    ParameterError,
    SignatureDef,
    SignatureEntry,
    ZeroVarianceWarning,
    anova_f_scores,
    anova_f_values,
    benjamini_hochberg,
    build_signature,
    literature_signature,
    paired_bootstrap_f_test,
    select_top_percent,
    signature_value,
    top_k_from_percent,
    wilcoxon_signed_rank,
)


class TestAnovaF:
    def test_known_value_is_exact(self):
        """Groups {0, 1} and {2, 3} give F = 8 with no rounding."""
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        f = anova_f_values(X, [0, 0, 1, 1])
        assert f[0] == 8.0

    def test_matches_reference_implementation(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((30, 8))
        y = np.array([0] * 14 + [1] * 16)
        ours = anova_f_values(X, y)
        theirs = f_oneway(X[y == 0], X[y == 1]).statistic
        np.testing.assert_allclose(ours, theirs, rtol=1e-12)

    def test_null_mean_matches_f_distribution(self):
        """Under H0 the statistic is F(1, n-2) with mean (n-2)/(n-4)."""
        rng = np.random.default_rng(42)
        n = 24
        X = rng.standard_normal((n, 20000))
        y = np.array([0] * 12 + [1] * 12)
        f = anova_f_values(X, y)
        assert f.mean() == pytest.approx((n - 2) / (n - 4), abs=0.05)

    def test_zero_variance_sentinels(self):
        """Constant columns score 0; class-deterministic columns score +inf."""
        y = np.array([0, 0, 1, 1])
        X = np.column_stack([np.full(4, 3.0), y.astype(float)])
        f = anova_f_values(X, y)
        assert f[0] == 0.0
        assert f[1] == np.inf

    def test_each_class_needs_two_samples(self):
        with pytest.raises(ParameterError):
            anova_f_values(np.zeros((3, 1)), [0, 1, 1])

    def test_scores_align_with_columns(self):
        X = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 3.0], [3.0, 2.0]])
        scores = anova_f_scores(X, [0, 0, 1, 1], feature_names=("a", "b"))
        assert [s.feature_name for s in scores] == ["a", "b"]
        assert scores[0].f_value == 8.0
        with pytest.raises(ParameterError):
            anova_f_scores(X, [0, 0, 1, 1], feature_names=("a",))

    def test_feature_score_rejects_invalid_values(self):
        with pytest.raises(ParameterError):
            FeatureScore("x", -1.0)
        with pytest.raises(ParameterError):
            FeatureScore("x", float("nan"))


class TestTopPercentSelection:
    @pytest.mark.parametrize(
        "d, pct, expected",
        [(112, 10.0, 12), (21, 50.0, 11), (16, 25.0, 4), (10, 100.0, 10), (5, 1.0, 1)],
    )
    def test_count_is_ceiling_of_fraction(self, d, pct, expected):
        assert top_k_from_percent(d, pct) == expected

    def test_percent_bounds_validated(self):
        with pytest.raises(ParameterError):
            top_k_from_percent(10, 0.0)
        with pytest.raises(ParameterError):
            top_k_from_percent(10, 100.5)

    def test_selection_ranks_by_f_with_ties_in_input_order(self):
        scores = [
            FeatureScore("low", 1.0),
            FeatureScore("tie_a", 5.0),
            FeatureScore("tie_b", 5.0),
            FeatureScore("top", 9.0),
        ]
        assert select_top_percent(scores, 75.0) == ["top", "tie_a", "tie_b"]

    def test_empty_scores_rejected(self):
        with pytest.raises(ParameterError):
            select_top_percent([], 50.0)


class TestSignature:
    def build_inputs(self):
        rng = np.random.default_rng(0)
        y = np.array([0] * 10 + [1] * 10)
        up = rng.standard_normal(20) * 0.1 + 2.0 * y
        down = rng.standard_normal(20) * 0.1 - 2.0 * y
        noise = rng.standard_normal(20)
        X = np.column_stack([up, down, noise])
        scores = anova_f_scores(X, y, feature_names=("up", "down", "noise"))
        return X, y, scores

    def test_polarity_follows_class_mean_difference(self):
        X, y, scores = self.build_inputs()
        sig = build_signature(X, y, scores, k=2)
        by_name = {e.feature_name: e for e in sig.entries}
        assert set(by_name) == {"up", "down"}
        assert by_name["up"].polarity == 1
        assert by_name["down"].polarity == -1

    def test_entries_store_pooled_mean_and_std(self):
        X, y, scores = self.build_inputs()
        sig = build_signature(X, y, scores, k=2)
        for entry in sig.entries:
            col = X[:, [s.feature_name for s in scores].index(entry.feature_name)]
            assert entry.mean == pytest.approx(col.mean(), rel=1e-12)
            assert entry.std == pytest.approx(col.std(), rel=1e-12)

    def test_zero_polarity_difference_defaults_positive(self):
        X = np.array([[0.0], [1.0], [1.0], [0.0]])
        scores = [FeatureScore("flat_diff", 0.0)]
        sig = build_signature(X, [0, 0, 1, 1], scores, k=1)
        assert sig.entries[0].polarity == 1

    def test_zero_variance_feature_skipped_with_warning(self):
        rng = np.random.default_rng(3)
        y = np.array([0] * 6 + [1] * 6)
        X = np.column_stack([np.full(12, 7.0), rng.standard_normal(12) + y])
        scores = [FeatureScore("const", 100.0), FeatureScore("ok", 1.0)]
        with pytest.warns(ZeroVarianceWarning, match="const"):
            sig = build_signature(X, y, scores, k=1)
        assert sig.feature_names == ("ok",)

    def test_too_few_usable_features_rejected(self):
        X = np.column_stack([np.full(4, 1.0), np.full(4, 2.0)])
        scores = [FeatureScore("a", 1.0), FeatureScore("b", 1.0)]
        with pytest.warns(ZeroVarianceWarning):
            with pytest.raises(ParameterError, match="usable"):
                build_signature(X, [0, 0, 1, 1], scores, k=1)

    def test_k_bounds_and_label_requirements(self):
        X, y, scores = self.build_inputs()
        with pytest.raises(ParameterError):
            build_signature(X, y, scores, k=0)
        with pytest.raises(ParameterError):
            build_signature(X, y, scores, k=4)
        with pytest.raises(ParameterError):
            build_signature(X, np.zeros(20, dtype=int), scores, k=1)

    def test_signature_value_sums_aligned_z_scores(self):
        sig = SignatureDef(
            entries=(
                SignatureEntry("a", polarity=1, mean=2.0, std=2.0),
                SignatureEntry("b", polarity=-1, mean=1.0, std=0.5),
            )
        )
        value = signature_value(sig, {"a": 4.0, "b": 0.0})
        assert value == pytest.approx((4.0 - 2.0) / 2.0 - (0.0 - 1.0) / 0.5)
        with pytest.raises(LabelNotFoundError):
            signature_value(sig, {"a": 4.0})

    def test_entry_validation(self):
        with pytest.raises(ParameterError):
            SignatureEntry("a", polarity=0, mean=0.0, std=1.0)
        with pytest.raises(ParameterError):
            SignatureEntry("a", polarity=1, mean=0.0, std=0.0)
        with pytest.raises(ParameterError):
            SignatureDef(entries=())

    def test_literature_signature_combines_frontal_bands(self):
        vector = {"bp_delta_Fz": 2.0, "bp_theta_Fz": 3.0, "bp_alpha_Fz": 1.0}
        assert literature_signature(vector) == pytest.approx(4.0)
        with pytest.raises(LabelNotFoundError):
            literature_signature({"bp_delta_Fz": 2.0})


class TestWilcoxonSignedRank:
    def test_six_positive_differences_exact_p(self):
        """All-positive differences at n = 6 give the minimum two-sided
        exact p of 2 / 2**6."""
        result = wilcoxon_signed_rank(np.arange(1.0, 7.0), np.zeros(6))
        assert result.statistic == 21.0
        assert result.p_value == 0.03125
        assert result.n_used == 6
        assert not result.degenerate

    @pytest.mark.parametrize("m", [5, 10, 18, 25])
    def test_exact_branch_matches_reference(self, m):
        rng = np.random.default_rng(m)
        a = rng.standard_normal(m) + 0.3
        b = rng.standard_normal(m)
        ours = wilcoxon_signed_rank(a, b)
        ref = wilcoxon(
            a, b, zero_method="wilcox", alternative="two-sided", method="exact"
        )
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-12)

    def test_zero_differences_dropped(self):
        a = np.array([1.0, 2.0, 3.0, 5.0, 5.0, 5.0])
        b = np.array([0.5, 1.0, 2.0, 5.0, 5.0, 5.0])
        result = wilcoxon_signed_rank(a, b)
        assert result.n_used == 3

    def test_all_zero_differences_degenerate(self):
        a = np.ones(8)
        result = wilcoxon_signed_rank(a, a)
        assert result.degenerate
        assert result.p_value == 1.0
        assert result.statistic == 0.0
        assert result.n_used == 0

    def test_large_sample_normal_branch(self):
        """Above 25 nonzero differences the tie-corrected normal
        approximation takes over and still detects a clear shift."""
        rng = np.random.default_rng(11)
        a = rng.standard_normal(60) + 1.5
        b = rng.standard_normal(60)
        result = wilcoxon_signed_rank(a, b)
        assert result.n_used == 60
        assert result.p_value < 1e-6

    def test_two_sided_symmetry(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal(40)
        b = rng.standard_normal(40)
        assert wilcoxon_signed_rank(a, b).p_value == pytest.approx(
            wilcoxon_signed_rank(b, a).p_value, rel=1e-12
        )

    def test_input_validation(self):
        with pytest.raises(ParameterError):
            wilcoxon_signed_rank([1.0, 2.0], [1.0])
        with pytest.raises(ParameterError):
            wilcoxon_signed_rank(np.zeros((2, 2)), np.zeros((2, 2)))

    @given(st.integers(1, 12), st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_exact_p_is_valid_probability(self, m, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal(m)
        result = wilcoxon_signed_rank(a, np.zeros(m))
        assert 0.0 < result.p_value <= 1.0


class TestPairedBootstrapF:
    def test_statistic_is_squared_paired_t(self):
        a = np.array([2.0, 3.0, 5.0, 4.0])
        b = np.array([1.0, 1.0, 2.0, 2.0])
        d = a - b
        expected = (d.mean() / (d.std(ddof=1) / math.sqrt(len(d)))) ** 2
        result = paired_bootstrap_f_test(a, b, resamples=100, seed=0)
        assert result.statistic == pytest.approx(expected, rel=1e-12)

    def test_pair_order_invariance(self):
        """Shuffling the pairs leaves statistic and p untouched at the same
        seed because differences are sorted before sign-flipping."""
        rng = np.random.default_rng(8)
        a = rng.standard_normal(20) + 0.4
        b = rng.standard_normal(20)
        perm = rng.permutation(20)
        first = paired_bootstrap_f_test(a, b, resamples=500, seed=3)
        second = paired_bootstrap_f_test(a[perm], b[perm], resamples=500, seed=3)
        assert first.statistic == second.statistic
        assert first.p_value == second.p_value

    def test_seed_reproducibility(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal(15) + 0.2
        b = rng.standard_normal(15)
        p1 = paired_bootstrap_f_test(a, b, resamples=400, seed=5).p_value
        p2 = paired_bootstrap_f_test(a, b, resamples=400, seed=5).p_value
        assert p1 == p2

    def test_identical_inputs_degenerate(self):
        a = np.arange(6.0)
        result = paired_bootstrap_f_test(a, a, resamples=100, seed=0)
        assert result.degenerate
        assert result.statistic == 0.0
        assert result.p_value == 1.0

    def test_constant_nonzero_shift_degenerate(self):
        a = np.arange(6.0)
        result = paired_bootstrap_f_test(a, a - 2.0, resamples=99, seed=0)
        assert result.degenerate
        assert result.statistic == math.inf
        assert result.p_value == 1.0 / 100.0

    def test_clear_shift_reaches_floor(self):
        """A strong effect cannot beat the add-one lower bound on p."""
        rng = np.random.default_rng(2)
        a = rng.standard_normal(30) + 5.0
        b = rng.standard_normal(30)
        result = paired_bootstrap_f_test(a, b, resamples=999, seed=1)
        assert result.p_value >= 1.0 / 1000.0
        assert result.p_value < 0.01

    def test_input_validation(self):
        with pytest.raises(ParameterError):
            paired_bootstrap_f_test([1.0], [0.0])
        with pytest.raises(ParameterError):
            paired_bootstrap_f_test([1.0, 2.0], [0.0, 1.0], resamples=0)
        with pytest.raises(ParameterError):
            paired_bootstrap_f_test([1.0, 2.0], [0.0])


class TestBenjaminiHochberg:
    def test_equally_spaced_quartet_collapses(self):
        """p = (0.01, 0.02, 0.03, 0.04) adjusts to 0.04 in every position,
        bit for bit."""
        adjusted = benjamini_hochberg([0.01, 0.02, 0.03, 0.04])
        assert adjusted.tolist() == [0.04, 0.04, 0.04, 0.04]

    def test_step_up_hand_example(self):
        adjusted = benjamini_hochberg([0.005, 0.011, 0.02, 0.04])
        np.testing.assert_allclose(
            adjusted, [0.02, 0.022, 4 * 0.02 / 3, 0.04], rtol=1e-12
        )

    def test_input_order_preserved(self):
        p = np.array([0.04, 0.005, 0.02, 0.011])
        adjusted = benjamini_hochberg(p)
        np.testing.assert_allclose(
            adjusted, [0.04, 0.02, 4 * 0.02 / 3, 0.022], rtol=1e-12
        )

    def test_clipped_to_one(self):
        adjusted = benjamini_hochberg([0.9, 0.95, 1.0])
        assert np.all(adjusted <= 1.0)
        assert adjusted[-1] == 1.0

    def test_adjusted_never_below_raw(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            p = rng.uniform(size=rng.integers(1, 40))
            adjusted = benjamini_hochberg(p)
            assert np.all(adjusted >= p - 1e-15)
            order = np.argsort(p, kind="stable")
            assert np.all(np.diff(adjusted[order]) >= -1e-15)

    def test_empty_and_invalid_inputs(self):
        assert benjamini_hochberg([]).size == 0
        with pytest.raises(ParameterError):
            benjamini_hochberg([0.5, 1.5])
        with pytest.raises(ParameterError):
            benjamini_hochberg([-0.1])
        with pytest.raises(ParameterError):
            benjamini_hochberg([[0.1]])
        with pytest.raises(ParameterError):
            benjamini_hochberg([np.nan])
