import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peereval.errors import DomainError, InsufficientDataError
from peereval.metaeval import (
    GROUPS,
    PairwiseTally,
    compare_metrics,
    correlate_pair,
    fisher_weighted_average,
    mad_outliers,
    metric_report,
    paired_ttest,
    pairwise_compare,
    pairwise_decisions,
    pearson,
    subsample_correlations,
    wilcoxon_ranksum,
    williams_test,
)


class TestMadOutliers:
    def test_worked_example(self):
        scores = {"A": 0.1, "B": 0.2, "C": 0.25, "D": 0.3, "E": 0.9}
        kept, outliers = mad_outliers(scores)
        assert outliers == {"E"}
        assert kept == {"A", "B", "C", "D"}
        # ratio arithmetic behind the split
        assert abs(0.9 - 0.25) / (1.483 * 0.05) > 2.5
        assert abs(0.1 - 0.25) / (1.483 * 0.05) <= 2.5

    def test_all_equal_no_outliers(self):
        kept, outliers = mad_outliers({"A": 0.5, "B": 0.5, "C": 0.5})
        assert outliers == set()
        assert kept == {"A", "B", "C"}

    def test_mad_zero_convention(self):
        # zero MAD: every nonzero deviation is an outlier
        scores = {"A": 1.0, "B": 1.0, "C": 1.0, "D": 1.0, "E": 3.0}
        kept, outliers = mad_outliers(scores)
        assert outliers == {"E"}

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            mad_outliers({})

    @given(st.floats(min_value=0.001, max_value=100),
           st.floats(min_value=-50, max_value=50))
    @settings(max_examples=50, deadline=None)
    def test_affine_invariance(self, scale, shift):
        scores = {"A": 0.1, "B": 0.2, "C": 0.25, "D": 0.3, "E": 0.9, "F": 0.22}
        base = mad_outliers(scores)
        transformed = mad_outliers({k: scale * v + shift
                                    for k, v in scores.items()})
        assert base == transformed


class TestPearson:
    def test_exact_linear(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_oracle_table(self, stats_oracle):
        for case in stats_oracle["pearson"]:
            assert pearson(case["x"], case["y"]) == \
                pytest.approx(case["r"], abs=1e-6)

    def test_zero_variance_rejected(self):
        with pytest.raises(DomainError):
            pearson([1, 1, 1], [1, 2, 3])
        with pytest.raises(DomainError):
            pearson([1, 2, 3], [4, 4, 4])

    @given(st.lists(st.tuples(
        st.floats(min_value=-100, max_value=100),
        st.floats(min_value=-100, max_value=100)), min_size=3, max_size=30),
        st.floats(min_value=0.01, max_value=50),
        st.floats(min_value=-100, max_value=100))
    @settings(max_examples=60, deadline=None)
    def test_affine_invariance(self, pairs, scale, shift):
        x = [p[0] for p in pairs]
        y = [p[1] for p in pairs]
        try:
            base = pearson(x, y)
        except DomainError:
            return
        assert pearson([scale * v + shift for v in x], y) == \
            pytest.approx(base, abs=1e-12)
        assert pearson([-scale * v for v in x], y) == \
            pytest.approx(-base, abs=1e-12)


class TestFisherAverage:
    def test_fixed_point(self):
        assert fisher_weighted_average([(0.5, 1), (0.5, 2), (0.5, 9)]) == \
            pytest.approx(0.5, abs=1e-15)

    def test_single_identity(self):
        assert fisher_weighted_average([(0.0, 7)]) == 0.0
        assert fisher_weighted_average([(0.37, 3)]) == pytest.approx(0.37)

    def test_oracle_table(self, stats_oracle):
        for case in stats_oracle["fisher"]:
            got = fisher_weighted_average(list(zip(case["r"], case["w"])))
            assert got == pytest.approx(case["avg"], abs=1e-6)

    def test_clamps_unit_correlation(self):
        with pytest.warns(UserWarning):
            value = fisher_weighted_average([(1.0, 1), (0.5, 1)])
        assert 0.5 < value < 1.0

    def test_bounded_by_inputs(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            rs = rng.uniform(-0.95, 0.95, size=rng.integers(1, 6))
            ws = rng.integers(1, 20, size=len(rs)).astype(float)
            avg = fisher_weighted_average(list(zip(rs, ws)))
            assert rs.min() - 1e-12 <= avg <= rs.max() + 1e-12

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            fisher_weighted_average([])


class TestWilliams:
    def test_symmetric_null(self):
        t, p = williams_test(0.7, 0.7, 0.5, 10)
        assert t == 0.0
        assert p == pytest.approx(0.5)

    def test_antisymmetry(self):
        t1, _ = williams_test(0.9, 0.6, 0.5, 14)
        t2, _ = williams_test(0.6, 0.9, 0.5, 14)
        assert t1 == pytest.approx(-t2, abs=1e-15)

    def test_oracle_table(self, stats_oracle):
        for case in stats_oracle["williams"]:
            t, p = williams_test(case["r1h"], case["r2h"], case["r12"],
                                 case["n"], tails=case["tails"])
            assert t == pytest.approx(case["t"], abs=1e-6)
            assert p == pytest.approx(case["p"], abs=1e-6)

    def test_needs_four_systems(self):
        with pytest.raises(InsufficientDataError):
            williams_test(0.9, 0.8, 0.7, 3)

    def test_degenerate_matrix_rejected(self):
        # |r12| = 1 with distinct r1h/r2h makes the determinant negative
        with pytest.raises(InsufficientDataError):
            williams_test(0.9, 0.2, 1.0, 10)

    def test_p_monotone_in_t(self):
        ps = []
        for r1h in (0.80, 0.85, 0.90, 0.95):
            _, p = williams_test(r1h, 0.75, 0.5, 12)
            ps.append(p)
        assert ps == sorted(ps, reverse=True)


class TestWilcoxon:
    def test_oracle_table(self, stats_oracle):
        for case in stats_oracle["wilcoxon"]:
            w, p = wilcoxon_ranksum(case["x"], case["y"])
            assert w == pytest.approx(case["w"], abs=1e-9)
            assert p == pytest.approx(case["p"], abs=1e-6)

    def test_identical_samples_not_significant(self):
        w, p = wilcoxon_ranksum([1.0, 1.0, 1.0], [1.0, 1.0])
        assert p == 1.0

    def test_separated_samples_significant(self):
        _, p = wilcoxon_ranksum(list(range(30)), list(range(100, 130)))
        assert p < 1e-6

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            wilcoxon_ranksum([], [1.0])


class TestPairedT:
    def test_oracle_table(self, stats_oracle):
        for case in stats_oracle["paired_t"]:
            t, p = paired_ttest(case["x"], case["y"])
            assert t == pytest.approx(case["t"], abs=1e-6)
            assert p == pytest.approx(case["p"], abs=1e-6)

    def test_identical_vectors(self):
        t, p = paired_ttest([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert (t, p) == (0.0, 1.0)

    def test_constant_nonzero_difference(self):
        t, p = paired_ttest([2.0, 3.0, 4.0], [1.0, 2.0, 3.0])
        assert math.isinf(t) and t > 0
        assert p == 0.0


class TestMetricReport:
    def test_perfect_metric(self):
        human = {"xa-xb": {"A": 0.1, "B": 0.4, "C": 0.2, "D": 0.35}}
        metric = {("xa-xb", s): v for s, v in human["xa-xb"].items()}
        with pytest.warns(UserWarning):
            report = metric_report(human, metric)
        assert report.per_pair[0].r == pytest.approx(1.0)
        assert report.weighted_average == pytest.approx(1.0, abs=1e-6)

    def test_two_pair_weighted_average(self, stats_oracle):
        # engineered so pair 1 has r=0.8 over 8 systems, pair 2 r=0.9 over 16
        rng = np.random.default_rng(1)

        def correlated_vectors(n, r):
            x = rng.normal(size=n)
            y = r * x + math.sqrt(1 - r * r) * rng.normal(size=n)
            # orthogonalize to hit r exactly
            x = (x - x.mean()) / x.std()
            y = y - y.mean()
            y -= x * (x @ y) / (x @ x) - r * x * np.linalg.norm(
                y - x * (x @ y) / (x @ x)) / np.linalg.norm(x) * 0
            return x, y

        # simpler: construct exact-r pairs analytically
        def exact_r(n, r):
            x = rng.normal(size=n)
            x = (x - x.mean()) / x.std()
            e = rng.normal(size=n)
            e = e - e.mean()
            e -= x * (x @ e) / (x @ x)
            e /= np.linalg.norm(e)
            y = r * x / np.linalg.norm(x) + math.sqrt(1 - r * r) * e
            return x, y

        human, metric = {}, {}
        for lp, n, r in (("xa-xb", 8, 0.8), ("xc-xd", 16, 0.9)):
            x, y = exact_r(n, r)
            # keep spreads tiny so the MAD filter keeps everything
            names = [f"s{i}" for i in range(n)]
            human[lp] = dict(zip(names, x))
            metric.update({(lp, name): y[i] for i, name in enumerate(names)})
            assert pearson(list(human[lp].values()),
                           [metric[(lp, nm)] for nm in names]) == \
                pytest.approx(r, abs=1e-12)
            assert mad_outliers(human[lp])[1] == set()
        report = metric_report(human, metric)
        expected = math.tanh((8 * math.atanh(0.8) + 16 * math.atanh(0.9)) / 24)
        assert report.weighted_average == pytest.approx(expected, abs=1e-9)

    def test_groups_partition_and_all_consistency(self):
        rng = np.random.default_rng(5)
        human, metric = {}, {}
        for lp in ("en-de", "en-fi", "de-en", "de-fr"):
            names = [f"s{i}" for i in range(6)]
            h = rng.normal(size=6)
            m = h + rng.normal(scale=0.5, size=6)
            human[lp] = dict(zip(names, h))
            metric.update({(lp, nm): m[i] for i, nm in enumerate(names)})
        report = metric_report(human, metric)
        group_of = {res.lang_pair: res for res in report.per_pair}
        member_counts = sum(
            sum(1 for res in report.per_pair
                if __import__("peereval.data", fromlist=["lang_pair_group"])
                .lang_pair_group(res.lang_pair) == g)
            for g in GROUPS[1:]
        )
        assert member_counts == len(report.per_pair)
        # recomputing "all" from the union of the groups' inputs is bitwise
        usable = [(res.r, float(res.n_systems)) for res in report.per_pair
                  if res.reliable]
        assert fisher_weighted_average(usable) == report.weighted_average

    def test_small_pair_flagged_unreliable_and_excluded(self):
        human = {
            "xa-xb": {"A": 0.0, "B": 1.0, "C": 2.0},       # 3 systems
            "xc-xd": {f"s{i}": float(i) for i in range(6)},
        }
        metric = {(lp, s): v + 0.01 for lp, scores in human.items()
                  for s, v in scores.items()}
        with pytest.warns(UserWarning):
            report = metric_report(human, metric)
        small = report.result_for("xa-xb")
        assert not small.reliable
        big = report.result_for("xc-xd")
        assert big.reliable
        # average over the one reliable pair only
        assert report.weighted_average == pytest.approx(
            fisher_weighted_average([(big.r, big.n_systems)]))

    def test_missing_metric_score_named(self):
        human = {"xa-xb": {"A": 0.0, "B": 1.0}}
        with pytest.raises(InsufficientDataError, match="B"):
            correlate_pair(human["xa-xb"], {"A": 0.5}, "xa-xb")

    def test_outliers_dropped_before_correlation(self):
        human = {"A": 0.1, "B": 0.2, "C": 0.25, "D": 0.3, "E": 0.9}
        # metric wildly wrong on the outlier only; correlation unaffected
        metric = {"A": 0.1, "B": 0.2, "C": 0.25, "D": 0.3, "E": -5.0}
        res = correlate_pair(human, metric, "xa-xb")
        assert res.outliers == ("E",)
        assert res.n_systems == 4
        assert res.r == pytest.approx(1.0)


class TestCompareMetrics:
    def test_equal_metrics_tie(self):
        rng = np.random.default_rng(3)
        names = [f"s{i}" for i in range(8)]
        h = rng.normal(size=8)
        m = h + rng.normal(scale=0.4, size=8)
        human = {"xa-xb": dict(zip(names, h))}
        scores = {("xa-xb", nm): m[i] for i, nm in enumerate(names)}
        comps = compare_metrics(human, scores, scores, tails=1)
        assert len(comps) == 1
        assert comps[0].t == 0.0
        assert comps[0].p == pytest.approx(0.5)

    def test_two_tailed_doubles(self):
        rng = np.random.default_rng(4)
        names = [f"s{i}" for i in range(10)]
        h = rng.normal(size=10)
        a = h + rng.normal(scale=0.2, size=10)
        b = h + rng.normal(scale=0.8, size=10)
        human = {"xa-xb": dict(zip(names, h))}
        sa = {("xa-xb", nm): a[i] for i, nm in enumerate(names)}
        sb = {("xa-xb", nm): b[i] for i, nm in enumerate(names)}
        one = compare_metrics(human, sa, sb, tails=1)[0]
        two = compare_metrics(human, sa, sb, tails=2)[0]
        assert one.t == two.t
        if one.t > 0:
            assert two.p == pytest.approx(2 * one.p)


class TestPairwise:
    def test_counting_identity(self):
        rng = np.random.default_rng(9)
        n_systems, n_segs = 6, 40
        metric = {f"s{i}": rng.normal(size=n_segs) for i in range(n_systems)}
        human = {f"s{i}": rng.normal(size=n_segs) for i in range(n_systems)}
        tally = pairwise_compare(metric, human)
        assert tally.total == n_systems * (n_systems - 1) // 2

    def test_identical_systems_all_ns(self):
        scores = np.zeros(30)
        metric = {"A": scores, "B": scores}
        human = {"A": scores, "B": scores}
        tally = pairwise_compare(metric, human)
        assert tally.ns_metric_ns == 1
        assert tally.total == 1

    def test_maximal_separation_correct(self):
        # A beats B by +1 on every segment for both human and metric
        base = np.linspace(0, 1, 50)
        metric = {"A": base + 1.0, "B": base}
        human = {"A": base + 1.0, "B": base}
        tally = pairwise_compare(metric, human)
        assert tally.sig_correct == 1
        assert tally.total == 1

    def test_sign_disagreement_incorrect(self):
        base = np.linspace(0, 1, 50)
        metric = {"A": base, "B": base + 1.0}      # metric prefers B
        human = {"A": base + 1.0, "B": base}       # humans prefer A
        tally = pairwise_compare(metric, human)
        assert tally.sig_incorrect == 1

    def test_relabeling_invariant(self):
        rng = np.random.default_rng(21)
        a = rng.normal(size=60)
        b = a + 0.8 + rng.normal(scale=0.2, size=60)
        forward = pairwise_compare({"A": a, "B": b}, {"A": a, "B": b})
        swapped = pairwise_compare({"A": b, "B": a}, {"A": b, "B": a})
        assert forward == swapped

    def test_decisions_expose_pair_detail(self):
        base = np.linspace(0, 1, 50)
        decisions = pairwise_decisions({"A": base + 1.0, "B": base},
                                       {"A": base + 1.0, "B": base})
        assert len(decisions) == 1
        assert decisions[0].human_significant
        assert decisions[0].metric_significant
        assert decisions[0].agree

    def test_mismatched_systems_rejected(self):
        with pytest.raises(InsufficientDataError):
            pairwise_compare({"A": [1.0, 2.0]}, {"B": [1.0, 2.0]})


class TestSubsample:
    def make_fixture(self, n_systems=8, n_segs=200, noise=2.0, seed=0):
        rng = np.random.default_rng(seed)
        quality = np.linspace(0, 1, n_systems)
        human = {f"s{i}": float(q) for i, q in enumerate(quality)}
        metric = {
            f"s{i}": quality[i] + rng.normal(scale=noise, size=n_segs)
            for i in range(n_systems)
        }
        return human, metric

    def test_full_size_equals_full_correlation(self):
        human, metric = self.make_fixture()
        full = pearson([metric[s].mean() for s in sorted(metric)],
                       [human[s] for s in sorted(human)])
        curve = subsample_correlations(human, metric, sizes=[200], draws=5)
        assert curve[200] == pytest.approx(full, abs=1e-12)

    def test_deterministic_given_seed(self):
        human, metric = self.make_fixture()
        a = subsample_correlations(human, metric, [50, 100], draws=10, seed=3)
        b = subsample_correlations(human, metric, [50, 100], draws=10, seed=3)
        assert a == b
        c = subsample_correlations(human, metric, [50, 100], draws=10, seed=4)
        assert a != c

    def test_size_order_independent(self):
        human, metric = self.make_fixture()
        fwd = subsample_correlations(human, metric, [50, 100], draws=5, seed=1)
        rev = subsample_correlations(human, metric, [100, 50], draws=5, seed=1)
        assert fwd == rev

    def test_oversize_rejected(self):
        human, metric = self.make_fixture(n_segs=50)
        with pytest.raises(DomainError):
            subsample_correlations(human, metric, [51])


def test_tally_addition():
    a = PairwiseTally(1, 2, 3, 4, 5, 6)
    b = PairwiseTally(10, 0, 0, 0, 0, 1)
    c = a + b
    assert c.sig_correct == 11 and c.ns_metric_ns == 7
    assert c.total == a.total + b.total
