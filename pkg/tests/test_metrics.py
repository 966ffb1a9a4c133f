"""Cover container, ONMI, purity, pair metrics, Spearman, membership files."""

from __future__ import annotations

import io
import math
import random

import pytest
import scipy.stats
from hypothesis import given, strategies as st

from netsig import (
    Cover,
    GraphParseError,
    PairConfusion,
    cover_from_memberships,
    evaluate_covers,
    f_measure,
    load_membership_file,
    onmi,
    pair_confusion,
    precision,
    purity,
    rand_index,
    recall,
    spearman,
)
from .oracles import onmi_reference, pair_counts_reference, random_cover, spearman_reference


def cover(n, *communities) -> Cover:
    return Cover(tuple(frozenset(c) for c in communities), n)


class TestCover:
    def test_basic_accessors(self):
        c = cover(6, {0, 1, 2}, {2, 3})
        assert c.count == 2
        assert c.covered_nodes() == {0, 1, 2, 3}

    def test_validation(self):
        with pytest.raises(ValueError, match="non-empty"):
            cover(4, set())
        with pytest.raises(ValueError, match="outside universe"):
            cover(4, {0, 4})
        with pytest.raises(ValueError, match="universe_size"):
            Cover((), 0)

    def test_restrict_reindexes_and_drops_empties(self):
        c = cover(6, {0, 1, 2}, {4, 5}, {2, 3})
        r = c.restrict(frozenset({1, 2, 3}))
        assert r.universe_size == 3
        # sub-universe order is sorted: 1->0, 2->1, 3->2
        assert r.communities == (frozenset({0, 1}), frozenset({1, 2}))


class TestOnmi:
    def test_identical_covers_score_one(self):
        c = cover(8, {0, 1, 2}, {3, 4}, {5, 6, 7})
        assert onmi(c, c) == pytest.approx(1.0, abs=1e-12)

    def test_whole_universe_community_halves_the_score(self):
        x = cover(4, {0, 1}, {2, 3})
        y = cover(4, {0, 1, 2, 3})
        # y's single community is degenerate (entropy 0), contributing 0 to
        # its side, while x's communities remain fully unexplained by y
        assert onmi(x, y) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric(self):
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randrange(4, 20)
            x = Cover(tuple(random_cover(rng, n)), n)
            y = Cover(tuple(random_cover(rng, n)), n)
            assert onmi(x, y) == pytest.approx(onmi(y, x), abs=1e-12)

    def test_matches_literal_transcription(self):
        rng = random.Random(17)
        for _ in range(60):
            n = rng.randrange(3, 31)
            x = Cover(tuple(random_cover(rng, n)), n)
            y = Cover(tuple(random_cover(rng, n)), n)
            expected = onmi_reference(x.communities, y.communities, n)
            assert onmi(x, y) == pytest.approx(expected, abs=1e-12)

    @given(st.integers(0, 2**32 - 1))
    def test_range_is_zero_to_one(self, seed):
        rng = random.Random(seed)
        n = rng.randrange(2, 25)
        x = Cover(tuple(random_cover(rng, n)), n)
        y = Cover(tuple(random_cover(rng, n)), n)
        value = onmi(x, y)
        assert -1e-12 <= value <= 1.0 + 1e-12

    def test_empty_cover_scores_zero(self):
        x = cover(4, {0, 1})
        empty = Cover((), 4)
        assert onmi(x, empty) == 0.0
        assert onmi(empty, x) == 0.0

    def test_universe_mismatch(self):
        with pytest.raises(ValueError, match="different universes"):
            onmi(cover(4, {0}), cover(5, {0}))


class TestPurity:
    def test_perfect_match(self):
        det = cover(6, {0, 1, 2}, {3, 4, 5})
        assert purity(det, det) == 1.0

    def test_one_block_against_two_halves(self):
        det = cover(8, set(range(8)))
        truth = cover(8, {0, 1, 2, 3}, {4, 5, 6, 7})
        assert purity(det, truth) == 0.5

    def test_overlapping_detection_can_exceed_one(self):
        det = cover(4, {0, 1, 2, 3}, {0, 1, 2, 3})
        truth = cover(4, {0, 1, 2, 3})
        assert purity(det, truth) == 2.0

    def test_empty_detection_scores_zero(self):
        truth = cover(4, {0, 1})
        assert purity(Cover((), 4), truth) == 0.0


class TestPairMetrics:
    def test_hand_worked_confusion(self):
        det = cover(6, {0, 1})  # nodes 2..5 uncovered -> singletons
        truth = cover(6, {0, 1, 2}, {3, 4, 5})
        pc = pair_confusion(det, truth)
        assert (pc.tp, pc.fp, pc.fn, pc.tn) == (1, 0, 5, 9)
        assert pc.total == 15
        assert rand_index(pc) == pytest.approx(10 / 15)
        assert precision(pc) == 1.0
        assert recall(pc) == pytest.approx(1 / 6)
        assert f_measure(pc) == pytest.approx(2 / 7)

    def test_swapping_arguments_swaps_fp_and_fn(self):
        det = cover(6, {0, 1})
        truth = cover(6, {0, 1, 2}, {3, 4, 5})
        a = pair_confusion(det, truth)
        b = pair_confusion(truth, det)
        assert (a.tp, a.tn) == (b.tp, b.tn)
        assert (a.fp, a.fn) == (b.fn, b.fp)

    def test_matches_double_loop_reference(self):
        rng = random.Random(29)
        for _ in range(40):
            n = rng.randrange(2, 13)
            det = Cover(tuple(random_cover(rng, n)), n)
            truth = Cover(tuple(random_cover(rng, n)), n)
            pc = pair_confusion(det, truth)
            assert (pc.tp, pc.fp, pc.fn, pc.tn) == pair_counts_reference(
                det.communities, truth.communities, n
            )

    def test_empty_covers_are_all_negative(self):
        pc = pair_confusion(Cover((), 5), Cover((), 5))
        assert (pc.tp, pc.fp, pc.fn, pc.tn) == (0, 0, 0, 10)
        assert rand_index(pc) == 1.0
        assert precision(pc) == 0.0
        assert recall(pc) == 0.0
        assert f_measure(pc) == 0.0

    def test_single_node_universe_has_no_pairs(self):
        pc = pair_confusion(cover(1, {0}), cover(1, {0}))
        with pytest.raises(ValueError, match="no node pairs"):
            rand_index(pc)

    @given(st.integers(0, 2**32 - 1))
    def test_counts_partition_all_pairs(self, seed):
        rng = random.Random(seed)
        n = rng.randrange(2, 40)
        det = Cover(tuple(random_cover(rng, n)), n)
        truth = Cover(tuple(random_cover(rng, n)), n)
        pc = pair_confusion(det, truth)
        assert pc.total == n * (n - 1) // 2
        assert min(pc.tp, pc.fp, pc.fn, pc.tn) >= 0


class TestSpearman:
    def test_exact_plus_and_minus_one(self):
        assert spearman([1.0, 2.0, 3.0], [10.0, 20.0, 31.0]) == 1.0
        assert spearman([1.0, 2.0, 3.0], [5.0, 4.0, 3.0]) == -1.0

    def test_tied_ranks_match_scipy_and_reference(self):
        xs = [1.0, 2.0, 2.0, 3.0]
        ys = [1.0, 3.0, 2.0, 4.0]
        expected = scipy.stats.spearmanr(xs, ys).statistic
        assert spearman(xs, ys) == pytest.approx(expected, abs=1e-12)
        assert spearman(xs, ys) == pytest.approx(spearman_reference(xs, ys), abs=1e-12)
        assert spearman(xs, ys) == pytest.approx(math.sqrt(0.9), abs=1e-12)

    def test_random_inputs_match_scipy(self):
        rng = random.Random(31)
        for _ in range(25):
            n = rng.randrange(3, 12)
            xs = [rng.randrange(0, 6) * 1.0 for _ in range(n)]
            ys = [rng.randrange(0, 6) * 1.0 for _ in range(n)]
            if len(set(xs)) < 2 or len(set(ys)) < 2:
                continue
            expected = scipy.stats.spearmanr(xs, ys).statistic
            assert spearman(xs, ys) == pytest.approx(expected, abs=1e-12)

    def test_invariant_under_strictly_increasing_transform(self):
        xs = [0.3, -1.0, 2.5, 2.5, 0.0]
        ys = [4.0, 2.0, 0.5, 1.0, 3.0]
        base = spearman(xs, ys)
        assert spearman([x**3 for x in xs], ys) == pytest.approx(base, abs=1e-15)
        assert spearman(xs, [math.exp(y) for y in ys]) == pytest.approx(base, abs=1e-15)

    def test_errors(self):
        with pytest.raises(ValueError, match="equal length"):
            spearman([1.0, 2.0], [1.0])
        with pytest.raises(ValueError, match="two observations"):
            spearman([1.0], [2.0])
        with pytest.raises(ValueError, match="zero rank variance"):
            spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


class TestMembershipFiles:
    def test_parse_single_and_multi_membership(self):
        text = "# comment\n1\ta\n2\ta,b\n3\tb\n"
        memberships = load_membership_file(io.StringIO(text))
        assert memberships == {"1": ("a",), "2": ("a", "b"), "3": ("b",)}

    def test_whitespace_fallback(self):
        memberships = load_membership_file(io.StringIO("1 a\n2 b\n"))
        assert memberships == {"1": ("a",), "2": ("b",)}

    def test_errors_carry_line_numbers(self):
        with pytest.raises(GraphParseError, match="line 2.*duplicate"):
            load_membership_file(io.StringIO("1\ta\n1\tb\n"))
        with pytest.raises(GraphParseError, match="line 1.*expected"):
            load_membership_file(io.StringIO("just-one-token\n"))
        with pytest.raises(GraphParseError, match="no community"):
            load_membership_file(io.StringIO("1\t,\n"))
        with pytest.raises(GraphParseError, match="no nodes"):
            load_membership_file(io.StringIO("# empty\n"))

    def test_cover_from_memberships_orders_by_first_appearance(self):
        memberships = {"n1": ("b",), "n2": ("a",), "n3": ("b", "a")}
        c = cover_from_memberships(memberships, ["n1", "n2", "n3"])
        # community 'b' appears first, so it is community 0
        assert c.communities == (frozenset({0, 2}), frozenset({1, 2}))

    def test_cover_from_memberships_rejects_unknown_labels(self):
        with pytest.raises(ValueError, match="not in the universe"):
            cover_from_memberships({"ghost": ("a",)}, ["n1"])


class TestEvaluateCovers:
    def test_perfect_detection(self):
        det = cover(6, {0, 1, 2}, {3, 4, 5})
        report = evaluate_covers(det, det)
        assert report.onmi == pytest.approx(1.0, abs=1e-12)
        assert report.purity == 1.0
        assert report.rand_index == 1.0
        assert report.precision == report.recall == report.f_measure == 1.0
        assert report.detected_count == report.truth_count == 2
        assert report.covered_count == report.universe_size == 6

    def test_pair_metrics_run_on_the_covered_subuniverse(self):
        # detection covers only {0,1,2}; within that sub-universe it is
        # perfect, so the pair metrics are 1.0 while ONMI (full universe)
        # still pays for the uncovered nodes.  (The second truth community
        # is deliberately not the complement of the first: complementary
        # membership variables predict each other perfectly, and this ONMI
        # variant would score such a pair 1.0.)
        det = cover(6, {0, 1, 2})
        truth = cover(6, {0, 1, 2}, {2, 3, 4, 5})
        report = evaluate_covers(det, truth)
        assert report.rand_index == 1.0
        assert report.precision == report.recall == report.f_measure == 1.0
        assert report.purity == 1.0
        assert 0.0 < report.onmi < 1.0
        assert report.covered_count == 3
        # the same covers scored on the full universe punish the missing part
        full = pair_confusion(det, truth)
        assert recall(full) == pytest.approx(3 / 9)

    def test_complementary_truth_communities_score_one(self):
        # documents the variant's known quirk explicitly
        det = cover(6, {0, 1, 2})
        truth = cover(6, {0, 1, 2}, {3, 4, 5})
        assert onmi(det, truth) == pytest.approx(1.0, abs=1e-12)

    def test_single_covered_node_reports_purity_only(self):
        det = cover(4, {2})
        truth = cover(4, {0, 1}, {2, 3})
        report = evaluate_covers(det, truth)
        assert report.covered_count == 1
        assert report.purity == 1.0
        assert report.rand_index == 0.0
        assert report.precision == report.recall == report.f_measure == 0.0

    def test_empty_detection_reports_zeros(self):
        det = Cover((), 4)
        truth = cover(4, {0, 1}, {2, 3})
        report = evaluate_covers(det, truth)
        assert report.onmi == 0.0
        assert report.purity == 0.0
        assert report.rand_index == 0.0
        assert report.covered_count == 0
