from fractions import Fraction

import pytest

from intervalsel.gadget import (
    GadgetInvariantError,
    build,
    random_gadget,
    resolve_algorithm,
    sample_sigma,
    simulate_protocol,
    verify,
    wing_after_probability,
    wing_gap_inequality_holds,
)
from intervalsel.geometry import IndependentSet, alpha, intersects, max_independent_set
from intervalsel.rng import SplitMix64, derive

from brute import CHI2_CRIT_999

SEED = 20260810

IDENTITY_SIGMA_T4 = [0, 1, 2, 3, 4, 5]


class TestBuild:
    def test_clique_coordinates(self):
        g = build(4, 2, [0, 0, 0, 0], [1, 1, 1, 1], IDENTITY_SIGMA_T4)
        # wings arrive at positions 4 and 5, so every clique item is private
        assert g.clique[2].left == Fraction(2, 5)
        assert g.encoded_bits == (0, 0, 0, 0)

    def test_wing_coordinates(self):
        g = build(4, 2, [0] * 4, [0] * 4, IDENTITY_SIGMA_T4)
        assert g.wing_left.right.as_fraction() == Fraction(2, 5) - Fraction(1, 64)
        assert g.wing_right.left.as_fraction() == 1 + Fraction(2, 5) + Fraction(1, 16) + Fraction(1, 64)

    def test_bit_shift_moves_interval(self):
        lo = build(4, 1, [0, 0, 0, 0], [0] * 4, IDENTITY_SIGMA_T4)
        hi = build(4, 1, [0, 1, 0, 0], [0] * 4, IDENTITY_SIGMA_T4)
        assert hi.clique[1].left - lo.clique[1].left == Fraction(1, 16)

    def test_public_bits_used_after_first_wing(self):
        # wings at positions 0 and 1: nothing is private
        sigma = [2, 3, 4, 5, 0, 1]
        g = build(4, 0, [1, 1, 1, 1], [0, 0, 0, 0], sigma)
        assert g.encoded_bits == (0, 0, 0, 0)
        assert not g.alice_built_target

    def test_stream_order_follows_sigma(self):
        sigma = [5, 4, 3, 2, 1, 0]  # clique reversed, wings first
        g = build(4, 3, [0] * 4, [0] * 4, sigma)
        assert g.stream[0] is g.wing_right
        assert g.stream[1] is g.wing_left
        assert [iv.label for iv in g.stream[2:]] == [
            "clique:3",
            "clique:2",
            "clique:1",
            "clique:0",
        ]
        assert g.first_wing_position == 0
        assert g.alice_stream == ()

    def test_validation(self):
        with pytest.raises(ValueError):
            build(2, 0, [0, 0], [0, 0], [0, 1, 2, 3])  # wing geometry degenerates
        with pytest.raises(ValueError):
            build(4, 4, [0] * 4, [0] * 4, IDENTITY_SIGMA_T4)
        with pytest.raises(ValueError):
            build(4, 0, [0] * 3, [0] * 4, IDENTITY_SIGMA_T4)
        with pytest.raises(ValueError):
            build(4, 0, [0] * 4, [0] * 4, [0, 0, 1, 2, 3, 4])

    def test_gap_inequality_threshold(self):
        assert not wing_gap_inequality_holds(2)
        assert all(wing_gap_inequality_holds(t) for t in range(3, 60))


class TestVerify:
    def test_small_battery_exhaustive(self):
        rng = SplitMix64(SEED)
        for t in range(3, 13):
            for _ in range(20):
                report = verify(random_gadget(t, rng), exhaustive=True)
                assert report.alpha == 3
                assert report.unique_triple
                assert report.triple_checked_exhaustively

    def test_removing_target_drops_alpha_to_two(self):
        g = random_gadget(6, SplitMix64(SEED))
        rest = [iv for i, iv in enumerate(g.clique) if i != g.index]
        assert alpha(rest + [g.wing_left, g.wing_right]) == 2

    def test_removing_wings_leaves_a_clique(self):
        g = random_gadget(6, SplitMix64(SEED))
        assert alpha(list(g.clique)) == 1

    def test_wing_incidence_counts(self):
        g = random_gadget(9, SplitMix64(SEED + 1))
        for i, iv in enumerate(g.clique):
            hits = int(intersects(iv, g.wing_left)) + int(intersects(iv, g.wing_right))
            assert hits == (0 if i == g.index else 1)

    def test_verify_rejects_tampering(self):
        import dataclasses

        g = random_gadget(5, SplitMix64(SEED))
        # move the left wing a full unit left so the target's neighbour
        # no longer reaches it
        broken = dataclasses.replace(
            g, wing_left=g.wing_left.translate(-1)
        )
        with pytest.raises(GadgetInvariantError):
            verify(broken)


class TestWingProbability:
    def test_concentrates_at_one_third(self):
        p = wing_after_probability(10, 30_000, seed=SEED)
        assert abs(p - 1 / 3) <= 0.01

    def test_single_item_case(self):
        # one clique item plus two wings: exactly 1/3 of the 3! orders
        p = wing_after_probability(1, 30_000, seed=SEED)
        assert abs(p - 1 / 3) <= 0.01

    def test_forced_first_position_always_counts(self):
        rng = SplitMix64(SEED)
        for _ in range(200):
            positions = sample_sigma(6, rng)
            target = positions.index(0)
            if target < 6:  # position 0 held by a clique item
                assert positions[target] < min(positions[6], positions[7])


class TestProtocol:
    def test_oracle_baseline(self):
        stats = simulate_protocol(10, 3000, "oracle", seed=SEED)
        assert stats.approx_factor == 1.0
        assert stats.triple_count == stats.samples
        assert abs(stats.success_rate - 2 / 3) <= 0.03
        # private branch decodes perfectly; public branch is a coin flip
        assert stats.alice_branch.success_rate == 1.0
        assert abs(stats.bob_branch.success_rate - 0.5) <= 0.04

    def test_first_only_baseline(self):
        stats = simulate_protocol(10, 3000, "first", seed=SEED)
        assert stats.approx_factor == pytest.approx(1 / 3)
        assert abs(stats.success_rate - 0.5) <= 0.03

    def test_windowed_algorithm_reports(self):
        stats = simulate_protocol(5, 150, "windowed:4", seed=SEED)
        assert 0 < stats.approx_factor <= 1.0
        assert stats.n == 7

    def test_branch_sample_accounting(self):
        stats = simulate_protocol(7, 900, "oracle", seed=SEED)
        assert stats.alice_branch.samples + stats.bob_branch.samples == 900
        assert abs(stats.alice_branch.samples / 900 - 1 / 3) <= 0.05

    def test_parallel_matches_serial(self):
        serial = simulate_protocol(6, 300, "oracle", seed=SEED, threads=1)
        parallel = simulate_protocol(6, 300, "oracle", seed=SEED, threads=3)
        assert serial == parallel

    def test_bad_algorithm_is_fatal(self):
        def not_an_independent_set(stream):
            return list(stream[:4])

        with pytest.raises((GadgetInvariantError, ValueError)):
            simulate_protocol(5, 10, not_an_independent_set, seed=SEED)

    def test_wings_only_algorithm_is_legal(self):
        def wings_only(stream):
            return IndependentSet(
                [iv for iv in stream if iv.label in ("wing:L", "wing:R")]
            )

        stats = simulate_protocol(5, 50, wings_only, seed=SEED)
        assert stats.mean_output_size == 2.0
        assert stats.triple_count == 0

    def test_resolve_algorithm_names(self):
        assert resolve_algorithm("oracle") is not None
        assert resolve_algorithm("windowed:3") is not None
        with pytest.raises(ValueError):
            resolve_algorithm("quantum")


class TestStreamDistribution:
    def test_target_arrival_position_is_uniform(self):
        t = 6
        counts = [0] * (t + 2)
        samples = 40_000
        for k in range(samples):
            g = random_gadget(t, derive(SEED, k))
            counts[g.target_position] += 1
        expected = samples / (t + 2)
        chi2 = sum((c - expected) ** 2 / expected for c in counts)
        assert chi2 <= CHI2_CRIT_999[t + 1]

    def test_wings_before_target_still_recoverable_by_oracle(self):
        hit = 0
        for k in range(2000):
            g = random_gadget(5, derive(SEED + 1, k))
            if max(g.wing_left_position, g.wing_right_position) < g.target_position:
                hit += 1
                assert len(max_independent_set(g.stream)) == 3
        assert hit > 0
