import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from depnet import (GraphError, Partition, build_graph, connected_components,
                    fit_power_law, induced_subgraph, modularity, nmi,
                    run_batch, size_distribution, split_disconnected)
from depnet.graph import DependencyKind

from conftest import graph_from_pairs
from oracles import (modularity_ordered_pairs, nmi_direct, random_multigraph,
                     random_partition)


class TestModularity:
    def test_one_block_is_zero(self, two_triangles):
        part = Partition({i: 0 for i in range(6)})
        assert modularity(two_triangles, part) == pytest.approx(0.0, abs=1e-12)

    def test_two_triangles_value(self, two_triangles, triangle_partition):
        q = modularity(two_triangles, triangle_partition)
        assert q == pytest.approx(5 / 14, abs=1e-12)
        assert q == pytest.approx(
            modularity_ordered_pairs(two_triangles, triangle_partition), abs=1e-12)

    def test_singleton_closed_form(self, two_triangles):
        part = Partition({i: i for i in range(6)})
        expected = -sum(k * k for k in two_triangles.degree) / (2 * two_triangles.m) ** 2
        assert modularity(two_triangles, part) == pytest.approx(expected, abs=1e-12)
        assert expected < 0

    def test_matches_ordered_pair_oracle_on_random_inputs(self):
        rng = random.Random(1)
        for _ in range(50):
            g = random_multigraph(rng)
            part = random_partition(rng, g.n_nodes)
            assert modularity(g, part) == pytest.approx(
                modularity_ordered_pairs(g, part), abs=1e-12)

    def test_relabeling_invariant(self, two_triangles, triangle_partition):
        renamed = Partition({u: f"blk{lbl}" for u, lbl
                             in triangle_partition.labels.items()})
        assert modularity(two_triangles, renamed) == \
            modularity(two_triangles, triangle_partition)

    def test_empty_graph_rejected(self):
        g = build_graph(["A", "B"], [])
        with pytest.raises(GraphError):
            modularity(g, Partition({0: 0, 1: 0}))

    def test_partial_cover_rejected(self, two_triangles):
        with pytest.raises(GraphError):
            modularity(two_triangles, Partition({0: 0}))


class TestNMI:
    def test_identical_is_one(self):
        part = Partition({0: 0, 1: 0, 2: 1, 3: 1})
        assert nmi(part, part) == 1.0

    def test_independent_is_zero(self):
        a = Partition({0: 0, 1: 0, 2: 1, 3: 1})
        b = Partition({0: 0, 1: 1, 2: 0, 3: 1})
        assert nmi(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_known_value(self):
        a = Partition({0: 0, 1: 0, 2: 1, 3: 1})
        b = Partition({0: 0, 1: 0, 2: 0, 3: 1})
        assert nmi(a, b) == pytest.approx(0.3437, abs=5e-4)
        assert nmi(a, b) == pytest.approx(nmi_direct(a, b), abs=1e-12)

    def test_both_trivial_is_one(self):
        a = Partition({0: "x", 1: "x"})
        b = Partition({0: "y", 1: "y"})
        assert nmi(a, b) == 1.0

    def test_symmetry_and_bounds_random(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(2, 12)
            a, b = random_partition(rng, n), random_partition(rng, n)
            assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)
            assert -1e-12 <= nmi(a, b) <= 1 + 1e-12

    def test_mismatched_nodes_rejected(self):
        with pytest.raises(GraphError):
            nmi(Partition({0: 0}), Partition({1: 0}))


class TestSplitDisconnected:
    def test_disconnected_block_split(self):
        g = graph_from_pairs([(0, 1), (2, 3)])
        part = Partition({i: "pkg" for i in range(4)})
        result = split_disconnected(g, part)
        assert result.n_blocks == 2
        assert result.label_set() == {"pkg#1", "pkg#2"}

    def test_connected_blocks_untouched(self, two_triangles, triangle_partition):
        result = split_disconnected(two_triangles, triangle_partition)
        assert result == triangle_partition

    def test_idempotent(self):
        g = graph_from_pairs([(0, 1), (2, 3), (4, 5)])
        part = Partition({i: "p" for i in range(6)})
        once = split_disconnected(g, part)
        assert split_disconnected(g, once) == once

    def test_every_result_block_connected(self):
        rng = random.Random(13)
        for _ in range(30):
            g = random_multigraph(rng)
            part = random_partition(rng, g.n_nodes)
            result = split_disconnected(g, part)
            for block in result.blocks.values():
                sub = induced_subgraph(g, block)
                assert connected_components(sub).n_blocks == 1


class TestSizeDistribution:
    def test_ccdf_values(self):
        part = Partition({0: "a", 1: "a", 2: "b", 3: "b",
                          4: "c", 5: "c", 6: "c", 7: "c"})
        dist = size_distribution(part)
        assert dist.sizes == [2, 2, 4]
        assert dist.ccdf[2] == pytest.approx(1.0)
        assert dist.ccdf[4] == pytest.approx(1 / 3)

    def test_single_block(self):
        dist = size_distribution(Partition({0: "a", 1: "a"}))
        assert dist.ccdf == {2: 1.0}

    def test_all_singletons(self):
        dist = size_distribution(Partition({i: i for i in range(5)}))
        assert dist.ccdf == {1: 1.0}

    def test_ccdf_non_increasing(self):
        rng = random.Random(17)
        part = random_partition(rng, 30)
        dist = size_distribution(part)
        values = [dist.ccdf[s] for s in sorted(dist.ccdf)]
        assert values == sorted(values, reverse=True)
        assert values[0] == pytest.approx(1.0)


class TestPowerLawFit:
    def test_continuous_hand_evaluated_values(self):
        alpha = fit_power_law([1, 1, 1, 1, 2, 4], method="continuous")
        assert alpha == pytest.approx(1.9618, abs=1e-4)
        alpha = fit_power_law([1, 1, 1], method="continuous")
        assert alpha == pytest.approx(1 + 1 / math.log(2), abs=1e-12)

    def test_declined_with_too_few_sizes(self):
        assert fit_power_law([5, 6]) is None
        assert fit_power_law([1, 2, 3], xmin=3) is None

    def test_degenerate_discrete_fit_declined(self):
        assert fit_power_law([1, 1, 1, 1]) is None

    def test_discrete_matches_zeta_oracle(self):
        mpmath = pytest.importorskip("mpmath")
        sizes = [1] * 40 + [2] * 12 + [3] * 5 + [4] * 2 + [9]
        alpha = fit_power_law(sizes)
        # oracle: scan the exact zeta-normalized likelihood on a fine grid
        import math as m
        log_sum = sum(m.log(s) for s in sizes)
        grid = [1.01 + i * 1e-3 for i in range(4000)]
        best = max(grid, key=lambda a: -a * log_sum
                   - len(sizes) * m.log(float(mpmath.zeta(a, 1))))
        assert alpha == pytest.approx(best, abs=2e-3)

    def test_xmin_filters_continuous(self):
        alpha = fit_power_law([1, 1, 2, 4, 8], xmin=2, method="continuous")
        expected = 1 + 3 / (math.log(2 / 1.5) + math.log(4 / 1.5) + math.log(8 / 1.5))
        assert alpha == pytest.approx(expected, abs=1e-12)

    def test_unknown_method_rejected(self):
        with pytest.raises(GraphError):
            fit_power_law([1, 2, 3], method="bogus")

    def test_recovers_exponent_from_samples(self):
        numpy = pytest.importorskip("numpy")
        hits = 0
        for seed in range(20):
            samples = numpy.random.default_rng(seed).zipf(2.0, size=10_000)
            alpha = fit_power_law(samples.tolist())
            if 1.9 <= alpha <= 2.1:
                hits += 1
        assert hits >= 19


class TestRunBatch:
    def test_single_run_mean(self, two_triangles, triangle_partition):
        stats, best = run_batch(two_triangles, "lp", 1, 42, triangle_partition)
        assert stats.mean_q == stats.q_values[0]
        assert best.covers(two_triangles)

    def test_mo_unique_optimum(self, two_triangles, triangle_partition):
        stats, best = run_batch(two_triangles, "mo", 5, 0, triangle_partition)
        assert stats.mean_q == pytest.approx(5 / 14)
        assert stats.peak_nmi == pytest.approx(1.0)
        assert best.same_blocks(triangle_partition)

    def test_eb_runs_once(self, two_triangles, triangle_partition):
        stats, _ = run_batch(two_triangles, "eb", 10, 0, triangle_partition)
        assert len(stats.q_values) == 1

    def test_mean_within_bounds(self, two_triangles, triangle_partition):
        stats, _ = run_batch(two_triangles, "lp", 20, 0, triangle_partition)
        assert min(stats.q_values) <= stats.mean_q <= max(stats.q_values)
        assert stats.peak_nmi == max(stats.nmi_values)

    def test_unknown_algorithm(self, two_triangles, triangle_partition):
        with pytest.raises(GraphError):
            run_batch(two_triangles, "louvain", 1, 0, triangle_partition)


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_modularity_oracle_agreement_property(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng)
    part = random_partition(rng, g.n_nodes)
    assert modularity(g, part) == pytest.approx(
        modularity_ordered_pairs(g, part), abs=1e-12)
