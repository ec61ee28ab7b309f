#include <gtest/gtest.h>

#include <map>
#include <random>

#include "minsum/cluster_assembly.hpp"
#include "minsum/conflict_resolution.hpp"
#include "support.hpp"

using namespace minsum;
using minsum::testing::line;

namespace {

Phase1Output phase1_of(const Instance& inst, std::vector<double> alpha,
                       std::vector<ScaledCluster> clusters, std::uint64_t base,
                       std::optional<ScaledCluster> last = std::nullopt) {
    Phase1Output p;
    p.alpha = std::move(alpha);
    p.pclusters = std::move(clusters);
    p.y_last = std::move(last);
    p.lambda = 1.0;
    p.base = base;
    p.tolerance = tightness_tolerance(inst, p.lambda);
    return p;
}

std::size_t total_points(const std::vector<MetaAssignment>& parts) {
    std::size_t s = 0;
    for (const auto& m : parts) {
        s += m.part.size();
    }
    return s;
}

}  // namespace

TEST(ConflictEdge, Examples) {
    const auto inst = line({0, 1, 2, 3});
    const std::vector<double> alpha = {5, 5, 5, 5};
    EXPECT_FALSE(conflict_edge(inst, {{0, 1}, 0, 0}, {{2, 3}, 0, 2}, alpha, 2, 0.0));

    const std::vector<double> zero = {0, 0, 0, 0};
    EXPECT_FALSE(conflict_edge(inst, {{1}, 0, 1}, {{1}, 0, 1}, zero, 2, 0.0));

    // Shared point 1 with alpha 5 against scaled distances 1 and 2.
    const ScaledCluster a{{0, 1}, 0, 0};
    const ScaledCluster b{{1, 3}, 1, 2};
    EXPECT_DOUBLE_EQ(scaled_distance(inst, 1, a, 2), 1.0);
    EXPECT_DOUBLE_EQ(scaled_distance(inst, 1, b, 2), 2.0);
    EXPECT_TRUE(conflict_edge(inst, a, b, alpha, 2, 0.0));
    const std::vector<double> exact = {5, 2, 5, 5};
    EXPECT_FALSE(conflict_edge(inst, a, b, exact, 2, 0.0));
}

TEST(Phase2, DisjointClustersAreAllAnchors) {
    const auto inst = line({0, 0.1, 5, 5.1});
    const auto p1 = phase1_of(inst, {1, 1, 1, 1}, {{{0, 1}, 1, 0}, {{2, 3}, 1, 2}}, 2);
    const auto out = run_phase2(inst, p1, 4);
    EXPECT_EQ(out.anchors, (std::vector<std::size_t>{0, 1}));
    ASSERT_EQ(out.assignments.size(), 2u);
    EXPECT_EQ(out.assignments[0].part, (IndexSet{0, 1}));
    EXPECT_EQ(out.assignments[1].part, (IndexSet{2, 3}));
    EXPECT_TRUE(out.blocked.empty());
}

TEST(Phase2, SingleClusterCoveringEverything) {
    const auto inst = line({0, 1, 2});
    const auto p1 = phase1_of(inst, {3, 3, 3}, {{{0, 1, 2}, 1, 1}}, 2);
    const auto out = run_phase2(inst, p1, 3);
    EXPECT_EQ(out.anchors, (std::vector<std::size_t>{0}));
    EXPECT_EQ(total_points(out.assignments), 3u);
}

TEST(Phase2, ConflictingClusterJoinsTheHigherScaleAnchor) {
    // Y1 = {0,1,2,3} (j = 2), Y2 = {3,4} (j = 1), point 3 pays for both.
    const auto inst = line({0, 0.1, 0.2, 0.3, 0.35, 9});
    const std::vector<double> alpha = {1, 1, 1, 100, 100, 0};
    const auto p1 = phase1_of(inst, alpha, {{{3, 4}, 1, 4}, {{0, 1, 2, 3}, 2, 0}}, 2);
    const auto out = run_phase2(inst, p1, 5);
    EXPECT_EQ(out.anchors, (std::vector<std::size_t>{1}));
    ASSERT_EQ(out.blocked.size(), 1u);
    EXPECT_EQ(out.blocked[0].cluster, 0u);
    EXPECT_EQ(out.blocked[0].anchor, 1u);
    ASSERT_EQ(out.assignments.size(), 2u);
    EXPECT_EQ(out.assignments[0].part, (IndexSet{0, 1, 2, 3}));
    const auto& extra = out.assignments[1];
    EXPECT_EQ(extra.anchor, 1u);
    EXPECT_EQ(extra.part, (IndexSet{4}));
    EXPECT_EQ(extra.part_scale, 1);
    EXPECT_EQ(extra.part_ctr, 0u);
    EXPECT_LE(extra.part_scale, extra.anchor_scale);
    EXPECT_EQ(total_points(out.assignments), 5u);
}

TEST(Phase2, TopsUpFromTheOverflowCluster) {
    const auto inst = line({0, 0.1, 5, 5.1, 5.2});
    const auto p1 = phase1_of(inst, {1, 1, 2, 2, 2}, {{{0, 1}, 1, 0}}, 2,
                              ScaledCluster{{2, 3, 4}, 1, 3});
    const auto out = run_phase2(inst, p1, 4);
    EXPECT_EQ(total_points(out.assignments), 4u);
    const auto& top_up = out.assignments.back();
    EXPECT_EQ(top_up.anchor, kOverflowAnchor);
    EXPECT_EQ(top_up.part, (IndexSet{2, 3}));
    EXPECT_EQ(top_up.part_ctr, 3u);
}

TEST(Phase2, InconsistentInputsThrow) {
    const auto inst = line({0, 1, 2, 3});
    const auto short_p1 = phase1_of(inst, {1, 1, 0, 0}, {{{0, 1}, 1, 0}}, 2);
    EXPECT_THROW(run_phase2(inst, short_p1, 3), std::invalid_argument);
    const auto small_last = phase1_of(inst, {1, 1, 0, 0}, {{{0, 1}, 1, 0}}, 2, ScaledCluster{{1}, 0, 1});
    EXPECT_THROW(run_phase2(inst, small_last, 3), std::invalid_argument);
    const auto too_many = phase1_of(inst, {1, 1, 1, 1}, {{{0, 1, 2, 3}, 2, 0}}, 2);
    EXPECT_THROW(run_phase2(inst, too_many, 3), std::invalid_argument);
}

TEST(PartitionEvenly, Sizes) {
    IndexSet nine(9);
    std::iota(nine.begin(), nine.end(), 0);
    auto parts = partition_evenly(nine, 2);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0], (IndexSet{0, 1, 2, 3, 4}));
    EXPECT_EQ(parts[1], (IndexSet{5, 6, 7, 8}));

    const IndexSet five = {9, 3, 1, 7, 5};
    parts = partition_evenly(five, 1);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0], (IndexSet{1, 3, 5, 7, 9}));

    const IndexSet six = {0, 1, 2, 3, 4, 5};
    for (const auto& p : partition_evenly(six, 3)) {
        EXPECT_EQ(p.size(), 2u);
    }
    EXPECT_THROW(partition_evenly(six, 7), std::invalid_argument);
    EXPECT_THROW(partition_evenly(six, 0), std::invalid_argument);
}

TEST(Phase3, OneClusterWhenThePoolIsSmall) {
    std::vector<MetaAssignment> m = {{0, 0, {0, 1, 2, 3, 4}, 0, 0}};
    const auto out = run_phase3(m, 2);
    ASSERT_EQ(out.clusters.size(), 1u);
    EXPECT_EQ(out.clusters[0].members.size(), 5u);
    EXPECT_EQ(out.clusters[0].bucket, Bucket::Top);
    EXPECT_TRUE(out.discarded.empty());
}

TEST(Phase3, PoolIsSplitByCapacity) {
    std::vector<MetaAssignment> m = {{0, 0, {0, 1, 2, 3, 4, 5, 6, 7, 8}, 0, 0}};
    const auto out = run_phase3(m, 2);
    ASSERT_EQ(out.clusters.size(), 2u);
    EXPECT_EQ(out.clusters[0].members.size(), 5u);
    EXPECT_EQ(out.clusters[1].members.size(), 4u);
    for (const auto& c : out.clusters) {
        EXPECT_LE(c.members.size(), 8u);
    }
}

TEST(Phase3, UnderfullLowScaleIsDiscarded) {
    IndexSet anchor(16);
    std::iota(anchor.begin(), anchor.end(), 0);
    std::vector<MetaAssignment> m = {{0, 4, anchor, 4, 0}, {0, 4, {20, 21, 22}, 0, 0}};
    const auto out = run_phase3(m, 2);
    EXPECT_EQ(out.discarded, (IndexSet{20, 21, 22}));
    ASSERT_EQ(out.discards.size(), 1u);
    EXPECT_EQ(out.discards[0].scale, 0);
    // Independent recount of the scale-0 bucket.
    std::size_t at_zero = 0;
    for (const auto& a : m) {
        at_zero += a.part_scale == 0 ? a.part.size() : 0;
    }
    EXPECT_LT(at_zero, 4u);
    ASSERT_EQ(out.clusters.size(), 1u);
    EXPECT_EQ(out.clusters[0].members, anchor);
}

TEST(Phase3, LowScaleThatPaysForItselfOpensClusters) {
    IndexSet anchor(16);
    std::iota(anchor.begin(), anchor.end(), 0);
    IndexSet low = {20, 21, 22, 23, 24, 25, 26, 27, 28};
    std::vector<MetaAssignment> m = {{0, 4, anchor, 4, 0}, {0, 4, low, 0, 0}};
    const auto out = run_phase3(m, 2);
    EXPECT_TRUE(out.discarded.empty());
    std::size_t low_clusters = 0;
    for (const auto& c : out.clusters) {
        if (c.bucket == Bucket::Low) {
            ++low_clusters;
            EXPECT_GE(c.members.size(), 4u);
            EXPECT_LT(c.members.size(), 8u);
            EXPECT_EQ(c.center, 0u);
        }
    }
    EXPECT_EQ(low_clusters, 2u);
}

TEST(Phase3, PartsFromSeveralAnchorsStaySeparate) {
    std::vector<MetaAssignment> m = {
        {3, 1, {0, 1}, 1, 7}, {5, 0, {2}, 0, 2}, {3, 1, {4}, 0, 7}, {kOverflowAnchor, 0, {9}, 0, 9}};
    const auto out = run_phase3(m, 2);
    ASSERT_EQ(out.clusters.size(), 3u);
    EXPECT_EQ(out.clusters[0].members, (IndexSet{0, 1, 4}));
    EXPECT_EQ(out.clusters[0].center, 7u);
    EXPECT_EQ(out.clusters[1].members, (IndexSet{2}));
    EXPECT_EQ(out.clusters[2].anchor, kOverflowAnchor);
    EXPECT_THROW(run_phase3(std::vector<MetaAssignment>{{0, 0, {}, 0, 0}}, 2), std::invalid_argument);
    EXPECT_THROW(run_phase3(std::vector<MetaAssignment>{{0, 0, {1}, 0, 0}, {0, 0, {1}, 0, 0}}, 2),
                 std::invalid_argument);
}

TEST(Phases, RandomRunsKeepTheirInvariants) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 4 + rng() % 40;
        const auto inst = minsum::testing::random_instance(rng, n, 2, trial % 2, 3, n - rng() % 4, 0.5);
        const std::uint64_t b = 2 + rng() % 3;
        const double lambda = inst.total_pair_distance() * (rng() % 1000) / 20000.0;
        const auto p1 = run_phase1(inst, lambda, b);
        const auto p2 = run_phase2(inst, p1, inst.n_prime());
        const double tol = p1.tolerance;
        const double factor = trial % 2 ? 1.0 / 3.0 : 1.0 / 9.0;

        std::vector<int> owner(n, 0);
        for (const auto& m : p2.assignments) {
            EXPECT_LE(m.part_scale, m.anchor_scale);
            for (PointIndex x : m.part) {
                ++owner[x];
                const double reach = static_cast<double>(int_pow(b, m.part_scale)) * inst.distance(x, m.part_ctr);
                EXPECT_GE(p1.alpha[x], factor * reach - tol);
            }
        }
        EXPECT_EQ(total_points(p2.assignments), inst.n_prime());
        EXPECT_TRUE(std::all_of(owner.begin(), owner.end(), [](int c) { return c <= 1; }));

        const auto p3 = run_phase3(p2.assignments, b);
        std::vector<int> placed(n, 0);
        for (const auto& c : p3.clusters) {
            for (PointIndex x : c.members) {
                ++placed[x];
            }
        }
        for (PointIndex x : p3.discarded) {
            ++placed[x];
        }
        EXPECT_EQ(placed, owner);
        EXPECT_LT(static_cast<double>(p3.discarded.size()),
                  static_cast<double>(inst.n_prime()) / static_cast<double>(b - 1));
    }
}
