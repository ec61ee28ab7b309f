#include <gtest/gtest.h>

#include <random>

#include "minsum/dual_engine.hpp"
#include "minsum/oracle.hpp"
#include "support.hpp"

using namespace minsum;
using minsum::testing::line;

namespace {

DualState state_of(std::vector<double> alpha, std::vector<char> active, double lambda,
                   std::uint64_t base = 2) {
    return {std::move(alpha), std::move(active), lambda, base};
}

/// Lhs minus rhs of the constraint for (members, y) at weight b^j.
double violation(const Instance& inst, const DualState& s, const TightSet& t) {
    double lhs = 0.0;
    double dist = 0.0;
    for (PointIndex x : t.members) {
        lhs += s.alpha[x];
        dist += inst.distance(x, t.center);
    }
    return lhs - s.lambda - static_cast<double>(int_pow(s.base, t.scale)) * dist;
}

/// Phase one driven one event at a time through next_event_increment.
Phase1Output reference_phase1(const Instance& inst, double lambda, std::uint64_t base) {
    const std::size_t n = inst.size();
    DualState s{std::vector<double>(n, 0.0), std::vector<char>(n, 1), lambda, base};
    std::vector<ScaledCluster> clusters;
    std::optional<ScaledCluster> last;
    std::size_t active = n;
    double t = 0.0;
    const std::size_t floor = n - inst.n_prime();
    while (active > floor) {
        const PhaseEvent ev = next_event_increment(inst, s, clusters);
        t += ev.increment;
        for (PointIndex x = 0; x < n; ++x) {
            if (s.active[x]) {
                s.alpha[x] = t;
            }
        }
        if (const auto* join = std::get_if<JoinExisting>(&ev.kind)) {
            s.active[join->point] = 0;
            --active;
            auto& m = clusters[join->cluster].members;
            m.insert(std::lower_bound(m.begin(), m.end(), join->point), join->point);
            continue;
        }
        const TightSet& set = std::get<NewTight>(ev.kind).set;
        std::size_t fresh = 0;
        for (PointIndex x : set.members) {
            fresh += s.active[x] ? 1 : 0;
        }
        if (active - fresh < floor) {
            last = ScaledCluster{set.members, set.scale, set.center};
            break;
        }
        for (PointIndex x : set.members) {
            if (s.active[x]) {
                s.active[x] = 0;
                --active;
            }
        }
        clusters.push_back({set.members, set.scale, set.center});
    }
    return {s.alpha, clusters, last, lambda, base, tightness_tolerance(inst, lambda)};
}

}  // namespace

TEST(CandidateSet, ZeroDualsKeepOnlyCoincidentPoints) {
    const auto inst = line({0, 0, 1, 2});
    const auto s = state_of({0, 0, 0, 0}, {1, 1, 1, 1}, 1.0);
    EXPECT_EQ(candidate_set(inst, s, 0, 0), (std::vector<PointIndex>{0, 1}));
    EXPECT_EQ(candidate_set(inst, s, 3, 1), (std::vector<PointIndex>{3}));
}

TEST(CandidateSet, HugeDualsKeepEverythingSorted) {
    const auto inst = line({0, 1, 3});
    const auto s = state_of({100, 100, 100}, {1, 1, 1}, 1.0);
    // Values 100 - 2 d(x, 0): 100, 98, 82.
    EXPECT_EQ(candidate_set(inst, s, 0, 1), (std::vector<PointIndex>{0, 1, 2}));
    EXPECT_EQ(candidate_set(inst, s, 2, 1), (std::vector<PointIndex>{2, 1, 0}));
}

TEST(CandidateSet, MembershipPredicate) {
    const auto inst = line({0, 1, 3});
    const auto s = state_of({5, 5, 0}, {1, 1, 1}, 1.0);
    EXPECT_EQ(candidate_set(inst, s, 0, 1), (std::vector<PointIndex>{0, 1}));
}

TEST(DetectViolation, ZeroLambdaGivesASingleton) {
    const auto inst = line({0, 1, 3});
    const auto s = state_of({0, 0, 0}, {1, 1, 1}, 0.0);
    const auto found = detect_violation(inst, s, true);
    ASSERT_TRUE(found);
    EXPECT_EQ(found->members, (IndexSet{0}));
    EXPECT_EQ(found->center, 0u);
    EXPECT_EQ(found->scale, 0);
}

TEST(DetectViolation, LargeLambdaGivesNothing) {
    const auto inst = line({0, 1, 3});
    const double big = 3.0 * inst.max_distance() * 3.0 + 1.0;
    const auto s = state_of({9, 9, 9}, {1, 1, 1}, big);
    EXPECT_FALSE(detect_violation(inst, s, true));
    EXPECT_FALSE(detect_violation(inst, s, false));
}

TEST(DetectViolation, ReportsTheViolatedPair) {
    const auto inst = line({0, 0.1, 5});
    const auto s = state_of({0.6, 0.6, 0}, {1, 1, 1}, 1.0);
    const auto found = detect_violation(inst, s, true);
    ASSERT_TRUE(found);
    EXPECT_EQ(found->members, (IndexSet{0, 1}));
    EXPECT_EQ(found->scale, 1);
    // 1.2 against 1 + 2 * 0.01
    EXPECT_NEAR(violation(inst, s, *found), 1.2 - 1.02, 1e-12);
    const auto scan = exhaustive_scan(inst, s.alpha, s.active, s.lambda, 2, true, 0.0);
    EXPECT_TRUE(scan.qualifying);
}

TEST(DetectViolation, RequiresAnActiveMember) {
    const auto inst = line({0, 0.1, 5});
    const auto s = state_of({0.6, 0.6, 0}, {0, 0, 0}, 1.0);
    EXPECT_FALSE(detect_violation(inst, s, true));
    EXPECT_TRUE(detect_violation(inst, s, false));
}

TEST(NextEvent, SingletonTightensBeforeThePair) {
    const auto inst = line({0, 1});
    const auto s = state_of({0, 0}, {1, 1}, 0.5);
    const auto ev = next_event_increment(inst, s, {});
    EXPECT_NEAR(ev.increment, 0.5, 1e-12);
    const auto* tight = std::get_if<NewTight>(&ev.kind);
    ASSERT_NE(tight, nullptr);
    EXPECT_EQ(tight->set.members, (IndexSet{0}));
    EXPECT_EQ(tight->set.center, 0u);
    EXPECT_EQ(tight->set.scale, 0);
}

TEST(NextEvent, JoinAtDistanceZeroIsImmediate) {
    const auto inst = line({0, 0, 4});
    const auto s = state_of({2, 2, 2}, {0, 1, 1}, 2.0);
    const std::vector<ScaledCluster> clusters = {{{0}, 0, 0}};
    const auto ev = next_event_increment(inst, s, clusters);
    EXPECT_EQ(ev.increment, 0.0);
    const auto* join = std::get_if<JoinExisting>(&ev.kind);
    ASSERT_NE(join, nullptr);
    EXPECT_EQ(join->point, 1u);
    EXPECT_EQ(join->cluster, 0u);
}

TEST(NextEvent, SinglePointWithZeroLambda) {
    const auto inst = line({3});
    const auto s = state_of({0}, {1}, 0.0);
    const auto ev = next_event_increment(inst, s, {});
    EXPECT_EQ(ev.increment, 0.0);
    ASSERT_TRUE(std::holds_alternative<NewTight>(ev.kind));
}

TEST(NextEvent, NeedsAnActivePoint) {
    const auto inst = line({0, 1});
    const auto s = state_of({1, 1}, {0, 0}, 0.5);
    EXPECT_THROW(next_event_increment(inst, s, {}), std::invalid_argument);
}

TEST(Phase1, TwoPointsBecomeSingletons) {
    const auto inst = line({0, 1}, 1, 2);
    const auto out = run_phase1(inst, 0.5, 2);
    ASSERT_EQ(out.pclusters.size(), 2u);
    EXPECT_EQ(out.pclusters[0].members, (IndexSet{0}));
    EXPECT_EQ(out.pclusters[1].members, (IndexSet{1}));
    EXPECT_NEAR(out.alpha[0], 0.5, 1e-12);
    EXPECT_NEAR(out.alpha[1], 0.5, 1e-12);
    EXPECT_FALSE(out.y_last);
}

TEST(Phase1, NothingToCover) {
    const auto inst = line({0, 1, 2});
    const auto out = run_phase1(inst, 1.0, 2, 0);
    EXPECT_TRUE(out.pclusters.empty());
    EXPECT_EQ(out.alpha, (std::vector<double>{0, 0, 0}));
}

TEST(Phase1, OverflowClusterIsKeptAside) {
    const auto inst = line({1, 1, 1, 1}, 1, 3);
    const auto out = run_phase1(inst, 1.0, 2);
    EXPECT_TRUE(out.pclusters.empty());
    ASSERT_TRUE(out.y_last);
    // Four co-located points: the size-4 constraint 4t <= 1 binds first.
    EXPECT_EQ(out.y_last->members, (IndexSet{0, 1, 2, 3}));
    EXPECT_EQ(out.y_last->scale, 2);
    for (double a : out.alpha) {
        EXPECT_NEAR(a, 0.25, 1e-12);
    }
}

TEST(Phase1, MatchesTheEventByEventReference) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + rng() % 10;
        const bool metric = trial % 2;
        const auto inst =
            minsum::testing::random_instance(rng, n, 1 + rng() % 2, metric, 2, n - rng() % 3, 1.0);
        const std::uint64_t base = 2 + rng() % 3;
        const double lambda = inst.total_pair_distance() * std::ldexp(1.0, -static_cast<int>(rng() % 8));
        const auto fast = run_phase1(inst, lambda, base);
        const auto ref = reference_phase1(inst, lambda, base);
        ASSERT_EQ(fast.pclusters.size(), ref.pclusters.size()) << "trial " << trial;
        for (std::size_t c = 0; c < fast.pclusters.size(); ++c) {
            EXPECT_EQ(fast.pclusters[c].members, ref.pclusters[c].members);
            EXPECT_EQ(fast.pclusters[c].center, ref.pclusters[c].center);
            EXPECT_EQ(fast.pclusters[c].scale, ref.pclusters[c].scale);
        }
        EXPECT_EQ(fast.y_last.has_value(), ref.y_last.has_value());
        for (PointIndex x = 0; x < n; ++x) {
            EXPECT_NEAR(fast.alpha[x], ref.alpha[x], 1e-9 * std::max(1.0, lambda));
        }
    }
}

TEST(Phase1, InvariantsOnRandomInstances) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + rng() % 10;
        const auto inst =
            minsum::testing::random_instance(rng, n, 2, trial % 2, 2, n - rng() % 2, 0.5);
        const std::uint64_t base = 2 + rng() % 2;
        const double lambda = inst.total_pair_distance() * (rng() % 1000) / 1000.0;
        const auto out = run_phase1(inst, lambda, base);
        const double tau = out.tolerance;

        // Dual feasibility, checked against every subset.
        const auto scan = exhaustive_scan(inst, out.alpha, {}, lambda, base, false, 0.0);
        EXPECT_LE(scan.max_slack, tau);
        DualState s{out.alpha, std::vector<char>(n, 0), lambda, base};
        EXPECT_FALSE(detect_violation(inst, s, false, tau));

        // Dual values and the common value of the unclustered.
        std::vector<char> clustered(n, 0);
        std::size_t covered = 0;
        for (const auto& c : out.pclusters) {
            for (PointIndex x : c.members) {
                EXPECT_GE(out.alpha[x], scaled_distance(inst, x, c, base) - tau);
                covered += clustered[x] ? 0 : 1;
                clustered[x] = 1;
            }
        }
        EXPECT_LE(covered, inst.n_prime());
        const double gamma = *std::max_element(out.alpha.begin(), out.alpha.end());
        for (PointIndex x = 0; x < n; ++x) {
            if (!clustered[x]) {
                EXPECT_NEAR(out.alpha[x], gamma, tau);
            }
        }

        // Deterministic reruns.
        const auto again = run_phase1(inst, lambda, base);
        EXPECT_EQ(again.alpha, out.alpha);
        EXPECT_EQ(again.pclusters.size(), out.pclusters.size());
    }
}

TEST(DetectViolation, AgreesWithExhaustiveEnumeration) {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 9;
        const auto inst = minsum::testing::random_instance(rng, n, 2, trial % 3 == 0, 1, n, 1.0);
        const std::uint64_t base = 2 + rng() % 3;
        const double scale = inst.max_distance() + 1.0;
        DualState s{std::vector<double>(n), std::vector<char>(n), scale * unit(rng), base};
        for (PointIndex x = 0; x < n; ++x) {
            s.alpha[x] = scale * 2.0 * unit(rng);
            s.active[x] = rng() % 3 != 0;
        }
        for (bool require_active : {true, false}) {
            const auto found = detect_violation(inst, s, require_active, 0.0);
            const auto scan = exhaustive_scan(inst, s.alpha, s.active, s.lambda, base, require_active, 0.0);
            ASSERT_EQ(found.has_value(), scan.qualifying) << "trial " << trial;
            if (found) {
                EXPECT_GE(violation(inst, s, *found), -1e-12);
                EXPECT_EQ(floor_log(base, found->members.size()), found->scale);
                EXPECT_TRUE(std::binary_search(found->members.begin(), found->members.end(), found->center));
            }
        }
        EXPECT_NEAR(max_constraint_slack(inst, s.alpha, s.lambda, base),
                    exhaustive_scan(inst, s.alpha, {}, s.lambda, base, false, 0.0).max_slack,
                    1e-9 * scale * static_cast<double>(n) * 8);
    }
}
