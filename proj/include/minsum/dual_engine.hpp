#ifndef MINSUM_DUAL_ENGINE_HPP
#define MINSUM_DUAL_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "minsum/geometry.hpp"
#include "minsum/instance.hpp"

/**
 * @file dual_engine.hpp
 * @brief Dual ascent over the scaled min-sum dual: tight-constraint detection
 * and the event-driven first phase of the primal-dual algorithm.
 *
 * The dual has one variable alpha_x per point and one constraint per pair
 * (Y, y) with y in Y:
 *
 *     sum_{x in Y} alpha_x <= lambda + floor_b(|Y|) * sum_{x in Y} dist(x, y).
 *
 * For a fixed center y and level j (b^j <= |Y| < b^{j+1}) the most violated
 * constraint is a prefix of the points ordered by alpha_x - b^j dist(x, y),
 * which makes detection polynomial.
 */

namespace minsum {

struct DualState {
    std::vector<double> alpha;
    /// One flag per point; char rather than bool so the storage is addressable.
    std::vector<char> active;
    double lambda = 0.0;
    std::uint64_t base = 2;
};

/// A constraint (members, center) at level `scale` that is tight or violated.
struct TightSet {
    IndexSet members;
    PointIndex center = 0;
    int scale = 0;
};

struct Phase1Output {
    std::vector<double> alpha;
    std::vector<ScaledCluster> pclusters;
    std::optional<ScaledCluster> y_last;
    double lambda = 0.0;
    std::uint64_t base = 2;
    double tolerance = 0.0;
};

/// Absolute slack within which a dual constraint counts as tight.
double tightness_tolerance(const Instance& inst, double lambda);

/// Highest level j with b^j <= n.
int max_level(const Instance& inst, std::uint64_t base);

/**
 * Points x with alpha_x >= b^j dist(x, y), ordered by nonincreasing
 * alpha_x - b^j dist(x, y) and then by index.
 */
std::vector<PointIndex> candidate_set(const Instance& inst, const DualState& state, PointIndex y,
                                      int j);

/**
 * Scans centers y in ascending order, then levels j, for a set Y with
 * y in Y, floor_log(|Y|) = j, an active member when `require_active`, and
 *
 *     sum_{x in Y} (alpha_x - b^j dist(x, y)) >= lambda + margin.
 *
 * Returns the shortest qualifying prefix for the first (y, j) that has one.
 * With require_active = false and a positive margin this is the dual
 * feasibility check.
 */
std::optional<TightSet> detect_violation(const Instance& inst, const DualState& state,
                                         bool require_active, double margin);

/// Phase-one convention: margin = -tightness_tolerance.
std::optional<TightSet> detect_violation(const Instance& inst, const DualState& state,
                                         bool require_active);

/// Largest lhs - rhs over all dual constraints, found through the prefix argument.
double max_constraint_slack(const Instance& inst, std::span<const double> alpha, double lambda,
                            std::uint64_t base);

struct JoinExisting {
    PointIndex point = 0;
    std::size_t cluster = 0;
};

struct NewTight {
    TightSet set;
};

struct PhaseEvent {
    double increment = 0.0;
    std::variant<JoinExisting, NewTight> kind;
};

/**
 * Smallest uniform raise of the active duals after which an active point
 * reaches an existing cluster or a new constraint becomes tight. Joins win
 * ties; among joins the smallest point and then the earliest cluster win;
 * among tight sets the first (y, j) in scan order wins.
 *
 * Throws std::invalid_argument when no point is active.
 */
PhaseEvent next_event_increment(const Instance& inst, const DualState& state,
                                std::span<const ScaledCluster> pclusters);

/**
 * Runs the dual ascent until at most n - n' points remain active. A tight
 * set whose deactivation would leave fewer than n - n' active points is
 * returned separately as `y_last` and not added to `pclusters`.
 */
Phase1Output run_phase1(const Instance& inst, double lambda, std::uint64_t base);

/// Same, with an explicit coverage target (n' = 0 yields an empty run).
Phase1Output run_phase1(const Instance& inst, double lambda, std::uint64_t base,
                        std::size_t n_prime);

}  // namespace minsum

#endif
