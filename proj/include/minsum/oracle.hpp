#ifndef MINSUM_ORACLE_HPP
#define MINSUM_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "minsum/dual_engine.hpp"
#include "minsum/instance.hpp"

/**
 * @file oracle.hpp
 * @brief Exhaustive reference computations for small instances.
 */

namespace minsum {

/// Largest symmetry-reduced labeling count (k+1)^n / k! enumerated exactly.
inline constexpr double kExhaustiveLabelingLimit = 1e7;

/// Largest n for which every subset is enumerated when checking the dual.
inline constexpr std::size_t kExhaustiveSubsetLimit = 16;

double canonical_labeling_count(std::size_t n, std::size_t k);

struct OracleSolution {
    std::vector<IndexSet> clusters;
    double cost = 0.0;
};

/**
 * Optimal min-sum clustering into at most k clusters covering at least n'
 * points, by enumerating every labeling with canonical cluster names.
 *
 * Throws std::invalid_argument above kExhaustiveLabelingLimit.
 */
OracleSolution brute_force_opt(const Instance& inst);

/// lhs - rhs of the constraint for (members, center) with the floor_b(|Y|) weight.
double constraint_slack(const Instance& inst, std::span<const double> alpha, double lambda,
                        std::uint64_t base, std::span<const PointIndex> members, PointIndex center);

struct ExhaustiveScan {
    /// Largest lhs - rhs over every (Y, y).
    double max_slack = 0.0;
    std::optional<TightSet> argmax;
    /// Some (Y, y) reaches lambda + margin, with an active member when required.
    bool qualifying = false;
};

/**
 * Enumerates every subset and every center. `active` may be empty when
 * `require_active` is false. Throws std::invalid_argument above
 * kExhaustiveSubsetLimit points.
 */
ExhaustiveScan exhaustive_scan(const Instance& inst, std::span<const double> alpha,
                               std::span<const char> active, double lambda, std::uint64_t base,
                               bool require_active, double margin);

struct FeasibilityReport {
    bool feasible = true;
    double worst_slack = 0.0;
    double tolerance = 0.0;
    bool exhaustive = false;
};

/// Dual feasibility within tightness_tolerance; exhaustive only when asked and n is small.
FeasibilityReport verify_dual_feasible(const Instance& inst, std::span<const double> alpha,
                                       double lambda, std::uint64_t base, bool exhaustive);

}  // namespace minsum

#endif
