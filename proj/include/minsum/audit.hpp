#ifndef MINSUM_AUDIT_HPP
#define MINSUM_AUDIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "minsum/lagrange_search.hpp"

/**
 * @file audit.hpp
 * @brief Runtime checks of every provable invariant of a solver run.
 */

namespace minsum {

struct InvariantFailure {
    /// Stable identifier of the violated check, e.g. "phase2.connection".
    std::string check;
    std::string detail;
};

struct AuditReport {
    bool dual_feasible = true;
    /// Largest lhs - rhs over all audited certificates; -inf when none were audited.
    double worst_constraint_slack;
    std::vector<std::string> size_bound_violations;
    /// Points of n' left unclustered, and the largest number allowed.
    std::size_t outlier_excess = 0;
    double outlier_bound = 0.0;
    std::optional<double> cost_ratio;
    bool cost_ratio_infinite = false;
    double ratio_bound = 0.0;
    std::vector<InvariantFailure> invariant_failures;
    std::size_t probes_audited = 0;

    AuditReport();
    bool ok() const;
    void fail(std::string check, std::string detail);
    void merge(const AuditReport& other);
};

/**
 * Result-level checks: at most k disjoint clusters of valid indices,
 * outliers as the complement, clustered count in [(1 - eps) n', n'],
 * the stored cost, dual feasibility of every certificate and, with
 * `oracle_opt`, the approximation bound.
 */
AuditReport audit(const Instance& inst, const ClusteringResult& result,
                  std::optional<double> oracle_opt = std::nullopt);

/**
 * Probe-level checks across the three phases: dual feasibility (exhaustive
 * when asked and n is small), dual values of collected clusters, the common
 * value of unclustered duals, exactly n' meta-assigned points, independence
 * of anchors, connection cost, size windows and the discard bound.
 */
AuditReport audit_probe(const Instance& inst, const ProbeTrace& trace, bool exhaustive_dual = false);

/// Multi-line human-readable rendering, one "key: value" per line.
std::string format_report(const AuditReport& report);

}  // namespace minsum

#endif
