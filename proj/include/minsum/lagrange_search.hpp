#ifndef MINSUM_LAGRANGE_SEARCH_HPP
#define MINSUM_LAGRANGE_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "minsum/cluster_assembly.hpp"
#include "minsum/conflict_resolution.hpp"
#include "minsum/dual_engine.hpp"
#include "minsum/instance.hpp"

/**
 * @file lagrange_search.hpp
 * @brief Binary search over the uniform cluster-opening cost and the
 * top-level min-sum clustering solver.
 */

namespace minsum {

enum class Branch {
    /// Solution from the upper end of the bracket (at most k clusters).
    BipointHigh,
    /// The k largest clusters from the lower end of the bracket.
    BipointLow,
    /// Few clusters: solved directly, exactly when small enough.
    SmallK,
    /// All distances vanish or k >= n'; zero cost.
    Degenerate,
};

std::string to_string(Branch branch);
Branch branch_from_string(const std::string& text);

struct DualCertificate {
    double lambda = 0.0;
    std::vector<double> alpha;
};

/// Everything one primal-dual run produced, for audits.
struct ProbeTrace {
    double lambda = 0.0;
    std::uint64_t base = 2;
    Phase1Output phase1;
    Phase2Output phase2;
    AssembledClustering phase3;
};

struct ProbeResult {
    /// Final clusters, after the optional removal of the smallest one.
    std::vector<IndexSet> clusters;
    /// One less than the number of clusters before removal.
    long k_prime = 0;
    bool removed_small = false;
    ProbeTrace trace;
};

struct SolverOptions {
    /// Seed for the local search used on large small-k instances.
    std::uint64_t seed = 0;
    /// Route k <= 4/epsilon to the small-k solver. Turning this off forces
    /// the Lagrangian search for every k.
    bool delegate_small_k = true;
    /// Called after every probe, in probe order.
    std::function<void(const Instance&, const ProbeTrace&)> on_probe;
};

struct SearchDiagnostics {
    std::size_t probes = 0;
    /// Probe pairs where a larger lambda produced more clusters.
    std::size_t monotonicity_violations = 0;
    double delta = 0.0;
};

struct ClusteringResult {
    std::vector<IndexSet> clusters;
    IndexSet outliers;
    double total_cost = 0.0;
    double lambda_low = 0.0;
    double lambda_high = 0.0;
    long k_low = 0;
    long k_high = 0;
    double rho1 = 0.0;
    std::vector<DualCertificate> certificates;
    Branch branch = Branch::Degenerate;
    std::uint64_t base = 2;
    double c_eps = 0.0;
    /// False when the small-k solver fell back to local search.
    bool exact = true;
    SearchDiagnostics diagnostics;
};

/// Integer scale base: max(2, ceil((1 + epsilon) / epsilon)).
std::uint64_t scale_base(double epsilon);

/// 18 b^3 / (b - 1).
double c_epsilon(std::uint64_t base);

/// Guaranteed cost factor 8 (c + 1) / epsilon against the optimum.
double approximation_factor(std::uint64_t base, double epsilon);

/// (k - k2) / (k1 - k2) for a bracket with k1 > k >= k2.
double bipoint_rho(long k, long k1, long k2);

/// True when the lower end of the bracket is used: rho >= 1 - epsilon / 4.
bool prefers_low_side(double rho, double epsilon);

/**
 * One primal-dual run at opening cost `lambda`; drops the smallest cluster
 * when it holds at most epsilon n' / 3 points.
 */
ProbeResult probe(const Instance& inst, double lambda, std::uint64_t base);

/// Min-sum k-clustering of at least (1 - epsilon) n' and at most n' points.
ClusteringResult min_sum_clustering(const Instance& inst, const SolverOptions& options = {});

/**
 * Direct solver for few clusters: exhaustive branch and bound when the
 * symmetry-reduced labeling count is at most 1e7, seeded local search
 * otherwise (`exact` is then false).
 */
ClusteringResult small_k_solver(const Instance& inst, std::uint64_t seed = 0);

/// Sorts clusters, fills outliers and recomputes the cost.
void canonicalize(const Instance& inst, ClusteringResult& result);

}  // namespace minsum

#endif
