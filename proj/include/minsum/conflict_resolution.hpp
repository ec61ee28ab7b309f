#ifndef MINSUM_CONFLICT_RESOLUTION_HPP
#define MINSUM_CONFLICT_RESOLUTION_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "minsum/dual_engine.hpp"

namespace minsum {

/// Anchor id used for the overflow cluster kept aside by the dual ascent.
inline constexpr std::size_t kOverflowAnchor = std::numeric_limits<std::size_t>::max();

/**
 * One meta-cluster part: points grouped around an accepted anchor.
 *
 * `part_scale` is the scale of the cluster the points came from, and
 * `part_ctr` is always the anchor's center.
 */
struct MetaAssignment {
    std::size_t anchor = 0;
    int anchor_scale = 0;
    IndexSet part;
    int part_scale = 0;
    PointIndex part_ctr = 0;
};

struct Blocking {
    std::size_t cluster = 0;
    std::size_t anchor = 0;
};

struct Phase2Output {
    std::vector<MetaAssignment> assignments;
    /// Accepted clusters in acceptance order.
    std::vector<std::size_t> anchors;
    /// Rejected clusters with the anchor that blocked them.
    std::vector<Blocking> blocked;
    /// Points of collected clusters that ended up in no part.
    IndexSet stranded;
};

/**
 * True iff a shared point pays strictly more than its scaled distance to
 * both clusters: alpha_x > max(d(x, a), d(x, b)) + tolerance.
 */
bool conflict_edge(const Instance& inst, const ScaledCluster& a, const ScaledCluster& b,
                   std::span<const double> alpha, std::uint64_t base, double tolerance);

/**
 * Greedy independent set over the conflict graph in order of nonincreasing
 * scale (stable), grouping rejected clusters' points around their blocking
 * anchor and topping up to exactly n' points from the overflow cluster.
 *
 * A rejected cluster contributes its unassigned points whose dual is at
 * least the smallest dual among its conflict witnesses with the blocking
 * anchor. An accepted cluster takes its points out of earlier parts, but an
 * anchor's own part never drops below b^scale points this way.
 *
 * Throws std::invalid_argument when the inputs cannot reach n' points.
 */
Phase2Output run_phase2(const Instance& inst, const Phase1Output& phase1, std::size_t n_prime);

}  // namespace minsum

#endif
