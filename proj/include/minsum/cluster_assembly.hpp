#ifndef MINSUM_CLUSTER_ASSEMBLY_HPP
#define MINSUM_CLUSTER_ASSEMBLY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "minsum/conflict_resolution.hpp"

namespace minsum {

enum class Bucket {
    /// Parts within two scales of the anchor, pooled together.
    Top,
    /// A single lower scale, opened only when it can pay for itself.
    Low,
};

struct AssembledCluster {
    IndexSet members;
    /// Implicit scale: the anchor's for Top buckets, the part scale for Low ones.
    int scale = 0;
    /// Implicit center: always the anchor's center.
    PointIndex center = 0;
    std::size_t anchor = 0;
    Bucket bucket = Bucket::Top;
};

struct BucketCount {
    std::size_t anchor = 0;
    int scale = 0;
    std::size_t count = 0;
};

struct DiscardRecord {
    std::size_t anchor = 0;
    int scale = 0;
    IndexSet points;
};

struct AssembledClustering {
    std::vector<AssembledCluster> clusters;
    IndexSet discarded;
    std::vector<DiscardRecord> discards;
    /// Points per (anchor, part scale), in anchor order then ascending scale.
    std::vector<BucketCount> per_anchor_stats;
};

/// Splits `points` in ascending order into m contiguous groups whose sizes differ by at most one.
std::vector<IndexSet> partition_evenly(std::span<const PointIndex> points, std::size_t m);

/**
 * Opens the final clusters. For an anchor at scale p, parts at scales
 * >= p - 2 are pooled and split into max(1, floor(|pool| / b^{p+2}))
 * clusters; each lower scale p' is split into floor(|Y_p'| / b^{p'+2})
 * clusters, or discarded when that is zero.
 */
AssembledClustering run_phase3(std::span<const MetaAssignment> assignments, std::uint64_t base);

}  // namespace minsum

#endif
