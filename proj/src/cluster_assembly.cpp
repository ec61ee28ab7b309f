#include "minsum/cluster_assembly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace minsum {

std::vector<IndexSet> partition_evenly(std::span<const PointIndex> points, std::size_t m) {
    if (m == 0 || m > points.size()) {
        throw std::invalid_argument("partition_evenly: need 1 <= m <= |S|");
    }
    IndexSet sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<IndexSet> out(m);
    const std::size_t q = sorted.size() / m;
    const std::size_t r = sorted.size() % m;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t len = q + (i < r ? 1 : 0);
        out[i].assign(sorted.begin() + static_cast<std::ptrdiff_t>(pos),
                      sorted.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return out;
}

AssembledClustering run_phase3(std::span<const MetaAssignment> assignments, std::uint64_t base) {
    if (base < 2) {
        throw std::invalid_argument("run_phase3: base must be at least 2");
    }

    struct AnchorParts {
        int scale = 0;
        PointIndex center = 0;
        std::map<int, IndexSet> by_scale;
    };
    // std::map keeps anchors in creation order; the overflow anchor sorts last.
    std::map<std::size_t, AnchorParts> anchors;
    for (const auto& m : assignments) {
        if (m.part.empty()) {
            throw std::invalid_argument("run_phase3: empty part");
        }
        auto& a = anchors[m.anchor];
        a.scale = m.anchor_scale;
        a.center = m.part_ctr;
        auto& bucket = a.by_scale[m.part_scale];
        bucket.insert(bucket.end(), m.part.begin(), m.part.end());
    }

    AssembledClustering out;
    auto open = [&](std::size_t anchor, const AnchorParts& a, const IndexSet& pool, int scale,
                    std::size_t count, Bucket bucket) {
        for (auto& members : partition_evenly(pool, count)) {
            out.clusters.push_back({std::move(members), scale, a.center, anchor, bucket});
        }
    };

    for (auto& [anchor, a] : anchors) {
        IndexSet top;
        for (auto& [scale, pts] : a.by_scale) {
            std::sort(pts.begin(), pts.end());
            if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) {
                throw std::invalid_argument("run_phase3: parts overlap");
            }
            out.per_anchor_stats.push_back({anchor, scale, pts.size()});
            if (scale >= a.scale - 2) {
                top.insert(top.end(), pts.begin(), pts.end());
            }
        }

        if (!top.empty()) {
            const std::size_t unit = int_pow(base, a.scale + 2);
            open(anchor, a, top, a.scale, std::max<std::size_t>(1, top.size() / unit), Bucket::Top);
        }

        for (const auto& [scale, pts] : a.by_scale) {
            if (scale >= a.scale - 2) {
                continue;
            }
            const std::size_t unit = int_pow(base, scale + 2);
            const std::size_t count = pts.size() / unit;
            if (count > 0) {
                open(anchor, a, pts, scale, count, Bucket::Low);
            } else {
                out.discards.push_back({anchor, scale, pts});
                out.discarded.insert(out.discarded.end(), pts.begin(), pts.end());
            }
        }
    }
    std::sort(out.discarded.begin(), out.discarded.end());
    return out;
}

}  // namespace minsum
