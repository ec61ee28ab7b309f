#include "minsum/conflict_resolution.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace minsum {

namespace {

constexpr std::size_t kNoPart = std::numeric_limits<std::size_t>::max();

/// Smallest dual among points of `y` that witness its conflict with `anchor`.
double witness_floor(const Instance& inst, const ScaledCluster& y, const ScaledCluster& anchor,
                     std::span<const double> alpha, std::uint64_t base, double tol) {
    double floor = std::numeric_limits<double>::infinity();
    for (PointIndex x : y.members) {
        if (std::binary_search(anchor.members.begin(), anchor.members.end(), x)) {
            const double reach =
                std::max(scaled_distance(inst, x, y, base), scaled_distance(inst, x, anchor, base));
            if (alpha[x] > reach + tol) {
                floor = std::min(floor, alpha[x]);
            }
        }
    }
    return floor;
}

}  // namespace

bool conflict_edge(const Instance& inst, const ScaledCluster& a, const ScaledCluster& b,
                   std::span<const double> alpha, std::uint64_t base, double tolerance) {
    auto ia = a.members.begin();
    auto ib = b.members.begin();
    while (ia != a.members.end() && ib != b.members.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            const PointIndex x = *ia;
            const double reach =
                std::max(scaled_distance(inst, x, a, base), scaled_distance(inst, x, b, base));
            if (alpha[x] > reach + tolerance) {
                return true;
            }
            ++ia;
            ++ib;
        }
    }
    return false;
}

Phase2Output run_phase2(const Instance& inst, const Phase1Output& phase1, std::size_t n_prime) {
    const auto& clusters = phase1.pclusters;
    const auto& alpha = phase1.alpha;
    const double tol = phase1.tolerance;
    const std::uint64_t base = phase1.base;

    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return clusters[a].scale > clusters[b].scale;
    });

    Phase2Output out;
    std::vector<std::size_t> owner(inst.size(), kNoPart);
    auto& parts = out.assignments;
    std::vector<char> anchor_part;

    for (std::size_t idx : order) {
        const ScaledCluster& y = clusters[idx];
        std::size_t blocking = kNoPart;
        for (std::size_t a : out.anchors) {
            if (conflict_edge(inst, y, clusters[a], alpha, base, tol)) {
                blocking = a;
                break;
            }
        }

        if (blocking != kNoPart) {
            out.blocked.push_back({idx, blocking});
            const double floor = witness_floor(inst, y, clusters[blocking], alpha, base, tol);
            MetaAssignment m{blocking, clusters[blocking].scale, {}, y.scale, clusters[blocking].center};
            for (PointIndex x : y.members) {
                if (owner[x] == kNoPart && alpha[x] >= floor - tol) {
                    m.part.push_back(x);
                    owner[x] = parts.size();
                }
            }
            if (!m.part.empty()) {
                anchor_part.push_back(0);
                parts.push_back(std::move(m));
            }
            continue;
        }

        // An accepted cluster takes its points from earlier parts, except
        // from an anchor's own part already down to b^scale points.
        IndexSet own;
        for (PointIndex x : y.members) {
            if (owner[x] != kNoPart) {
                auto& prev = parts[owner[x]];
                if (anchor_part[owner[x]] && prev.part.size() <= int_pow(base, prev.anchor_scale)) {
                    continue;
                }
                prev.part.erase(std::lower_bound(prev.part.begin(), prev.part.end(), x));
            }
            owner[x] = parts.size();
            own.push_back(x);
        }
        anchor_part.push_back(1);
        parts.push_back({idx, y.scale, std::move(own), y.scale, y.center});
        out.anchors.push_back(idx);
    }

    std::size_t assigned = 0;
    for (std::size_t x = 0; x < inst.size(); ++x) {
        assigned += owner[x] != kNoPart ? 1 : 0;
    }
    if (assigned > n_prime) {
        throw std::invalid_argument("run_phase2: collected clusters cover more than n' points");
    }
    if (assigned < n_prime) {
        if (!phase1.y_last) {
            throw std::invalid_argument("run_phase2: cannot reach n' points without an overflow cluster");
        }
        const ScaledCluster& last = *phase1.y_last;
        MetaAssignment m{kOverflowAnchor, last.scale, {}, last.scale, last.center};
        for (PointIndex x : last.members) {
            if (assigned == n_prime) {
                break;
            }
            if (owner[x] == kNoPart) {
                m.part.push_back(x);
                owner[x] = parts.size();
                ++assigned;
            }
        }
        if (assigned < n_prime) {
            throw std::invalid_argument("run_phase2: overflow cluster too small to reach n' points");
        }
        parts.push_back(std::move(m));
    }

    std::erase_if(parts, [](const MetaAssignment& m) { return m.part.empty(); });

    for (const auto& c : clusters) {
        for (PointIndex x : c.members) {
            if (owner[x] == kNoPart) {
                out.stranded.push_back(x);
            }
        }
    }
    std::sort(out.stranded.begin(), out.stranded.end());
    out.stranded.erase(std::unique(out.stranded.begin(), out.stranded.end()), out.stranded.end());
    return out;
}

}  // namespace minsum
