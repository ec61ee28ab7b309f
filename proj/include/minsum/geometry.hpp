#ifndef MINSUM_GEOMETRY_HPP
#define MINSUM_GEOMETRY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "minsum/instance.hpp"

namespace minsum {

/**
 * A cluster carrying the scale bookkeeping of the primal-dual schema.
 *
 * `scale` is the exponent j with b^j = floor_b(|members|) at the moment the
 * cluster became tight. It is frozen: points that join later do not change
 * it, and neither does `center`, which may even leave `members` after
 * conflict resolution.
 */
struct ScaledCluster {
    IndexSet members;
    int scale = 0;
    PointIndex center = 0;
};

/// Half the sum of distances over all ordered pairs of `members`.
double cluster_cost(const Instance& inst, std::span<const PointIndex> members);

/// Coordinate mean. SqEuclidean mode only.
std::vector<double> centroid(const Instance& inst, std::span<const PointIndex> members);

/// Sum of squared distances from the members to their centroid.
double centroid_cost(const Instance& inst, std::span<const PointIndex> members);

struct Medoid {
    PointIndex index = 0;
    double sum = 0.0;
};

/// Member minimising the summed distance to all members (lowest index on ties).
Medoid best_medoid(const Instance& inst, std::span<const PointIndex> members);

/// Largest power of `base` not exceeding `m`; integer arithmetic only.
std::uint64_t floor_pow(std::uint64_t base, std::uint64_t m);

/// Exponent of floor_pow(base, m).
int floor_log(std::uint64_t base, std::uint64_t m);

/// base^exponent for small nonnegative exponents.
std::uint64_t int_pow(std::uint64_t base, int exponent);

/// b^j times the summed distance from the members to `center`.
double scaled_cost(const Instance& inst, std::span<const PointIndex> members, PointIndex center,
                   std::uint64_t base, int scale);

/// Distance from `x` to the cluster's center scaled by b^scale.
inline double scaled_distance(const Instance& inst, PointIndex x, const ScaledCluster& c,
                              std::uint64_t base) {
    return static_cast<double>(int_pow(base, c.scale)) * inst.distance(x, c.center);
}

}  // namespace minsum

#endif
