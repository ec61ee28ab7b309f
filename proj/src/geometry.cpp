#include "minsum/geometry.hpp"

#include <limits>
#include <stdexcept>

namespace minsum {

namespace {

void require_nonempty(std::span<const PointIndex> members, const char* what) {
    if (members.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty cluster");
    }
}

void require_base(std::uint64_t base) {
    if (base < 2) {
        throw std::invalid_argument("scale base must be at least 2");
    }
}

}  // namespace

double cluster_cost(const Instance& inst, std::span<const PointIndex> members) {
    require_nonempty(members, "cluster_cost");
    double s = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        const auto row = inst.distance_row(members[a]);
        for (std::size_t c = a + 1; c < members.size(); ++c) {
            s += row[members[c]];
        }
    }
    return s;
}

std::vector<double> centroid(const Instance& inst, std::span<const PointIndex> members) {
    require_nonempty(members, "centroid");
    if (inst.mode() != DistanceMode::SqEuclidean) {
        throw std::logic_error("centroid is undefined for an explicit metric");
    }
    std::vector<double> mean(inst.dimension(), 0.0);
    for (PointIndex i : members) {
        const auto p = inst.point(i);
        for (std::size_t c = 0; c < mean.size(); ++c) {
            mean[c] += p[c];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(members.size());
    }
    return mean;
}

double centroid_cost(const Instance& inst, std::span<const PointIndex> members) {
    const auto mean = centroid(inst, members);
    double s = 0.0;
    for (PointIndex i : members) {
        const auto p = inst.point(i);
        for (std::size_t c = 0; c < mean.size(); ++c) {
            const double diff = p[c] - mean[c];
            s += diff * diff;
        }
    }
    return s;
}

Medoid best_medoid(const Instance& inst, std::span<const PointIndex> members) {
    require_nonempty(members, "best_medoid");
    Medoid best{members.front(), std::numeric_limits<double>::infinity()};
    for (PointIndex y : members) {
        const auto row = inst.distance_row(y);
        double s = 0.0;
        for (PointIndex x : members) {
            s += row[x];
        }
        if (s < best.sum || (s == best.sum && y < best.index)) {
            best = {y, s};
        }
    }
    return best;
}

std::uint64_t floor_pow(std::uint64_t base, std::uint64_t m) {
    require_base(base);
    if (m == 0) {
        throw std::invalid_argument("floor_pow: m must be positive");
    }
    std::uint64_t p = 1;
    while (p <= m / base) {
        p *= base;
    }
    return p;
}

int floor_log(std::uint64_t base, std::uint64_t m) {
    require_base(base);
    if (m == 0) {
        throw std::invalid_argument("floor_log: m must be positive");
    }
    int j = 0;
    std::uint64_t p = 1;
    while (p <= m / base) {
        p *= base;
        ++j;
    }
    return j;
}

std::uint64_t int_pow(std::uint64_t base, int exponent) {
    if (exponent < 0) {
        throw std::invalid_argument("int_pow: negative exponent");
    }
    std::uint64_t p = 1;
    for (int i = 0; i < exponent; ++i) {
        if (p > std::numeric_limits<std::uint64_t>::max() / base) {
            throw std::overflow_error("int_pow: overflow");
        }
        p *= base;
    }
    return p;
}

double scaled_cost(const Instance& inst, std::span<const PointIndex> members, PointIndex center,
                   std::uint64_t base, int scale) {
    require_nonempty(members, "scaled_cost");
    require_base(base);
    const auto row = inst.distance_row(center);
    double s = 0.0;
    for (PointIndex x : members) {
        s += row[x];
    }
    return static_cast<double>(int_pow(base, scale)) * s;
}

}  // namespace minsum
