#include "minsum/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minsum {

namespace {

void check_targets(std::size_t n, std::size_t k, std::size_t n_prime, double epsilon) {
    if (n == 0) {
        throw InputError("instance has no points");
    }
    if (k == 0) {
        throw InputError("k must be at least 1");
    }
    if (n_prime == 0 || n_prime > n) {
        std::ostringstream msg;
        msg << "n' must lie in [1, " << n << "], got " << n_prime;
        throw InputError(msg.str());
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InputError("epsilon must lie in (0, 1]");
    }
}

}  // namespace

Instance Instance::from_points(std::vector<std::vector<double>> points, std::size_t k,
                               std::size_t n_prime, double epsilon) {
    check_targets(points.size(), k, n_prime, epsilon);
    Instance inst;
    inst.mode_ = DistanceMode::SqEuclidean;
    inst.n_ = points.size();
    inst.dim_ = points.front().size();
    if (inst.dim_ == 0) {
        throw InputError("points must have at least one coordinate");
    }
    inst.coords_.reserve(inst.n_ * inst.dim_);
    for (const auto& p : points) {
        if (p.size() != inst.dim_) {
            throw InputError("points have inconsistent dimensions");
        }
        for (double v : p) {
            if (!std::isfinite(v)) {
                throw InputError("non-finite coordinate");
            }
            inst.coords_.push_back(v);
        }
    }

    const std::size_t n = inst.n_;
    const std::size_t d = inst.dim_;
    inst.dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = inst.coords_.data() + i * d;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = inst.coords_.data() + j * d;
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = xi[c] - xj[c];
                s += diff * diff;
            }
            inst.dist_[i * n + j] = s;
            inst.dist_[j * n + i] = s;
        }
    }
    inst.finish(k, n_prime, epsilon);
    return inst;
}

Instance Instance::from_matrix(const std::vector<std::vector<double>>& matrix, std::size_t k,
                               std::size_t n_prime, double epsilon) {
    check_targets(matrix.size(), k, n_prime, epsilon);
    const std::size_t n = matrix.size();
    for (const auto& row : matrix) {
        if (row.size() != n) {
            throw InputError("distance matrix is not square");
        }
    }

    double scale = 0.0;
    for (const auto& row : matrix) {
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0) {
                throw InputError("distance matrix has a negative or non-finite entry");
            }
            scale = std::max(scale, v);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i][i] > kRelTolerance * scale) {
            throw InputError("distance matrix has a nonzero diagonal entry at " + std::to_string(i));
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = matrix[i][j];
            const double b = matrix[j][i];
            if (std::abs(a - b) > kRelTolerance * std::max(a, b)) {
                std::ostringstream msg;
                msg << "distance matrix is not symmetric at (" << i << ", " << j << ")";
                throw InputError(msg.str());
            }
        }
    }

    Instance inst;
    inst.mode_ = DistanceMode::ExplicitMetric;
    inst.n_ = n;
    inst.dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (matrix[i][j] + matrix[j][i]);
            inst.dist_[i * n + j] = v;
            inst.dist_[j * n + i] = v;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = inst.dist_[i * n + j];
            for (std::size_t m = 0; m < n; ++m) {
                const double detour = inst.dist_[i * n + m] + inst.dist_[m * n + j];
                if (dij > detour * (1.0 + kTriangleTolerance) + kRelTolerance * scale) {
                    std::ostringstream msg;
                    msg << "triangle inequality violated: d(" << i << "," << j << ") > d(" << i << ","
                        << m << ") + d(" << m << "," << j << ")";
                    throw InputError(msg.str());
                }
            }
        }
    }
    inst.finish(k, n_prime, epsilon);
    return inst;
}

void Instance::finish(std::size_t k, std::size_t n_prime, double epsilon) {
    k_ = k;
    n_prime_ = n_prime;
    epsilon_ = epsilon;
    max_dist_ = 0.0;
    min_pos_dist_ = std::numeric_limits<double>::infinity();
    for (double v : dist_) {
        max_dist_ = std::max(max_dist_, v);
        if (v > 0.0) {
            min_pos_dist_ = std::min(min_pos_dist_, v);
        }
    }
    if (max_dist_ == 0.0) {
        min_pos_dist_ = 0.0;
    }
}

Instance Instance::with_targets(std::size_t k, std::size_t n_prime, double epsilon) const {
    check_targets(n_, k, n_prime, epsilon);
    Instance copy = *this;
    copy.k_ = k;
    copy.n_prime_ = n_prime;
    copy.epsilon_ = epsilon;
    return copy;
}

std::span<const double> Instance::point(PointIndex i) const {
    if (mode_ != DistanceMode::SqEuclidean) {
        throw std::logic_error("coordinates are not available for an explicit metric");
    }
    if (i >= n_) {
        throw std::out_of_range("point index out of range");
    }
    return {coords_.data() + i * dim_, dim_};
}

double Instance::spread() const {
    return min_pos_dist_ > 0.0 ? max_dist_ / min_pos_dist_ : 1.0;
}

double Instance::total_pair_distance() const {
    double s = 0.0;
    for (double v : dist_) {
        s += v;
    }
    return s;
}

double pair_distance(const Instance& inst, PointIndex i, PointIndex j) {
    if (i >= inst.size() || j >= inst.size()) {
        throw std::out_of_range("point index out of range");
    }
    return inst.distance(i, j);
}

std::string to_string(DistanceMode mode) {
    return mode == DistanceMode::SqEuclidean ? "sqeuclid" : "metric";
}

}  // namespace minsum
