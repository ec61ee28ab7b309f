#ifndef MINSUM_INSTANCE_HPP
#define MINSUM_INSTANCE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file instance.hpp
 * @brief Problem instances for min-sum k-clustering with outliers.
 */

namespace minsum {

using PointIndex = std::size_t;

/// Sorted, duplicate-free list of point indices.
using IndexSet = std::vector<PointIndex>;

enum class DistanceMode { SqEuclidean, ExplicitMetric };

/// Malformed or inconsistent input data. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative tolerance used for floating-point equality throughout the library.
inline constexpr double kRelTolerance = 1e-9;

/// Relative slack accepted on triangle-inequality checks of explicit metrics.
inline constexpr double kTriangleTolerance = 1e-6;

/**
 * A point set with its distance model and clustering targets.
 *
 * In `SqEuclidean` mode the instance owns d-dimensional coordinates and the
 * distance between two points is their squared Euclidean distance. In
 * `ExplicitMetric` mode it owns a validated symmetric matrix. Either way all
 * pairwise distances are materialised once at construction, so lookups are
 * O(1) and the object is immutable afterwards.
 */
class Instance {
public:
    /**
     * @param points One coordinate vector per point, all with the same dimension.
     * @param k Target number of clusters, at least 1.
     * @param n_prime Number of points the solution must cover, in [1, n].
     * @param epsilon Outlier slack, in (0, 1].
     */
    static Instance from_points(std::vector<std::vector<double>> points, std::size_t k,
                                std::size_t n_prime, double epsilon);

    /// Validates symmetry, zero diagonal, nonnegativity and the triangle inequality.
    static Instance from_matrix(const std::vector<std::vector<double>>& matrix, std::size_t k,
                                std::size_t n_prime, double epsilon);

    /// Same geometry, different targets.
    Instance with_targets(std::size_t k, std::size_t n_prime, double epsilon) const;

    DistanceMode mode() const { return mode_; }
    std::size_t size() const { return n_; }
    std::size_t dimension() const { return dim_; }
    std::size_t k() const { return k_; }
    std::size_t n_prime() const { return n_prime_; }
    double epsilon() const { return epsilon_; }

    /// Coordinates of point `i`. Throws std::logic_error in ExplicitMetric mode.
    std::span<const double> point(PointIndex i) const;

    /// Unchecked distance lookup.
    double distance(PointIndex i, PointIndex j) const { return dist_[i * n_ + j]; }

    /// Row `i` of the distance matrix.
    std::span<const double> distance_row(PointIndex i) const {
        return {dist_.data() + i * n_, n_};
    }

    double max_distance() const { return max_dist_; }

    /// Smallest nonzero pairwise distance, or 0 when all points coincide.
    double min_positive_distance() const { return min_pos_dist_; }

    /// Ratio of largest to smallest nonzero distance (1 for degenerate inputs).
    double spread() const;

    /// Sum of distances over all ordered pairs.
    double total_pair_distance() const;

private:
    Instance() = default;
    void finish(std::size_t k, std::size_t n_prime, double epsilon);

    DistanceMode mode_ = DistanceMode::SqEuclidean;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::size_t k_ = 1;
    std::size_t n_prime_ = 0;
    double epsilon_ = 1.0;
    std::vector<double> coords_;
    std::vector<double> dist_;
    double max_dist_ = 0.0;
    double min_pos_dist_ = 0.0;
};

/// Checked distance between two points: squared Euclidean or matrix entry.
double pair_distance(const Instance& inst, PointIndex i, PointIndex j);

std::string to_string(DistanceMode mode);

}  // namespace minsum

#endif
